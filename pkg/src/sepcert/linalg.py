"""Dense complex linear algebra kernels shared by the whole package.

Everything here operates on plain ``numpy`` arrays with ``complex128``
entries. Matrix indices appearing in *public signatures* (Weyl matrices,
block selectors) are 1-based, matching the usual mathematical notation;
internal storage is ordinary 0-based row-major numpy.

The column-stacking convention is used throughout: ``vec`` stacks matrix
columns from left to right, and ``mat`` is its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NumericalError(RuntimeError):
    """A numerical kernel (SVD/eigensolver) failed to converge."""


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used by the decision layer.

    :param hermiticity_tol: relative bound on ``max|Q - Q^dag|``.
    :param psd_tol: relative bound on how negative the smallest eigenvalue
        of a nominally PSD matrix may be.
    :param rank_tol: singular values below ``rank_tol * sigma_max`` are
        treated as zero.
    :param reconstruction_tol: absolute bound on certificate reconstruction
        residuals.
    """

    hermiticity_tol: float = 1e-10
    psd_tol: float = 1e-9
    rank_tol: float = 1e-10
    reconstruction_tol: float = 1e-9

    def __post_init__(self) -> None:
        for name in ("hermiticity_tol", "psd_tol", "rank_tol", "reconstruction_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class PsdCheck:
    """Outcome of a positive-semidefiniteness test with diagnostics."""

    passed: bool
    min_eigenvalue: float
    hermiticity_defect: float

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Singular value decomposition ``Q = sum_i s_i |u_i><v_i|``.

    ``left_vectors`` and ``right_vectors`` hold the singular vectors as
    *columns*; ``right_vectors`` stores the kets ``|v_i>`` (the conjugate of
    the rows of the usual ``V^dag`` factor). Singular values are sorted in
    non-increasing order and ``numerical_rank`` counts those above
    ``rank_tol * s_max``.
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    numerical_rank: int


def vec(matrix: np.ndarray) -> np.ndarray:
    """Stack the columns of ``matrix`` into one vector, leftmost first.

    For a 2x2 matrix ``[[a, b], [c, d]]`` this returns ``(a, c, b, d)``.
    """
    return np.asarray(matrix, dtype=complex).T.reshape(-1)


def mat(vector: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`: reshape a vector into a rows-by-cols matrix.

    :raises ValueError: if the vector length does not equal ``rows * cols``.
    """
    v = np.asarray(vector, dtype=complex).reshape(-1)
    if v.size != rows * cols:
        raise ValueError(f"cannot reshape a length-{v.size} vector into {rows}x{cols}")
    return v.reshape(cols, rows).T


def weyl(dim: int, i: int, j: int) -> np.ndarray:
    """The dim-by-dim matrix unit with a single 1 in entry (i, j), 1-based."""
    if not (1 <= i <= dim and 1 <= j <= dim):
        raise ValueError(f"Weyl indices ({i}, {j}) out of range for dimension {dim}")
    out = np.zeros((dim, dim), dtype=complex)
    out[i - 1, j - 1] = 1.0
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def vec_permutation(m: int, n: int) -> np.ndarray:
    """The mn-by-mn permutation matrix P(m, n) exchanging tensor factors.

    Built as ``sum_ij E_ij (x) E_ji`` over the m-by-n matrix units. It is
    real orthogonal and satisfies ``B (x) A = P(m,n)^T (A (x) B) P(m,n)``
    for ``A`` m-by-m and ``B`` n-by-n.
    """
    if m < 1 or n < 1:
        raise ValueError("factor dimensions must be positive")
    out = np.zeros((m * n, m * n))
    for i in range(m):
        for j in range(n):
            # E_ij is m x n, E_ji its transpose; kron of the pair is mn x mn.
            out[i * n + j, j * m + i] = 1.0
    return out


def partial_transpose(matrix: np.ndarray, dims: tuple[int, int], factor: int) -> np.ndarray:
    """Transpose one tensor factor of a matrix on a bipartite space.

    :param matrix: square matrix of side ``dims[0] * dims[1]``.
    :param dims: the two factor dimensions ``(m, n)``.
    :param factor: 1 to transpose the first factor, 2 for the second.
    """
    m, n = dims
    q = np.asarray(matrix, dtype=complex)
    if q.shape != (m * n, m * n):
        raise ValueError(f"matrix shape {q.shape} does not match factors {dims}")
    if factor not in (1, 2):
        raise ValueError("factor must be 1 or 2")
    t = q.reshape(m, n, m, n)
    if factor == 1:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(m * n, m * n)


def is_psd(matrix: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> PsdCheck:
    """Test whether a square matrix is Hermitian positive semidefinite.

    Hermiticity is required up to ``hermiticity_tol`` relative to the
    largest entry; eigenvalues of the Hermitian part may dip below zero by
    at most ``psd_tol`` relative to the spectral radius.
    """
    q = np.asarray(matrix, dtype=complex)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError("is_psd requires a square matrix")
    defect = float(np.abs(q - q.conj().T).max())
    scale = float(np.abs(q).max()) if q.size else 0.0
    hermitian_ok = defect <= tol.hermiticity_tol * (1.0 + scale)
    sym = (q + q.conj().T) / 2.0
    try:
        eigenvalues = np.linalg.eigvalsh(sym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise NumericalError(f"eigensolver failed on a {q.shape[0]}x{q.shape[0]} matrix") from exc
    min_eig = float(eigenvalues[0])
    radius = float(np.abs(eigenvalues).max())
    passed = hermitian_ok and min_eig >= -tol.psd_tol * (1.0 + radius)
    return PsdCheck(passed=passed, min_eigenvalue=min_eig, hermiticity_defect=defect)


def svd(matrix: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> SvdResult:
    """Thin SVD with the numerical rank relative to the largest value.

    :raises NumericalError: if the underlying factorization does not
        converge.
    """
    q = np.asarray(matrix, dtype=complex)
    if q.ndim != 2:
        raise ValueError("svd requires a matrix")
    try:
        u, s, vh = np.linalg.svd(q, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD failed to converge on a {q.shape[0]}x{q.shape[1]} matrix: {exc}"
        ) from exc
    s_max = float(s[0]) if s.size else 0.0
    rank = int(np.count_nonzero(s > tol.rank_tol * s_max)) if s_max > 0 else 0
    return SvdResult(
        singular_values=s,
        left_vectors=u,
        right_vectors=vh.conj().T,
        numerical_rank=rank,
    )
