"""Density-matrix and pure-state containers plus canonical constructors.

Random constructors are seeded and reproducible: they draw from numpy's
``default_rng`` (the PCG64 bit generator) in a fixed order, so a given seed
yields the same state on every platform and in every future release.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOLERANCES, Tolerances, is_psd, kron

_TRACE_TOL = 1e-12
_NORM_TOL = 1e-12


def _check_dims(dims: tuple[int, ...], side: int) -> None:
    if len(dims) < 1 or any(int(d) != d or d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive integers, got {dims}")
    if math.prod(dims) != side:
        raise ValueError(f"product of dims {dims} does not match side length {side}")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, PSD, unit-trace matrix with subsystem dimensions.

    Construction validates all three physical invariants (within the given
    tolerances) and finiteness of every entry.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("a density matrix must be square")
        if not np.all(np.isfinite(m)):
            raise ValueError("a density matrix must have finite entries")
        dims = tuple(int(d) for d in self.dims)
        _check_dims(dims, m.shape[0])
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > _TRACE_TOL:
            raise ValueError(f"trace must be 1 within {_TRACE_TOL}, got {trace}")
        check = is_psd(m, self.tol)
        if not check:
            raise ValueError(
                "matrix is not positive semidefinite within tolerance "
                f"(min eigenvalue {check.min_eigenvalue:.3e}, "
                f"hermiticity defect {check.hermiticity_defect:.3e})"
            )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def side(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_factors(self) -> int:
        return len(self.dims)

    def bipartite_shape(self) -> tuple[int, int]:
        if len(self.dims) != 2:
            raise ValueError(f"state has {len(self.dims)} factors, expected exactly 2")
        return self.dims[0], self.dims[1]


@dataclass(frozen=True, eq=False)
class PureState:
    """A unit-norm state vector with subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ValueError("amplitudes must be finite")
        dims = tuple(int(d) for d in self.dims)
        _check_dims(dims, v.size)
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state vector must have unit norm within {_NORM_TOL}, got {norm}")
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", dims)


def pure_to_density(psi: PureState) -> DensityMatrix:
    """Rank-one projector onto a pure state."""
    v = psi.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), psi.dims)


def bell(index: int) -> DensityMatrix:
    """One of the four maximally entangled two-qubit basis states.

    Index order: 1 is (|00>+|11>)/sqrt2, 2 its minus sign partner,
    3 is (|01>+|10>)/sqrt2 and 4 its minus sign partner.
    """
    if index not in (1, 2, 3, 4):
        raise ValueError(f"Bell index must be in 1..4, got {index!r}")
    v = np.zeros(4, dtype=complex)
    sign = 1.0 if index in (1, 3) else -1.0
    if index in (1, 2):
        v[0], v[3] = 1.0, sign
    else:
        v[1], v[2] = 1.0, sign
    return pure_to_density(PureState(v / np.sqrt(2.0), (2, 2)))


def ghz(parties: int) -> DensityMatrix:
    """The (|0...0> + |1...1>)/sqrt2 state on ``parties`` qubits."""
    if parties < 2:
        raise ValueError(f"a GHZ state needs at least 2 parties, got {parties}")
    v = np.zeros(2**parties, dtype=complex)
    v[0] = v[-1] = 1.0 / np.sqrt(2.0)
    return pure_to_density(PureState(v, (2,) * parties))


def maximally_mixed(dims: tuple[int, ...]) -> DensityMatrix:
    """Identity over its trace, on the given subsystem dimensions."""
    side = math.prod(dims)
    return DensityMatrix(np.eye(side, dtype=complex) / side, dims)


def werner(p: float) -> DensityMatrix:
    """Two-qubit mixture ``p * bell(1) + (1 - p) * I/4`` for p in [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter must lie in [0, 1], got {p}")
    m = p * bell(1).matrix + (1.0 - p) * np.eye(4, dtype=complex) / 4.0
    return DensityMatrix(m, (2, 2))


def zero_plus_mixture() -> DensityMatrix:
    """Equal two-qubit mixture of |00><00| and |++><++|.

    A separable state whose realignment nevertheless has a non-PSD singular
    pair: the singular values are 3/4 and 1/4, and reshaping the second
    singular vector gives a matrix with eigenvalues +-1/sqrt2. It is the
    canonical fixture for the gap between the sufficient SVD certificate
    and genuine separability.
    """
    p0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    px = np.full((2, 2), 0.5, dtype=complex)
    m = 0.5 * (kron(p0, p0) + kron(px, px))
    return DensityMatrix(m, (2, 2))


def _random_density_matrix(rng: np.random.Generator, dim: int, rank: int) -> np.ndarray:
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_density(dim: int, rank: int, seed: int) -> DensityMatrix:
    """Seeded random density matrix of the requested numerical rank."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must satisfy 1 <= rank <= dim, got rank={rank}, dim={dim}")
    rng = np.random.default_rng(seed)
    return DensityMatrix(_random_density_matrix(rng, dim, rank), (dim,))


def random_separable(
    dims: tuple[int, int], terms: int, seed: int
) -> tuple[DensityMatrix, list[tuple[float, np.ndarray, np.ndarray]]]:
    """Seeded random convex mixture of product states, with ground truth.

    Weights are Dirichlet(1, ..., 1) distributed; each factor is a
    full-rank Wishart-style density matrix. Returns the state together
    with the generating list of ``(weight, first_factor, second_factor)``
    so tests can verify against the known decomposition.
    """
    if terms < 1:
        raise ValueError(f"terms must be at least 1, got {terms}")
    m, n = dims
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms)) if terms > 1 else np.array([1.0])
    decomposition = []
    total = np.zeros((m * n, m * n), dtype=complex)
    for w in weights:
        rho_a = _random_density_matrix(rng, m, m)
        rho_b = _random_density_matrix(rng, n, n)
        decomposition.append((float(w), rho_a, rho_b))
        total += w * kron(rho_a, rho_b)
    return DensityMatrix(total, (m, n)), decomposition
