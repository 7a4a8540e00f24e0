"""Bipartite matrix realignment (the "tilde" transform) in eight variants.

A matrix ``Q`` acting on an m x n tensor-product space decomposes into
m*m blocks ``Q_ij`` of size n x n.  A realignment rearranges (and possibly
conjugates) those entries into a rectangular matrix whose rank-one
structure mirrors tensor-product structure: for every variant ``c`` there
is an identity of the form ``t_c(A (x) B) = |vec X><vec Y|`` with ``X, Y``
drawn from ``A, B`` up to conjugation or adjoint.

The eight variants differ only by entry permutations and conjugations, so
they all share singular values.  Variant 8 is the package default; it maps
``A (x) B`` to ``|vec B><vec A^dag|`` and keeps entries unconjugated.
Written out for a generic 4x4 matrix with entries ``q_ij`` (1-based, m=n=2):

    variant 6                     variant 8
    q11 q31 q13 q33               q11 q13 q31 q33
    q21 q41 q23 q43               q21 q23 q41 q43
    q12 q32 q14 q34               q12 q14 q32 q34
    q22 q42 q24 q44               q22 q24 q42 q44

i.e. the two layouts differ by swapping the middle columns.  Variants 5 and
6 are their own inverses on square factors; the remaining variants invert
through :func:`inverse_tilde`, which undoes the entry permutation exactly.

The tensor-product identities, with ``*`` entrywise conjugation:

    1: |vec A><vec B*|    2: |vec A*><vec B|   3: |vec A><vec B^dag|
    4: |vec A^dag><vec B| 5: |vec B*><vec A|   6: |vec B><vec A*|
    7: |vec B^dag><vec A| 8: |vec B><vec A^dag|

Variants 1-4 produce an m^2 x n^2 matrix, variants 5-8 an n^2 x m^2 one.
"""

from __future__ import annotations

import numpy as np

CONVENTIONS = tuple(range(1, 9))
DEFAULT_CONVENTION = 8

# Axis permutations applied to the (m, n, m, n) block tensor T, where
# T[a, t, b, s] = Q[a*n + t, b*n + s], plus an entrywise-conjugation flag.
_LAYOUTS: dict[int, tuple[tuple[int, int, int, int], bool]] = {
    1: ((2, 0, 3, 1), False),
    2: ((2, 0, 3, 1), True),
    3: ((2, 0, 1, 3), False),
    4: ((0, 2, 3, 1), True),
    5: ((3, 1, 2, 0), True),
    6: ((3, 1, 2, 0), False),
    7: ((1, 3, 2, 0), True),
    8: ((3, 1, 0, 2), False),
}


def _check_convention(convention: int) -> None:
    if convention not in _LAYOUTS:
        raise ValueError(f"convention must be in 1..8, got {convention!r}")


def _check_square(matrix: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    m, n = shape
    if m < 1 or n < 1:
        raise ValueError(f"factor dimensions must be positive, got {shape}")
    q = np.asarray(matrix, dtype=complex)
    if q.shape != (m * n, m * n):
        raise ValueError(f"matrix shape {q.shape} does not match factors {shape}")
    return q


def block(matrix: np.ndarray, shape: tuple[int, int], i: int, j: int) -> np.ndarray:
    """The n x n block ``Q_ij`` of a matrix on an m x n product space.

    ``i`` and ``j`` are 1-based block-row and block-column indices.
    """
    m, n = shape
    q = _check_square(matrix, shape)
    if not (1 <= i <= m and 1 <= j <= m):
        raise ValueError(f"block indices ({i}, {j}) out of range for m={m}")
    return q[(i - 1) * n : i * n, (j - 1) * n : j * n].copy()


def tilde(
    matrix: np.ndarray, shape: tuple[int, int], convention: int = DEFAULT_CONVENTION
) -> np.ndarray:
    """Realign a matrix on an m x n product space.

    :param matrix: square matrix of side ``m * n``.
    :param shape: the factor dimensions ``(m, n)``.
    :param convention: realignment variant, 1..8 (see module docstring).
    :return: the realigned rectangular matrix (n^2 x m^2 for variants 5-8,
        m^2 x n^2 for variants 1-4).
    """
    m, n = shape
    _check_convention(convention)
    q = _check_square(matrix, shape)
    axes, conjugate = _LAYOUTS[convention]
    out = q.reshape(m, n, m, n).transpose(axes)
    if conjugate:
        out = out.conj()
    return out.reshape(out.shape[0] * out.shape[1], -1).copy()


def inverse_tilde(
    matrix: np.ndarray, shape: tuple[int, int], convention: int = DEFAULT_CONVENTION
) -> np.ndarray:
    """Undo :func:`tilde`: recover the m*n x m*n matrix from its realignment.

    The inverse applies the reverse entry permutation (and conjugation), so
    ``inverse_tilde(tilde(Q)) == Q`` holds exactly for every variant.
    """
    m, n = shape
    _check_convention(convention)
    if m < 1 or n < 1:
        raise ValueError(f"factor dimensions must be positive, got {shape}")
    axes, conjugate = _LAYOUTS[convention]
    sizes = (m, n, m, n)
    out_shape = tuple(sizes[a] for a in axes)
    expected = (out_shape[0] * out_shape[1], out_shape[2] * out_shape[3])
    r = np.asarray(matrix, dtype=complex)
    if r.shape != expected:
        raise ValueError(
            f"realigned matrix shape {r.shape} does not match factors {shape} "
            f"under convention {convention} (expected {expected})"
        )
    t = r.reshape(out_shape)
    if conjugate:
        t = t.conj()
    return t.transpose(np.argsort(axes)).reshape(m * n, m * n).copy()
