"""Multipartite block decompositions, per-leg realignment and regrouping.

An m-partite matrix on dimensions ``(n_1, ..., n_m)`` can be expanded, for
any leg ``k``, as a sum of Weyl tensor patterns with an ``n_k x n_k`` block
sitting in slot ``k``.  :func:`tilde_k` realigns those blocks into an
``n_k^2 x M^2`` matrix (``M`` the product of the remaining dimensions);
for a product input it collapses to the rank-one outer product of
``vec(Q_k)`` against the vec of the adjointed product of the other
factors.  With ``m = 2`` and ``k = 2`` it coincides entrywise with the
default bipartite realignment.

All transforms are direct O(size) entry permutations via tensor-axis
transposes; no permutation matrices are materialized.  Subsystem indices
on public signatures are 1-based.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from .states import DensityMatrix


def _as_dims(dims: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if len(out) < 1 or any(d < 1 for d in out):
        raise ValueError(f"subsystem dimensions must be positive integers, got {dims}")
    return out


def _check_matrix(matrix: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    side = math.prod(dims)
    q = np.asarray(matrix, dtype=complex)
    if q.shape != (side, side):
        raise ValueError(f"matrix shape {q.shape} does not match dims {dims}")
    return q


def block_k(
    matrix: np.ndarray,
    dims: Sequence[int],
    k: int,
    fixed: Sequence[tuple[int, int]],
) -> np.ndarray:
    """Extract the ``n_k x n_k`` block with all other tensor indices fixed.

    :param k: 1-based leg whose block is returned.
    :param fixed: one 1-based ``(i_p, j_p)`` pair per leg ``p != k``, in
        ascending leg order.
    """
    dims = _as_dims(dims)
    m = len(dims)
    if not 1 <= k <= m:
        raise ValueError(f"k must be in 1..{m}, got {k}")
    rest = [p for p in range(m) if p != k - 1]
    if len(fixed) != len(rest):
        raise ValueError(f"expected {len(rest)} fixed index pairs, got {len(fixed)}")
    q = _check_matrix(matrix, dims)
    row_idx: list[object] = [slice(None)] * m
    col_idx: list[object] = [slice(None)] * m
    for p, (i, j) in zip(rest, fixed):
        if not (1 <= i <= dims[p] and 1 <= j <= dims[p]):
            raise ValueError(f"fixed pair ({i}, {j}) out of range for leg {p + 1} (dim {dims[p]})")
        row_idx[p] = i - 1
        col_idx[p] = j - 1
    t = q.reshape(*dims, *dims)
    return np.array(t[tuple(row_idx) + tuple(col_idx)])


def tilde_k(matrix: np.ndarray, dims: Sequence[int], k: int) -> np.ndarray:
    """Realign an m-partite matrix around leg ``k`` (1-based).

    :return: an ``n_k^2 x M^2`` matrix, ``M`` the product of the other
        dimensions; column indices run over the fixed Weyl index pairs of
        the remaining legs (row multi-index major, column multi-index
        minor, both in ascending leg order).
    """
    dims = _as_dims(dims)
    m = len(dims)
    if not 1 <= k <= m:
        raise ValueError(f"k must be in 1..{m}, got {k}")
    q = _check_matrix(matrix, dims)
    k0 = k - 1
    rest = [p for p in range(m) if p != k0]
    axes = [m + k0, k0] + rest + [m + p for p in rest]
    out = q.reshape(*dims, *dims).transpose(axes)
    n_k = dims[k0]
    rest_dim = math.prod(dims) // n_k
    return out.reshape(n_k * n_k, rest_dim * rest_dim).copy()


def permute_subsystems(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Reorder tensor legs: output slot ``q`` carries input leg ``perm[q]``.

    ``perm`` is a 1-based permutation of ``1..m``; for a product state
    ``A_1 (x) ... (x) A_m`` the result is ``A_perm[1] (x) ... (x) A_perm[m]``.
    """
    dims = rho.dims
    m = len(dims)
    perm0 = [int(p) - 1 for p in perm]
    if sorted(perm0) != list(range(m)):
        raise ValueError(f"perm must be a permutation of 1..{m}, got {list(perm)}")
    axes = perm0 + [m + p for p in perm0]
    side = rho.side
    out = rho.matrix.reshape(*dims, *dims).transpose(axes).reshape(side, side)
    return DensityMatrix(out, tuple(dims[p] for p in perm0), tol=rho.tol)


def regroup(rho: DensityMatrix, partition: Sequence[Sequence[int]]) -> DensityMatrix:
    """Coarse-grain subsystems: each partition block becomes one leg.

    The matrix entries are untouched; only the dimension bookkeeping
    changes (each block's dimension is the product over its members).
    Blocks must be contiguous ascending runs covering ``1..m`` in order;
    reorder non-contiguous blocks first with :func:`permute_subsystems`.
    Regrouping is undone by rebuilding with the original dimensions.
    """
    dims = rho.dims
    m = len(dims)
    blocks = [tuple(int(i) for i in blk) for blk in partition]
    flat = [i for blk in blocks for i in blk]
    if flat != list(range(1, m + 1)):
        raise ValueError(
            f"partition {blocks} must list contiguous ascending blocks covering 1..{m}; "
            "apply permute_subsystems first for non-contiguous groupings"
        )
    if any(len(blk) == 0 for blk in blocks):
        raise ValueError("partition blocks must be non-empty")
    new_dims = tuple(math.prod(dims[i - 1] for i in blk) for blk in blocks)
    return DensityMatrix(rho.matrix, new_dims, tol=rho.tol)


def parse_partition(text: str) -> tuple[tuple[int, ...], ...]:
    """Parse a partition spec like ``"(1,2)(3)(4,5)"`` or ``"(12)(3)(45)"``.

    Groups are parenthesized; members are comma-separated integers. The
    digits-only shorthand (no commas) is accepted for single-digit
    subsystem counts.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty partition spec")
    blocks: list[tuple[int, ...]] = []
    pos = 0
    while pos < len(text):
        if text[pos] != "(":
            raise ValueError(f"expected '(' at position {pos} in partition spec {text!r}")
        end = text.find(")", pos)
        if end < 0:
            raise ValueError(f"unbalanced parenthesis in partition spec {text!r}")
        body = text[pos + 1 : end].strip()
        if not body:
            raise ValueError(f"empty group in partition spec {text!r}")
        if "," in body:
            members = tuple(int(tok.strip()) for tok in body.split(","))
        elif body.isdigit():
            members = tuple(int(ch) for ch in body)
        else:
            raise ValueError(f"cannot parse group {body!r} in partition spec {text!r}")
        if any(i < 1 for i in members):
            raise ValueError(f"subsystem indices are 1-based, got {members}")
        blocks.append(members)
        pos = end + 1
    return tuple(blocks)
