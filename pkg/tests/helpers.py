"""Random-matrix helpers and independent oracles shared by the test suite."""

from __future__ import annotations

import math

import numpy as np


def crandn(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    h = crandn(rng, dim, dim)
    h = h + h.conj().T
    return h / np.linalg.norm(h)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(crandn(rng, dim, dim))
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_ket(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = crandn(rng, dim, 1).reshape(-1)
    return v / np.linalg.norm(v)


def schmidt_pure(rng: np.random.Generator, m: int, n: int, rank: int) -> np.ndarray:
    """Bipartite ket with exactly `rank` well-separated Schmidt coefficients."""
    coeffs = rng.uniform(0.5, 1.0, size=rank)
    coeffs = np.sqrt(coeffs / coeffs.sum())
    ua = random_unitary(rng, m)
    ub = random_unitary(rng, n)
    psi = np.zeros(m * n, dtype=complex)
    for i in range(rank):
        psi += coeffs[i] * np.kron(ua[:, i], ub[:, i])
    return psi / np.linalg.norm(psi)


def reduced_first_factor(psi: np.ndarray, m: int, n: int) -> np.ndarray:
    """Partial-trace oracle: reduced state of the first factor of a pure ket."""
    block = psi.reshape(m, n)
    return block @ block.conj().T


def permutation_unitary(dims: tuple[int, ...], perm_1based: list[int]) -> np.ndarray:
    """Explicit tensor-leg permutation matrix, built index by index.

    Output slot q carries input leg perm_1based[q]; conjugating with the
    returned U realizes the same reordering as permute_subsystems.
    """
    m = len(dims)
    perm0 = [p - 1 for p in perm_1based]
    new_dims = [dims[p] for p in perm0]
    side = math.prod(dims)
    u = np.zeros((side, side))
    for old_flat in range(side):
        idx = np.unravel_index(old_flat, dims)
        new_idx = tuple(idx[p] for p in perm0)
        new_flat = int(np.ravel_multi_index(new_idx, new_dims))
        u[new_flat, old_flat] = 1.0
    return u
