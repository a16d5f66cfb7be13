"""Pure-Python/numpy implementations of the hot kernels.

Mirrors ``_core.pyx`` exactly (same inputs, same outputs); used when the
compiled module is unavailable or ``FNINV_PURE_PYTHON=1`` is set.

Conventions shared by both backends:
    F      (T, n) int64 table labels in [1, n]
    Y      (T,) or (T, i) int64 challenge labels in [1, n]
    S      (n, c) int64 0-based positions, -1 = padding
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def rref_inplace(M: np.ndarray, p: int) -> list[int]:
    """Reduce ``M`` (int64, entries in [0, p)) to row canonical form in place.

    Pivot rule: leftmost column, topmost eligible row. Returns the 0-based
    leading columns.
    """
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        if col.any():
            M -= np.outer(col, M[r])
            M %= p
        pivots.append(c)
        r += 1
    return pivots


def affine_chain_prefix(F, Y, idx, coef, beta, p: int) -> np.ndarray:
    """Length of the leading run of successful inversions per trial.

    The decoder for challenge y outputs
    ``from_field(sum_k coef[y-1, k] * to_field(F[idx[y-1, k]]) + beta[y-1])``;
    padding slots carry coef 0. Inversion of y succeeds iff F(output) == y.
    """
    T, i = Y.shape
    rows = np.arange(T)
    alive = np.ones(T, dtype=bool)
    prefix = np.zeros(T, dtype=np.int64)
    for j in range(i):
        y = Y[:, j] - 1
        pos = idx[y]
        vals = np.take_along_axis(F, np.where(pos < 0, 0, pos), axis=1) - 1
        acc = ((coef[y] * vals).sum(axis=1) + beta[y]) % p
        ok = F[rows, acc] == Y[:, j]
        alive &= ok
        prefix += alive
    return prefix


def set_hits(F, Y, S) -> np.ndarray:
    """Per trial: is Y in F(S_Y)?"""
    T, n = F.shape
    pos = S[Y - 1]
    vals = np.take_along_axis(F, np.where(pos < 0, 0, pos), axis=1)
    hit = (vals == Y[:, None]) & (pos >= 0)
    return hit.any(axis=1)


def good_index_count(F, S) -> np.ndarray:
    """Per trial: |K_f| = #{y : y in f(S_y)}."""
    T, n = F.shape
    valid = S >= 0
    vals = F[:, np.where(valid, S, 0)]
    ys = np.arange(1, n + 1)[None, :, None]
    hit = (vals == ys) & valid[None, :, :]
    return hit.any(axis=2).sum(axis=1).astype(np.int64)


def heaviest_mass(F, k: int) -> np.ndarray:
    """Per trial: total size of the ``k`` largest fibers of f."""
    T, n = F.shape
    if k <= 0:
        return np.zeros(T, dtype=np.int64)
    offsets = (np.arange(T, dtype=np.int64) * n)[:, None]
    counts = np.bincount((F - 1 + offsets).ravel(), minlength=T * n).reshape(T, n)
    counts = -np.sort(-counts, axis=1)
    return counts[:, : min(k, n)].sum(axis=1).astype(np.int64)
