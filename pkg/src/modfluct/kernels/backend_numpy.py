"""Pure-numpy/-Python reference implementations of the hot kernels.

Always importable; selected by MODFLUCT_KERNELS=numpy or used as the
fallback when numba is unavailable.  Semantics must match backend_numba
exactly (the kernel test suite and `modfluct bench` run both).
"""

from __future__ import annotations

import bisect
import itertools
from math import factorial

import numpy as np


def inversion_count(sigma: np.ndarray) -> int:
    s = np.asarray(sigma)
    greater = s[:, None] > s[None, :]
    return int(np.triu(greater, k=1).sum())


def _lehmer_index(values: tuple) -> int:
    k = len(values)
    idx = 0
    for i in range(k):
        smaller_after = sum(1 for j in range(i + 1, k) if values[j] < values[i])
        idx += smaller_after * factorial(k - 1 - i)
    return idx


def pattern_profile(sigma: np.ndarray, k: int) -> np.ndarray:
    """Counts of every size-k pattern over all k-subsets, indexed by Lehmer rank."""
    if k not in (2, 3, 4):
        raise ValueError("pattern_profile kernels cover k in {2, 3, 4}")
    s = np.asarray(sigma)
    n = len(s)
    counts = np.zeros(factorial(k), dtype=np.int64)
    if k > n:
        return counts
    if k == 2:
        inv = inversion_count(s)
        counts[0] = n * (n - 1) // 2 - inv
        counts[1] = inv
        return counts
    for subset in itertools.combinations(range(n), k):
        counts[_lehmer_index(tuple(s[i] for i in subset))] += 1
    return counts


def edge_count(adj: np.ndarray) -> int:
    return int(adj.sum()) // 2


def path2_hom(adj: np.ndarray) -> int:
    """Homomorphism count of the 3-vertex path: sum of squared degrees."""
    deg = adj.sum(axis=1, dtype=np.int64)
    return int((deg * deg).sum())


def triangle_count(adj: np.ndarray) -> int:
    a = adj.astype(np.float32)
    return int(round(np.einsum("ij,jk,ki->", a, a, a))) // 6


def rsk_row_lengths(letters: np.ndarray, alpha_threshold: float) -> np.ndarray:
    """Shape of the insertion tableau of a letter word.

    Letters with value <= alpha_threshold bump the first strictly greater
    entry (ties extend rows); larger letters bump the first entry >= them
    (ties stack into columns).
    """
    rows: list[list[float]] = []
    for x in letters:
        x = float(x)
        r = 0
        while True:
            if r == len(rows):
                rows.append([x])
                break
            row = rows[r]
            if x <= alpha_threshold:
                idx = bisect.bisect_right(row, x)
            else:
                idx = bisect.bisect_left(row, x)
            if idx == len(row):
                row.append(x)
                break
            x, row[idx] = row[idx], x
            r += 1
    return np.array([len(row) for row in rows], dtype=np.int64)
