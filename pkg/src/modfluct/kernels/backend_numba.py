"""Numba-compiled hot kernels (inversions, pattern profiles, triangles, RSK).

Same contracts as backend_numpy; this backend exists purely for speed in
the Monte-Carlo replicate loops.
"""

from __future__ import annotations

from math import factorial

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True)
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(cache=True)
def _inversion_count(sigma):
    n = sigma.shape[0]
    total = 0
    for i in range(n):
        si = sigma[i]
        for j in range(i + 1, n):
            if si > sigma[j]:
                total += 1
    return total


def inversion_count(sigma: np.ndarray) -> int:
    return int(_inversion_count(np.ascontiguousarray(sigma, dtype=np.int64)))


@njit(cache=True)
def _profile2(s, counts):
    n = s.shape[0]
    inv = 0
    for i in range(n):
        for j in range(i + 1, n):
            if s[i] > s[j]:
                inv += 1
    counts[0] = n * (n - 1) // 2 - inv
    counts[1] = inv


@njit(cache=True)
def _profile3(s, counts):
    n = s.shape[0]
    for i in range(n):
        a = s[i]
        for j in range(i + 1, n):
            b = s[j]
            for l in range(j + 1, n):
                c = s[l]
                idx = 0
                if b < a:
                    idx += 2
                if c < a:
                    idx += 2
                if c < b:
                    idx += 1
                counts[idx] += 1


@njit(cache=True)
def _profile4(s, counts):
    n = s.shape[0]
    for i in range(n):
        a = s[i]
        for j in range(i + 1, n):
            b = s[j]
            ab = 1 if b < a else 0
            for l in range(j + 1, n):
                c = s[l]
                ac = 1 if c < a else 0
                bc = 1 if c < b else 0
                base = (ab + ac) * 6 + bc * 2
                for m in range(l + 1, n):
                    d = s[m]
                    c0 = base + (6 if d < a else 0)
                    c1 = (2 if d < b else 0) + (1 if d < c else 0)
                    counts[c0 + c1] += 1


def pattern_profile(sigma: np.ndarray, k: int) -> np.ndarray:
    counts = np.zeros(factorial(k), dtype=np.int64)
    s = np.ascontiguousarray(sigma, dtype=np.int64)
    if k > s.shape[0]:
        return counts
    if k == 2:
        _profile2(s, counts)
    elif k == 3:
        _profile3(s, counts)
    elif k == 4:
        _profile4(s, counts)
    else:
        raise ValueError("pattern_profile kernels cover k in {2, 3, 4}")
    return counts


@njit(cache=True)
def _pack_rows(adj):
    n = adj.shape[0]
    words = (n + 63) // 64
    packed = np.zeros((n, words), dtype=np.uint64)
    for i in range(n):
        for j in range(n):
            if adj[i, j]:
                packed[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    return packed


@njit(cache=True)
def _triangle_count(adj):
    n = adj.shape[0]
    packed = _pack_rows(adj)
    words = packed.shape[1]
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j]:
                common = np.uint64(0)
                for w in range(words):
                    common += _popcount64(packed[i, w] & packed[j, w])
                total += int(common)
    return total // 3


def triangle_count(adj: np.ndarray) -> int:
    return int(_triangle_count(np.ascontiguousarray(adj, dtype=np.bool_)))


@njit(cache=True)
def _path2_hom(adj):
    n = adj.shape[0]
    total = 0
    for i in range(n):
        deg = 0
        for j in range(n):
            if adj[i, j]:
                deg += 1
        total += deg * deg
    return total


def path2_hom(adj: np.ndarray) -> int:
    return int(_path2_hom(np.ascontiguousarray(adj, dtype=np.bool_)))


def edge_count(adj: np.ndarray) -> int:
    return int(adj.sum()) // 2


@njit(cache=True)
def _rsk_row_lengths(letters, alpha_threshold, buf, rowlen):
    n = letters.shape[0]
    nrows = 0
    for t in range(n):
        x = letters[t]
        r = 0
        while True:
            if r == nrows:
                buf[r, 0] = x
                rowlen[r] = 1
                nrows += 1
                break
            m = rowlen[r]
            lo, hi = 0, m
            if x <= alpha_threshold:
                while lo < hi:  # first entry strictly greater than x
                    mid = (lo + hi) >> 1
                    if buf[r, mid] <= x:
                        lo = mid + 1
                    else:
                        hi = mid
            else:
                while lo < hi:  # first entry >= x
                    mid = (lo + hi) >> 1
                    if buf[r, mid] < x:
                        lo = mid + 1
                    else:
                        hi = mid
            if lo == m:
                buf[r, m] = x
                rowlen[r] = m + 1
                break
            bumped = buf[r, lo]
            buf[r, lo] = x
            x = bumped
            r += 1
    return nrows


def rsk_row_lengths(letters: np.ndarray, alpha_threshold: float) -> np.ndarray:
    arr = np.ascontiguousarray(letters, dtype=np.float64)
    n = arr.shape[0]
    buf = np.empty((n, n), dtype=np.float64)
    rowlen = np.zeros(n, dtype=np.int64)
    nrows = _rsk_row_lengths(arr, float(alpha_threshold), buf, rowlen)
    return rowlen[:nrows].copy()
