"""Permutations in one-line notation, pattern counting and shuffle products.

Permutations are plain tuples (values are a bijection of 1..k), which keeps
them hashable for FormalSum keys.  The graphical shuffle is the product of
the permutation observable algebra; the amalgamated shuffles are the
one-shared-point (and two-shared-point) analogues entering the limiting
covariance and third-cumulant maps for pattern counts.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import comb, factorial

from .formal import FormalSum

Permutation = tuple[int, ...]


def validate(p) -> Permutation:
    t = tuple(int(x) for x in p)
    if sorted(t) != list(range(1, len(t) + 1)):
        raise ValueError(f"{p!r} is not a permutation of 1..{len(t)} in one-line notation")
    return t


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def parse(text: str) -> Permutation:
    text = text.strip()
    if "," in text:
        return validate(int(x) for x in text.split(","))
    return validate(int(ch) for ch in text)


def format_perm(p: Permutation) -> str:
    if len(p) <= 9:
        return "".join(str(x) for x in p)
    return ",".join(str(x) for x in p)


def pattern_of(values) -> Permutation:
    """Relative-order pattern of a sequence with distinct entries."""
    values = list(values)
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0] * len(values)
    for r, i in enumerate(order, start=1):
        ranks[i] = r
    return tuple(ranks)


def inversions(sigma: Permutation) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(sigma)), 2) if sigma[i] > sigma[j])


def occ(tau: Permutation, sigma: Permutation) -> int:
    """Number of k-subsets of positions of `sigma` inducing the pattern `tau`."""
    k, n = len(tau), len(sigma)
    if k > n:
        raise ValueError(f"pattern size {k} exceeds host size {n}")
    if k > 8:
        raise ValueError("pattern counting capped at k <= 8")
    if k == 0:
        return 1
    count = 0
    for subset in itertools.combinations(sigma, k):
        if pattern_of(subset) == tau:
            count += 1
    return count


def conf(points) -> Permutation:
    """Configuration of planar points with distinct x's and distinct y's."""
    pts = list(points)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise ValueError("points must be in general configuration (distinct x's and y's)")
    xrank = {x: r for r, x in enumerate(sorted(xs), start=1)}
    yrank = {y: r for r, y in enumerate(sorted(ys), start=1)}
    sigma = [0] * len(pts)
    for x, y in pts:
        sigma[xrank[x] - 1] = yrank[y]
    return tuple(sigma)


def diagram(sigma: Permutation) -> list[tuple[int, int]]:
    return [(i, v) for i, v in enumerate(sigma, start=1)]


def ab_shuffle(sigma: Permutation, tau: Permutation, a_set, b_set) -> Permutation:
    """The unique rho on m+n points mapping A onto B with pattern sigma on A, tau off A."""
    m, n = len(sigma), len(tau)
    a_sorted = sorted(a_set)
    b_sorted = sorted(b_set)
    if len(a_sorted) != m or len(b_sorted) != m:
        raise ValueError("A and B must both have the size of the first factor")
    total = m + n
    if a_sorted and not (1 <= a_sorted[0] and a_sorted[-1] <= total):
        raise ValueError("A out of range")
    if b_sorted and not (1 <= b_sorted[0] and b_sorted[-1] <= total):
        raise ValueError("B out of range")
    a_comp = sorted(set(range(1, total + 1)) - set(a_sorted))
    b_comp = sorted(set(range(1, total + 1)) - set(b_sorted))
    rho = [0] * total
    for s in range(m):
        rho[a_sorted[s] - 1] = b_sorted[sigma[s] - 1]
    for s in range(n):
        rho[a_comp[s] - 1] = b_comp[tau[s] - 1]
    return tuple(rho)


def graphical_shuffle(sigma: Permutation, tau: Permutation) -> FormalSum[Permutation]:
    """Average of all (A, B)-shuffles; the product of the permutation algebra."""
    m, n = len(sigma), len(tau)
    coeff = Fraction(factorial(m) * factorial(n), factorial(m + n))
    out: Counter[Permutation] = Counter()
    universe = range(1, m + n + 1)
    for a_set in itertools.combinations(universe, m):
        for b_set in itertools.combinations(universe, m):
            out[ab_shuffle(sigma, tau, a_set, b_set)] += 1
    return FormalSum((key, coeff * mult) for key, mult in out.items())


def shuffle_mul(sigma: Permutation, tau: Permutation) -> FormalSum[Permutation]:
    return graphical_shuffle(sigma, tau)


def _split_choices(below_pool, above_pool, n_below, n_above):
    """All ways to pick n_below elements from below_pool and n_above from above_pool."""
    for lo in itertools.combinations(below_pool, n_below):
        for hi in itertools.combinations(above_pool, n_above):
            yield lo + hi


def amalgam2_multiset(tau: Permutation, rho: Permutation, a: int, b: int) -> Counter:
    """Multiset of 2k-1 permutations carrying tau and rho overlapping at one point.

    Each permutation is counted once per (position split, value split) pair,
    matching the convention that a permutation admitting several witnessing
    partitions is counted several times.
    """
    k = len(tau)
    if len(rho) != k:
        raise ValueError("both patterns must have the same size")
    if not (1 <= a <= k and 1 <= b <= k):
        raise IndexError("amalgamation indices out of range")
    size = 2 * k - 1
    v = a + b - 1                     # shared position: a-1 below from tau, b-1 below from rho
    w = tau[a - 1] + rho[b - 1] - 1   # shared value, same bookkeeping on the value axis
    pos_below = [p for p in range(1, v)]
    pos_above = [p for p in range(v + 1, size + 1)]
    val_below = [p for p in range(1, w)]
    val_above = [p for p in range(w + 1, size + 1)]
    pos_splits = list(_split_choices(pos_below, pos_above, a - 1, k - a))
    val_splits = list(_split_choices(val_below, val_above, tau[a - 1] - 1, k - tau[a - 1]))
    out: Counter[Permutation] = Counter()
    for pos_i in pos_splits:
        positions_i = sorted(pos_i + (v,))
        positions_j = sorted(set(range(1, size + 1)) - set(pos_i))
        for val_i in val_splits:
            values_i = sorted(val_i + (w,))
            values_j = sorted(set(range(1, size + 1)) - set(val_i))
            sigma = [0] * size
            for s, pos in enumerate(positions_i):
                sigma[pos - 1] = values_i[tau[s] - 1]
            for s, pos in enumerate(positions_j):
                sigma[pos - 1] = values_j[rho[s] - 1]
            out[tuple(sigma)] += 1
    return out


def amalgam_cardinality(tau: Permutation, rho: Permutation, a: int, b: int) -> int:
    """Closed-form size of the amalgamated multiset: a product of four binomials."""
    k = len(tau)
    if len(rho) != k:
        raise ValueError("both patterns must have the same size")
    if not (1 <= a <= k and 1 <= b <= k):
        raise IndexError("amalgamation indices out of range")
    ta, rb = tau[a - 1], rho[b - 1]
    return (
        comb(a + b - 2, a - 1)
        * comb(2 * k - a - b, k - a)
        * comb(ta + rb - 2, ta - 1)
        * comb(2 * k - ta - rb, k - ta)
    )


def amalgamated_shuffle2(tau: Permutation, rho: Permutation, a: int, b: int) -> FormalSum[Permutation]:
    k = len(tau)
    scale = Fraction(factorial(k) ** 2, factorial(2 * k - 1))
    return FormalSum((key, scale * mult) for key, mult in amalgam2_multiset(tau, rho, a, b).items())


def amalgam3_point_multiset(
    tau: Permutation, rho: Permutation, mu: Permutation, a: int, b: int, c: int
) -> Counter:
    """Three patterns of size k overlapping at a single common point (3k-2 letters)."""
    k = len(tau)
    if len(rho) != k or len(mu) != k:
        raise ValueError("all three patterns must have the same size")
    for idx in (a, b, c):
        if not 1 <= idx <= k:
            raise IndexError("amalgamation indices out of range")
    size = 3 * k - 2
    v = a + b + c - 2
    w = tau[a - 1] + rho[b - 1] + mu[c - 1] - 2
    pos_splits = list(_three_way_splits(size, v, (a - 1, b - 1, c - 1), (k - a, k - b, k - c)))
    val_splits = list(
        _three_way_splits(
            size,
            w,
            (tau[a - 1] - 1, rho[b - 1] - 1, mu[c - 1] - 1),
            (k - tau[a - 1], k - rho[b - 1], k - mu[c - 1]),
        )
    )
    out: Counter[Permutation] = Counter()
    for pos_t, pos_r, pos_m in pos_splits:
        positions = (sorted(pos_t + (v,)), sorted(pos_r + (v,)), sorted(pos_m + (v,)))
        for val_t, val_r, val_m in val_splits:
            values = (sorted(val_t + (w,)), sorted(val_r + (w,)), sorted(val_m + (w,)))
            sigma = [0] * size
            for pat, pos_list, val_list in zip((tau, rho, mu), positions, values):
                for s, pos in enumerate(pos_list):
                    sigma[pos - 1] = val_list[pat[s] - 1]
            out[tuple(sigma)] += 1
    return out


def _three_way_splits(size: int, shared: int, below_counts, above_counts):
    """Distribute the non-shared letters below/above the shared one into three groups."""
    below = list(range(1, shared))
    above = list(range(shared + 1, size + 1))
    for below_t in itertools.combinations(below, below_counts[0]):
        rest_b = [x for x in below if x not in below_t]
        for below_r in itertools.combinations(rest_b, below_counts[1]):
            below_m = tuple(x for x in rest_b if x not in below_r)
            if len(below_m) != below_counts[2]:
                continue
            for above_t in itertools.combinations(above, above_counts[0]):
                rest_a = [x for x in above if x not in above_t]
                for above_r in itertools.combinations(rest_a, above_counts[1]):
                    above_m = tuple(x for x in rest_a if x not in above_r)
                    if len(above_m) != above_counts[2]:
                        continue
                    yield (below_t + above_t, below_r + above_r, below_m + above_m)


def amalgam3_pair_multiset(
    tau: Permutation, rho: Permutation, mu: Permutation, a: int, b: int, c: int, d: int
) -> Counter:
    """tau and rho share one point, rho and mu share another (b != c in the middle)."""
    k = len(tau)
    if len(rho) != k or len(mu) != k:
        raise ValueError("all three patterns must have the same size")
    if b == c:
        raise ValueError("pair mode needs two distinct middle indices")
    for idx in (a, b, c, d):
        if not 1 <= idx <= k:
            raise IndexError("amalgamation indices out of range")
    size = 3 * k - 2
    pos_splits = _pair_mode_splits(size, k, a, b, c, d)
    val_splits = _pair_mode_splits(size, k, tau[a - 1], rho[b - 1], rho[c - 1], mu[d - 1])
    out: Counter[Permutation] = Counter()
    for positions in pos_splits:
        for values in val_splits:
            sigma = [0] * size
            for pat, pos_list, val_list in zip((tau, rho, mu), positions, values):
                for s, pos in enumerate(pos_list):
                    sigma[pos - 1] = val_list[pat[s] - 1]
            out[tuple(sigma)] += 1
    return out


def _pair_mode_splits(size: int, k: int, a: int, b: int, c: int, d: int):
    """Split 1..size into (T, R, M): |T|=|R|=|M|=k, T∩R={v} at ranks (a, b),
    R∩M={u} at ranks (c, d), T∩M = ∅.  Ranks within R force sign(u-v)=sign(c-b)."""
    splits = []
    lo_rank, hi_rank = min(b, c), max(b, c)
    for v in range(1, size + 1):
        for u in range(1, size + 1):
            if u == v or (u > v) != (c > b):
                continue
            pool = [x for x in range(1, size + 1) if x not in (u, v)]
            for t_minus in _split_choices(
                [x for x in pool if x < v], [x for x in pool if x > v], a - 1, k - a
            ):
                rest = [x for x in pool if x not in t_minus]
                r_lo = [x for x in rest if x < min(u, v)]
                r_mid = [x for x in rest if min(u, v) < x < max(u, v)]
                r_hi = [x for x in rest if x > max(u, v)]
                for pick_lo in itertools.combinations(r_lo, lo_rank - 1):
                    for pick_mid in itertools.combinations(r_mid, hi_rank - lo_rank - 1):
                        for pick_hi in itertools.combinations(r_hi, k - hi_rank):
                            picked = set(pick_lo + pick_mid + pick_hi)
                            m_set = sorted(x for x in rest if x not in picked) + [u]
                            m_set.sort()
                            if m_set.index(u) != d - 1:
                                continue
                            t_set = sorted(t_minus + (v,))
                            r_set = sorted(picked | {u, v})
                            splits.append((t_set, r_set, m_set))
    return splits


def amalgamated_shuffle3_point(
    tau: Permutation, rho: Permutation, mu: Permutation, a: int, b: int, c: int
) -> FormalSum[Permutation]:
    k = len(tau)
    scale = Fraction(factorial(k) ** 3, factorial(3 * k - 2))
    counts = amalgam3_point_multiset(tau, rho, mu, a, b, c)
    return FormalSum((key, scale * mult) for key, mult in counts.items())


def amalgamated_shuffle3_pair(
    tau: Permutation, rho: Permutation, mu: Permutation, a: int, b: int, c: int, d: int
) -> FormalSum[Permutation]:
    k = len(tau)
    scale = Fraction(factorial(k) ** 3, factorial(3 * k - 2))
    counts = amalgam3_pair_multiset(tau, rho, mu, a, b, c, d)
    return FormalSum((key, scale * mult) for key, mult in counts.items())
