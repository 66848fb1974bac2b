"""Independent brute-force oracles used by the test suite.

These deliberately re-derive quantities from first principles (definition
chasing, full enumeration) so they stay independent of the library code
paths they check.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction


def pattern_of(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0] * len(values)
    for r, i in enumerate(order, start=1):
        ranks[i] = r
    return tuple(ranks)


def occ_brute(tau, sigma):
    k = len(tau)
    return sum(1 for sub in itertools.combinations(sigma, k) if pattern_of(sub) == tau)


def amalgam2_table(k: int) -> dict:
    """Multisets of every (tau, rho, a, b) at size k, from the definition.

    One pass over all (sigma, position partition) pairs: each partition of
    1..2k-1 into (I-, J-, K) with the witnessed patterns and shared ranks
    contributes one count to its (tau, a, rho, b) cell.
    """
    size = 2 * k - 1
    table: dict = {}
    partitions = []
    for v in range(1, size + 1):
        rest = [x for x in range(1, size + 1) if x != v]
        for i_minus in itertools.combinations(rest, k - 1):
            i_set = sorted(i_minus + (v,))
            j_set = sorted([x for x in rest if x not in i_minus] + [v])
            partitions.append((v, tuple(i_set), tuple(j_set), i_set.index(v) + 1, j_set.index(v) + 1))
    for sigma in itertools.permutations(range(1, size + 1)):
        for v, i_set, j_set, a, b in partitions:
            tau = pattern_of([sigma[p - 1] for p in i_set])
            rho = pattern_of([sigma[p - 1] for p in j_set])
            key = (tau, rho, a, b)
            table.setdefault(key, Counter())[sigma] += 1
    return table


def amalgam3_point_brute(tau, rho, mu, a, b, c) -> Counter:
    k = len(tau)
    size = 3 * k - 2
    out: Counter = Counter()
    for sigma in itertools.permutations(range(1, size + 1)):
        for v in range(1, size + 1):
            rest = [x for x in range(1, size + 1) if x != v]
            for h_minus in itertools.combinations(rest, k - 1):
                rest2 = [x for x in rest if x not in h_minus]
                for i_minus in itertools.combinations(rest2, k - 1):
                    j_minus = tuple(x for x in rest2 if x not in i_minus)
                    h = sorted(h_minus + (v,))
                    i = sorted(i_minus + (v,))
                    j = sorted(j_minus + (v,))
                    if h.index(v) != a - 1 or i.index(v) != b - 1 or j.index(v) != c - 1:
                        continue
                    if pattern_of([sigma[p - 1] for p in h]) != tau:
                        continue
                    if pattern_of([sigma[p - 1] for p in i]) != rho:
                        continue
                    if pattern_of([sigma[p - 1] for p in j]) != mu:
                        continue
                    out[sigma] += 1
    return out


def amalgam3_pair_brute(tau, rho, mu, a, b, c, d) -> Counter:
    k = len(tau)
    size = 3 * k - 2
    out: Counter = Counter()
    for sigma in itertools.permutations(range(1, size + 1)):
        for v in range(1, size + 1):
            for u in range(1, size + 1):
                if u == v:
                    continue
                rest = [x for x in range(1, size + 1) if x not in (u, v)]
                for h_minus in itertools.combinations(rest, k - 1):
                    rest2 = [x for x in rest if x not in h_minus]
                    for i_minus in itertools.combinations(rest2, k - 2):
                        j_minus = tuple(x for x in rest2 if x not in i_minus)
                        h = sorted(h_minus + (v,))
                        i = sorted(i_minus + (v, u))
                        j = sorted(j_minus + (u,))
                        if h.index(v) != a - 1 or i.index(v) != b - 1:
                            continue
                        if i.index(u) != c - 1 or j.index(u) != d - 1:
                            continue
                        if pattern_of([sigma[p - 1] for p in h]) != tau:
                            continue
                        if pattern_of([sigma[p - 1] for p in i]) != rho:
                            continue
                        if pattern_of([sigma[p - 1] for p in j]) != mu:
                            continue
                        out[sigma] += 1
    return out


def binomial_cumulants(n: int, p: Fraction) -> list[Fraction]:
    """First four cumulants of Binomial(n, p)."""
    q = 1 - p
    return [n * p, n * p * q, n * p * q * (1 - 2 * p), n * p * q * (1 - 6 * p * q)]
