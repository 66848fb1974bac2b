"""Integer partitions: Frobenius coordinates, joins, hooks and characters.

Partitions are weakly decreasing tuples of positive ints.  The join
operations merge one part of each factor (losing one cell per junction);
the character machinery (border-strip recursion, renormalized character
values, Frobenius power sums) backs the exact central-measure oracle.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial

Partition = tuple[int, ...]

CHARACTER_MAX_SIZE = 14
HOOK_DIM_MAX_SIZE = 30


def validate(parts) -> Partition:
    t = tuple(int(x) for x in parts)
    if any(x < 1 for x in t):
        raise ValueError(f"{parts!r} has nonpositive parts")
    if any(t[i] < t[i + 1] for i in range(len(t) - 1)):
        raise ValueError(f"{parts!r} is not weakly decreasing")
    return t


def parse(text: str) -> Partition:
    text = text.strip().strip("()")
    if not text:
        return ()
    return validate(int(x) for x in text.split(","))


def format_partition(lam: Partition) -> str:
    return ",".join(str(x) for x in lam)


def size(lam: Partition) -> int:
    return sum(lam)


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part >= j) for j in range(1, lam[0] + 1))


def partitions_of(n: int):
    """All partitions of n in reverse lexicographic order."""
    if n == 0:
        yield ()
        return

    def rec(remaining: int, cap: int, prefix: tuple[int, ...]):
        if remaining == 0:
            yield prefix
            return
        for part in range(min(cap, remaining), 0, -1):
            yield from rec(remaining - part, part, prefix + (part,))

    yield from rec(n, n, ())


def z_order(rho: Partition) -> int:
    """Size of the centralizer of a permutation with cycle type rho."""
    out = 1
    for part, group in itertools.groupby(rho):
        m = len(list(group))
        out *= part**m * factorial(m)
    return out


def frobenius_coords(lam: Partition) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Arm/leg half-integer coordinates measured from the diagonal."""
    lam = validate(lam) if lam else ()
    conj = conjugate(lam)
    d = sum(1 for i, part in enumerate(lam, start=1) if part >= i)
    a = tuple(Fraction(2 * (lam[i - 1] - i) + 1, 2) for i in range(1, d + 1))
    b = tuple(Fraction(2 * (conj[i - 1] - i) + 1, 2) for i in range(1, d + 1))
    return a, b


def hook_dimension(lam: Partition) -> int:
    """Number of standard tableaux of shape lam, by the hook length product."""
    n = size(lam)
    if n > HOOK_DIM_MAX_SIZE:
        raise ValueError(f"hook dimension capped at size {HOOK_DIM_MAX_SIZE}")
    if n == 0:
        return 1
    conj = conjugate(lam)
    hooks = 1
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            hooks *= row - j + conj[j - 1] - i + 1
    return factorial(n) // hooks


def partition_join(rho: Partition, mu: Partition, a: int, b: int) -> Partition:
    """Merge part a of rho with part b of mu into a single part of size rho_a+mu_b-1."""
    if not 1 <= a <= len(rho):
        raise IndexError(f"part index {a} out of range for {rho}")
    if not 1 <= b <= len(mu):
        raise IndexError(f"part index {b} out of range for {mu}")
    parts = list(rho[: a - 1] + rho[a:]) + list(mu[: b - 1] + mu[b:])
    parts.append(rho[a - 1] + mu[b - 1] - 1)
    return tuple(sorted(parts, reverse=True))


def partition_product(rho: Partition, mu: Partition) -> Partition:
    """Disjoint union of parts, reordered; the product of the partition algebra."""
    return tuple(sorted(rho + mu, reverse=True))


def partition_join3_point(rho: Partition, mu: Partition, nu: Partition, a: int, b: int, c: int) -> Partition:
    for idx, lam in ((a, rho), (b, mu), (c, nu)):
        if not 1 <= idx <= len(lam):
            raise IndexError(f"part index {idx} out of range for {lam}")
    parts = (
        list(rho[: a - 1] + rho[a:])
        + list(mu[: b - 1] + mu[b:])
        + list(nu[: c - 1] + nu[c:])
        + [rho[a - 1] + mu[b - 1] + nu[c - 1] - 2]
    )
    return tuple(sorted(parts, reverse=True))


def partition_join3_pair(rho: Partition, mu: Partition, nu: Partition, a: int, b: int, c: int, d: int) -> Partition:
    if b == c:
        raise ValueError("pair mode needs two distinct parts of the middle partition")
    for idx, lam in ((a, rho), (b, mu), (c, mu), (d, nu)):
        if not 1 <= idx <= len(lam):
            raise IndexError(f"part index {idx} out of range for {lam}")
    mu_rest = [part for i, part in enumerate(mu, start=1) if i not in (b, c)]
    parts = (
        list(rho[: a - 1] + rho[a:])
        + mu_rest
        + list(nu[: d - 1] + nu[d:])
        + [rho[a - 1] + mu[b - 1] - 1, mu[c - 1] + nu[d - 1] - 1]
    )
    return tuple(sorted(parts, reverse=True))


def _beta_set(lam: Partition, length: int) -> tuple[int, ...]:
    padded = lam + (0,) * (length - len(lam))
    return tuple(padded[i] + (length - 1 - i) for i in range(length))


@lru_cache(maxsize=None)
def _mn_rec(lam: Partition, rho: Partition) -> int:
    if not rho:
        return 1
    r = rho[0]
    rest = rho[1:]
    length = len(lam)
    beta = set(_beta_set(lam, length))
    total = 0
    for x in sorted(beta):
        y = x - r
        if y < 0 or y in beta:
            continue
        newbeta = sorted((beta - {x}) | {y}, reverse=True)
        height = sum(1 for z in beta if y < z < x)
        newlam = tuple(bv - (len(newbeta) - 1 - i) for i, bv in enumerate(newbeta))
        newlam = tuple(p for p in newlam if p > 0)
        total += (-1) ** height * _mn_rec(newlam, rest)
    return total


def mn_character(lam: Partition, rho: Partition) -> int:
    """Unnormalized irreducible character value at cycle type rho (border strips)."""
    lam, rho = validate(lam) if lam else (), validate(rho) if rho else ()
    if size(lam) != size(rho):
        raise ValueError("shape and cycle type must have equal size")
    if size(lam) > CHARACTER_MAX_SIZE:
        raise ValueError(f"character values capped at size {CHARACTER_MAX_SIZE}")
    return _mn_rec(lam, rho)


def normalized_character(lam: Partition, rho: Partition) -> Fraction:
    return Fraction(mn_character(lam, rho), hook_dimension(lam))


def sigma_rho(rho: Partition, lam: Partition) -> Fraction:
    """Renormalized character value: n(n-1)...(n-k+1) times the normalized
    character at cycle type rho completed with fixed points; 0 when n < k."""
    n, k = size(lam), size(rho)
    if n < k:
        return Fraction(0)
    falling = 1
    for i in range(k):
        falling *= n - i
    cycle_type = tuple(sorted(rho + (1,) * (n - k), reverse=True))
    return falling * normalized_character(lam, cycle_type)


def p_k(k: int, lam: Partition) -> Fraction:
    """Frobenius power sum: sum a_i^k plus (-1)^(k-1) sum b_i^k."""
    if k < 1:
        raise ValueError("power sum index must be >= 1")
    a, b = frobenius_coords(lam)
    sign = (-1) ** (k - 1)
    return sum((x**k for x in a), Fraction(0)) + sign * sum((x**k for x in b), Fraction(0))


def p_rho(rho: Partition, lam: Partition) -> Fraction:
    out = Fraction(1)
    for part in rho:
        out *= p_k(part, lam)
    return out
