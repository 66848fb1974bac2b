import itertools
import random
from fractions import Fraction
from math import comb, factorial

import pytest

from modfluct.combinatorics.formal import FormalSum
from modfluct.combinatorics.perms import (
    ab_shuffle,
    amalgam2_multiset,
    amalgam3_pair_multiset,
    amalgam3_point_multiset,
    amalgam_cardinality,
    amalgamated_shuffle2,
    amalgamated_shuffle3_point,
    conf,
    diagram,
    format_perm,
    graphical_shuffle,
    identity,
    inversions,
    occ,
    parse,
    pattern_of,
)

import oracles


def p(text: str):
    return tuple(int(ch) for ch in text)


def test_parse_and_format():
    assert parse("4716253") == (4, 7, 1, 6, 2, 5, 3)
    assert parse("10,2,3,4,5,6,7,8,9,1") == (10, 2, 3, 4, 5, 6, 7, 8, 9, 1)
    assert format_perm(p("21")) == "21"
    with pytest.raises(ValueError):
        parse("122")


def test_occ_examples():
    # the two witnessing position sets are {2,4,5} and {3,4,5}
    assert occ(p("213"), p("245361")) == 2
    rng = random.Random(0)
    for _ in range(10):
        sigma = tuple(rng.sample(range(1, 8), 7))
        assert occ(p("21"), sigma) == inversions(sigma)
        assert occ(sigma, sigma) == 1


def test_occ_errors():
    with pytest.raises(ValueError):
        occ(p("123"), p("12"))
    with pytest.raises(ValueError):
        occ(tuple(range(1, 10)), tuple(range(1, 13)))  # k capped at 8


def test_conf_examples():
    sigma = p("245361")
    assert conf(diagram(sigma)) == sigma
    assert conf([(3.7, -2.5)]) == (1,)
    with pytest.raises(ValueError):
        conf([(1, 1), (1, 2)])
    # conf only depends on the set of points (exchangeability of draws)
    pts = [(0.3, 0.9), (0.1, 0.2), (0.8, 0.5)]
    assert conf(pts) == conf(list(reversed(pts)))


def test_conf_inverts_diagram():
    for n in range(1, 6):
        for sigma in itertools.permutations(range(1, n + 1)):
            assert conf(diagram(sigma)) == sigma
    rng = random.Random(9)
    for n in (6, 7, 8):
        for _ in range(200):
            sigma = tuple(rng.sample(range(1, n + 1), n))
            assert conf(diagram(sigma)) == sigma


def test_graphical_shuffle_associative():
    from modfluct.combinatorics.formal import FormalSum, bilinear_product
    from modfluct.combinatorics.perms import shuffle_mul

    a, b, c = (1,), (2, 1), (1, 2)
    left = bilinear_product(graphical_shuffle(a, b), FormalSum.single(c), shuffle_mul)
    right = bilinear_product(FormalSum.single(a), graphical_shuffle(b, c), shuffle_mul)
    assert left == right


def test_conf_of_rescaled_squares():
    # points moved to small squares attached to order-statistic positions
    # keep the same configuration
    rng = random.Random(42)
    n, k, eps = 9, 4, 1e-3
    for _ in range(20):
        xs = rng.sample(range(1, 100), n)
        ys = rng.sample(range(1, 100), n)
        zs = list(zip(xs, ys))
        labels = rng.sample(range(n), k)
        shifts = [(rng.random(), rng.random()) for _ in range(k)]
        xrank = {x: r for r, x in enumerate(sorted(xs), start=1)}
        yrank = {y: r for r, y in enumerate(sorted(ys), start=1)}
        w = [
            (xrank[zs[l][0]] / n - s[0] / n, yrank[zs[l][1]] / n - s[1] / n)
            for l, s in zip(labels, shifts)
        ]
        v = [(zs[l][0] - eps * s[0], zs[l][1] - eps * s[1]) for l, s in zip(labels, shifts)]
        assert conf(w) == conf(v)


def test_ab_shuffle_figure():
    # figure data: red dots (1,5),(4,7),(5,3); blue (2,4),(3,1),(6,6),(7,2)
    rho = ab_shuffle(p("231"), p("3142"), {1, 4, 5}, {3, 5, 7})
    assert rho == p("5417362")
    assert ab_shuffle((1,), (1,), {1}, {1}) == (1, 2)


def test_ab_shuffle_block_case():
    sigma, tau = p("231"), p("21")
    m = len(sigma)
    rho = ab_shuffle(sigma, tau, set(range(1, m + 1)), set(range(1, m + 1)))
    assert pattern_of(rho[:m]) == sigma
    assert pattern_of(rho[m:]) == tau
    with pytest.raises(ValueError):
        ab_shuffle(sigma, tau, {1, 2}, {1, 2, 3})


def test_graphical_shuffle_displayed():
    fs = graphical_shuffle(p("12"), p("21"))
    expected = FormalSum(
        [(p(s), Fraction(1, 6)) for s in ("1243", "1324", "2134", "2413", "3142", "3421", "4231", "4312")]
        + [(p(s), Fraction(1, 3)) for s in ("1342", "1423", "2314", "2431", "3124", "3241", "4132", "4213")]
        + [(p(s), Fraction(1, 2)) for s in ("1432", "2341", "3214", "4123")]
    )
    assert fs == expected


def test_graphical_shuffle_small_and_symmetry():
    # four (A,B) pairs, each weighted 1/2; both outcomes appear twice
    assert graphical_shuffle((1,), (1,)) == FormalSum({(1, 2): 1, (2, 1): 1})
    rng = random.Random(1)
    for _ in range(5):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        sigma = tuple(rng.sample(range(1, m + 1), m))
        tau = tuple(rng.sample(range(1, n + 1), n))
        left = graphical_shuffle(sigma, tau)
        assert left == graphical_shuffle(tau, sigma)
        assert sum(c for _, c in left) == comb(m + n, m)
        assert all(c > 0 for _, c in left)


def test_amalgam2_figure_multiset():
    got = amalgam2_multiset(p("312"), p("132"), 2, 3)
    expected = {
        p("13524"): 1,
        p("15324"): 1,
        p("51324"): 1,
        p("14523"): 2,
        p("15423"): 2,
        p("51423"): 1,
        p("41523"): 1,
    }
    assert dict(got) == expected
    assert sum(got.values()) == 9
    assert amalgam_cardinality(p("312"), p("132"), 2, 3) == 9
    # and the four binomials evaluate as stated
    assert (comb(3, 1), comb(1, 1), comb(1, 0), comb(3, 2)) == (3, 1, 1, 3)


def test_amalgam2_trivial_and_scaling():
    assert dict(amalgam2_multiset((1,), (1,), 1, 1)) == {(1,): 1}
    assert amalgamated_shuffle2((1,), (1,), 1, 1) == FormalSum.single((1,))
    assert amalgam_cardinality((1,), (1,), 1, 1) == 1
    fs = amalgamated_shuffle2(p("21"), p("21"), 1, 2)
    total = sum(c for _, c in fs)
    scale = Fraction(factorial(2) ** 2, factorial(3))
    assert total == scale * amalgam_cardinality(p("21"), p("21"), 1, 2)


def test_amalgam2_against_definition_table():
    # one full pass over (sigma, partition) pairs at k = 3 checks every
    # (tau, rho, a, b) cell against both the constructive enumeration and
    # the closed-form cardinality
    k = 3
    table = oracles.amalgam2_table(k)
    perms = list(itertools.permutations(range(1, k + 1)))
    for tau in perms:
        for rho in perms:
            for a in range(1, k + 1):
                for b in range(1, k + 1):
                    want = table.get((tau, rho, a, b), {})
                    got = amalgam2_multiset(tau, rho, a, b)
                    assert dict(got) == dict(want), (tau, rho, a, b)
                    assert sum(got.values()) == amalgam_cardinality(tau, rho, a, b)


def test_amalgam3_point_trivial():
    assert dict(amalgam3_point_multiset((1,), (1,), (1,), 1, 1, 1)) == {(1,): 1}
    assert amalgamated_shuffle3_point((1,), (1,), (1,), 1, 1, 1) == FormalSum.single((1,))


def test_amalgam3_against_brute_force_k2():
    perms = [(1, 2), (2, 1)]
    for tau, rho, mu in itertools.product(perms, repeat=3):
        for a, b, c in itertools.product((1, 2), repeat=3):
            got = amalgam3_point_multiset(tau, rho, mu, a, b, c)
            want = oracles.amalgam3_point_brute(tau, rho, mu, a, b, c)
            assert dict(got) == dict(want), ("point", tau, rho, mu, a, b, c)
        for a, d in itertools.product((1, 2), repeat=2):
            for b, c in itertools.permutations((1, 2), 2):
                got = amalgam3_pair_multiset(tau, rho, mu, a, b, c, d)
                want = oracles.amalgam3_pair_brute(tau, rho, mu, a, b, c, d)
                assert dict(got) == dict(want), ("pair", tau, rho, mu, a, b, c, d)


def test_amalgam3_point_spot_check_k3():
    # one k = 3 cell against the brute-force definition (the full sweep is slow)
    tau, rho, mu = p("312"), p("132"), p("213")
    got = amalgam3_point_multiset(tau, rho, mu, 2, 3, 1)
    want = oracles.amalgam3_point_brute(tau, rho, mu, 2, 3, 1)
    assert dict(got) == dict(want)


def test_identity_helper():
    assert identity(4) == (1, 2, 3, 4)
    assert pattern_of((10, -4, 7)) == (3, 1, 2)
