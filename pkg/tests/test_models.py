import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from modfluct.combinatorics.graphs import Graph, complete_graph, empty_graph
from modfluct.combinatorics.partitions import hook_dimension, partitions_of
from modfluct.models import (
    PLANCHEREL,
    ConstantGraphon,
    DiscPermuton,
    GridGraphon,
    GridPermuton,
    MeanGraphon,
    PermutationPermuton,
    ProductGraphon,
    RngSeed,
    StepGraphon,
    ThomaParameter,
    UniformPermuton,
    embed_graph,
    embed_partition,
    embed_permutation,
    exact_central_measure,
    model_from_json,
    model_to_json,
    sample_adjacency,
    sample_graph,
    sample_partition,
    sample_partition_counts,
    sample_permutation,
    sample_points,
)


F12 = Fraction(1, 2)
F13 = Fraction(1, 3)


def test_rng_reproducibility():
    a = RngSeed(123, 4).generator().random(5)
    b = RngSeed(123, 4).generator().random(5)
    c = RngSeed(123, 5).generator().random(5)
    assert (a == b).all()
    assert not (a == c).all()


def test_spec_validation():
    with pytest.raises(ValueError):
        ConstantGraphon(Fraction(3, 2))
    with pytest.raises(ValueError):
        StepGraphon((F12, F13), ((F12, F12), (F12, F12)))  # masses do not sum to 1
    with pytest.raises(ValueError):
        StepGraphon((F12, F12), ((F12, F13), (F12, F12)))  # asymmetric
    with pytest.raises(ValueError):
        GridPermuton(((F12, F12), (F12, F12)))  # rows must weigh 1/m, not 1
    with pytest.raises(ValueError):
        ThomaParameter((F13, F12), ())  # not decreasing
    with pytest.raises(ValueError):
        ThomaParameter((F12, F12), (F13,))  # mass over 1


def test_sample_graph_degenerate():
    assert sample_graph(ConstantGraphon(0), 5, RngSeed(0)) == empty_graph(5)
    assert sample_graph(ConstantGraphon(1), 5, RngSeed(0)) == complete_graph(5)


def test_sample_graph_edge_count_binomial():
    # Erdos-Renyi at n=4: edge count ~ Binomial(6, 1/2); chi-square on the histogram
    reps = 100000
    counts = Counter()
    rng = RngSeed(2024).generator()
    for _ in range(reps):
        counts[int(sample_adjacency(ConstantGraphon(F12), 4, rng).sum()) // 2] += 1
    chi2 = 0.0
    for e in range(7):
        expected = reps * math.comb(6, e) / 64
        chi2 += (counts[e] - expected) ** 2 / expected
    assert chi2 < 22.46  # chi-square(6) at the 0.1% level


def test_sample_graph_step_matches_enumeration():
    # exact labeled-graph law at n=3 for a 2-block step function
    spec = StepGraphon((F12, F12), ((Fraction(1, 4), Fraction(3, 4)), (Fraction(3, 4), F12)))
    pairs = list(itertools.combinations(range(1, 4), 2))
    exact: dict[frozenset, Fraction] = {}
    for assignment in itertools.product(range(2), repeat=3):
        w0 = Fraction(1, 8)
        for bits in range(8):
            edges = frozenset(pairs[i] for i in range(3) if bits >> i & 1)
            w = w0
            for i, (u, v) in enumerate(pairs):
                p = spec.values[assignment[u - 1]][assignment[v - 1]]
                w *= p if bits >> i & 1 else 1 - p
            exact[edges] = exact.get(edges, Fraction(0)) + w
    reps = 60000
    rng = RngSeed(7).generator()
    counts: Counter = Counter()
    for _ in range(reps):
        adj = sample_adjacency(spec, 3, rng)
        counts[frozenset((u, v) for u, v in pairs if adj[u - 1, v - 1])] += 1
    for edges, p in exact.items():
        sd = math.sqrt(float(p) * (1 - float(p)) / reps)
        assert abs(counts[edges] / reps - float(p)) < 4 * sd, edges


def test_sample_permutation_uniform_chi_square():
    reps = 100000
    counts = Counter()
    for chunk in range(10):
        seed = RngSeed(5, chunk)
        rng = seed.generator()
        for _ in range(reps // 10):
            counts[tuple(int(v) + 1 for v in rng.permutation(4))] += 1
    chi2 = sum((counts[p] - reps / 24) ** 2 / (reps / 24) for p in itertools.permutations(range(1, 5)))
    assert chi2 < 49.73  # chi-square(23) at the 0.1% level


def test_sample_permutation_examples():
    assert sample_permutation(PermutationPermuton((1,)), 1, RngSeed(0)) == (1,)
    sigma = sample_permutation(UniformPermuton(), 8, RngSeed(1))
    assert sorted(sigma) == list(range(1, 9))


def test_disc_points_stay_in_disc():
    x, y = sample_points(DiscPermuton(), 200, RngSeed(9).generator())
    r2 = (x - 0.5) ** 2 + (y - 0.5) ** 2
    assert (r2 <= 0.25 + 1e-12).all()
    sigma = sample_permutation(DiscPermuton(), 200, RngSeed(9))
    assert sorted(sigma) == list(range(1, 201))


def test_disc_marginals_uniform():
    x, y = sample_points(DiscPermuton(), 50000, RngSeed(10).generator())
    for coord in (x, y):
        hist, _ = np.histogram(coord, bins=10, range=(0, 1))
        expected = len(coord) / 10
        chi2 = ((hist - expected) ** 2 / expected).sum()
        assert chi2 < 27.88  # chi-square(9) at the 0.1% level


def test_sample_partition_degenerate():
    row = ThomaParameter((Fraction(1),), ())
    col = ThomaParameter((), (Fraction(1),))
    for n in (1, 3, 9):
        assert sample_partition(row, n, RngSeed(3, n)) == (n,)
        assert sample_partition(col, n, RngSeed(4, n)) == (1,) * n


def test_sample_partition_concentrates():
    omega = ThomaParameter((Fraction(1, 4), Fraction(1, 6)), (F13,))
    n = 200
    coords = []
    for i in range(50):
        lam = sample_partition(omega, n, RngSeed(21, i))
        conj_first = sum(1 for part in lam if part >= 1)
        coords.append((lam[0] / n, lam[1] / n, conj_first / n))
    avg = np.mean(coords, axis=0)
    assert abs(avg[0] - 0.25) < 0.05  # longest row ~ alpha_1
    assert abs(avg[1] - 1 / 6) < 0.05  # second row ~ alpha_2
    assert abs(avg[2] - 1 / 3) < 0.05  # first column ~ beta_1


def test_exact_central_measure_point_mass():
    m = exact_central_measure(ThomaParameter((Fraction(1),), ()), 6)
    assert m[(6,)] == 1
    assert sum(m.values()) == 1


def test_exact_central_measure_plancherel():
    for n in range(1, 9):
        m = exact_central_measure(PLANCHEREL, n)
        for lam, p in m.items():
            assert p == Fraction(hook_dimension(lam) ** 2, math.factorial(n))


def test_exact_central_measure_cap():
    with pytest.raises(ValueError):
        exact_central_measure(PLANCHEREL, 11)


def test_sampler_matches_exact_measure_tv():
    omega = ThomaParameter((F12,), (F13,))
    counts = sample_partition_counts(omega, 5, 20000, RngSeed(77))
    exact = exact_central_measure(omega, 5)
    tv = sum(abs(counts.get(l, 0) / 20000 - float(p)) for l, p in exact.items()) / 2
    assert tv < 0.02
    assert set(counts) <= set(exact)


def test_embed_graph():
    k2 = complete_graph(2)
    spec = embed_graph(k2)
    assert spec.values == ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))
    # the 6-vertex graph drawn with its block pattern: marked blocks are
    # exactly the edge pairs
    g = Graph.from_edges(6, [(1, 5), (2, 3), (2, 4), (2, 6), (3, 6)])
    spec = embed_graph(g)
    marked = {(i + 1, j + 1) for i in range(6) for j in range(6) if spec.values[i][j]}
    assert marked == {(1, 5), (5, 1), (2, 3), (3, 2), (2, 4), (4, 2), (2, 6), (6, 2), (3, 6), (6, 3)}


def test_embed_permutation_masses():
    sigma = (2, 4, 5, 3, 6, 1)
    spec = embed_permutation(sigma)
    for i in range(6):
        for j in range(6):
            expected = Fraction(1, 6) if sigma[i] == j + 1 else Fraction(0)
            assert spec.masses[i][j] == expected


def test_embed_partition():
    omega = embed_partition((5, 4, 2))
    assert omega.alpha == (Fraction(9, 22), Fraction(5, 22))
    assert omega.beta == (Fraction(5, 22), Fraction(3, 22))
    assert omega.gamma_mass == 0
    omega = embed_partition((1,))
    assert omega.alpha == (F12,) and omega.beta == (F12,)


def test_sampler_matches_quadrature_density():
    # edge and triangle frequencies of sampled graphs sit on the integral
    # densities for the smooth specs (the paths share no code)
    from modfluct.combinatorics.graphs import K2, K3
    from modfluct.observables import graphon_density, hom_density

    centers = [(i + 0.5) / 3 for i in range(3)]
    grid = GridGraphon(tuple(tuple((x + y) / 4 for y in centers) for x in centers), "bilinear")
    n, reps = 40, 1500
    for spec in (MeanGraphon(), grid):
        rng = RngSeed(61).generator()
        acc2 = acc3 = 0.0
        for _ in range(reps):
            adj = sample_adjacency(spec, n, rng)
            a = adj.astype(np.int64)
            acc2 += a.sum() / n**2
            acc3 += np.trace(a @ a @ a) / n**3
        for f, mean in ((K2, acc2 / reps), (K3, acc3 / reps)):
            target = float(graphon_density(f, spec))
            # n-finite bias is O(1/n); noise O(1/sqrt(reps))
            assert abs(mean - target) < 0.01 + 4 / math.sqrt(reps) * 0.5, (spec, f, mean, target)


def test_observable_gap_concentrates_at_n200():
    # the 99th percentile of |f(M_n(m)) - f(m)| stays below the x solving
    # coeff * exp(-n x^2 / 9k^2) = 0.01, for each family at n = 200
    from modfluct.cumulants import sample_statistics
    from modfluct.observables import graphon_density
    from modfluct.combinatorics.graphs import K3

    n, reps = 200, 1000
    cases = [
        (ProductGraphon(), K3, float(graphon_density(K3, ProductGraphon())), 3, 2.0, n**3),
        (UniformPermuton(), (2, 1), 0.5, 2, 2.0, math.comb(n, 2)),
        (
            ThomaParameter((F12,), (F13,)),
            (2,),
            float(F12**2 - F13**2),
            2,
            4.0,
            n**2,
        ),
    ]
    for model, obs, center, k, coeff, scale in cases:
        samples = sample_statistics(model, obs, n, reps, RngSeed(88))
        gaps = np.abs(samples / scale - center)
        x_at_001 = math.sqrt(9 * k * k * math.log(coeff / 0.01) / n)
        assert np.quantile(gaps, 0.99) < x_at_001, (model, np.quantile(gaps, 0.99), x_at_001)


def test_thoma_moments():
    omega = ThomaParameter((F12,), (F13,))
    assert omega.moment(1) == 1
    assert omega.moment(2) == Fraction(1, 4) - Fraction(1, 9)
    assert omega.moment(3) == Fraction(1, 8) + Fraction(1, 27)
    assert PLANCHEREL.moment(1) == 1
    for k in range(2, 6):
        assert PLANCHEREL.moment(k) == 0


def test_model_json_round_trip():
    specs = [
        ConstantGraphon(F12),
        StepGraphon((F12, F12), ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))),
        ProductGraphon(),
        MeanGraphon(),
        GridGraphon(((0.1, 0.2), (0.2, 0.3)), "bilinear"),
        UniformPermuton(),
        PermutationPermuton((2, 1, 3)),
        embed_permutation((2, 1)),
        DiscPermuton(),
        ThomaParameter((F12,), (F13,)),
    ]
    for spec in specs:
        assert model_from_json(model_to_json(spec)) == spec
