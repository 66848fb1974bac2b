import math
from fractions import Fraction

import numpy as np
import pytest

from modfluct.combinatorics.graphs import K3
from modfluct.cumulants import (
    CumulantRegime,
    sample_statistics,
)
from modfluct.models import PLANCHEREL, ProductGraphon, RngSeed, UniformPermuton
from modfluct.observables import evaluate
from modfluct.cumulants import compute_limits, kappa2_parts
from modfluct.stats import (
    StandardizedStatistic,
    clopper_pearson,
    concentration_check,
    kolmogorov_bound,
    kolmogorov_distance,
    normal_cdf,
    skewness_with_stderr,
    standardize,
    tail_report,
    tv_test,
)


def test_normal_cdf_accuracy():
    # reference values to 12+ digits
    assert abs(normal_cdf(0.0) - 0.5) < 1e-15
    assert abs(normal_cdf(1.0) - 0.8413447460685429) < 1e-12
    assert abs(normal_cdf(-2.5) - 0.0062096653257761) < 1e-12


def test_kolmogorov_distance_gaussian_sample():
    rng = np.random.default_rng(12)
    x = rng.standard_normal(10**6)
    assert kolmogorov_distance(x) <= 0.002  # DKW at 1e6 samples: ~1.36e-3 at 95%


def test_kolmogorov_distance_constant_sample():
    assert abs(kolmogorov_distance(np.zeros(2000)) - 0.5) < 1e-12
    c = 1.3
    expected = max(normal_cdf(c), 1 - normal_cdf(c))
    assert abs(kolmogorov_distance(np.full(2000, c)) - expected) < 1e-9


def test_kolmogorov_distance_sample_floor():
    with pytest.raises(ValueError):
        kolmogorov_distance(np.zeros(10))


def test_kolmogorov_distance_affine_invariance():
    rng = np.random.default_rng(3)
    x = rng.gamma(2.0, size=5000)
    d1 = kolmogorov_distance(standardize(x, "Y"))
    d2 = kolmogorov_distance(standardize(7.5 * x - 3.0, "Y"))
    assert abs(d1 - d2) < 1e-12


def test_kolmogorov_bound_values():
    regime = CumulantRegime(Fraction(1), Fraction(100), Fraction(1), 100, 1)
    assert abs(kolmogorov_bound(regime, 1.0) - 76.36 / 10) < 1e-9
    # the inversion plug-in reproduces the ~33000/sqrt(n) constant
    for n in (100, 4000):
        regime = CumulantRegime.permutation_occ(n, 2)
        value = kolmogorov_bound(regime, 1 / 6) * math.sqrt(n)
        assert abs(value - 33000) / 33000 < 0.05
    with pytest.raises(ValueError):
        kolmogorov_bound(regime, 0.0)


def test_kolmogorov_bound_triangle_prefactor():
    # for triangle counts the bound reads ~230 / (kappa2^(3/2) sqrt(n))
    n = 900
    regime = CumulantRegime.graphon(n, 3)
    kappa2 = 0.37  # any positive variance limit
    bound = kolmogorov_bound(regime, math.sqrt(kappa2))
    prefactor = bound * kappa2**1.5 * math.sqrt(n)
    assert abs(prefactor - 230) / 230 < 0.01


def test_tail_report_exposes_deviation_constant():
    rng = np.random.default_rng(11)
    s = rng.standard_normal(20000)
    regime = CumulantRegime.graphon(100, 3)
    sigma2, L = 0.25, 0.05
    report = tail_report(StandardizedStatistic("Y", s), (sigma2, L), regime)
    assert abs(report.meta["l"] - 3 / 6 * L / sigma2**1.5) < 1e-12


def test_kolmogorov_distance_decreases_with_n():
    # triangle statistic, matched replicate counts at n = 50 and n = 200
    reps = 10000
    distances = {}
    for n in (50, 200):
        s = sample_statistics(ProductGraphon(), K3, n, reps, RngSeed(31))
        distances[n] = kolmogorov_distance(standardize(s, "Y"))
    assert distances[200] < distances[50]


def test_standardize_modes():
    rng = np.random.default_rng(0)
    s = rng.normal(10, 2, size=4000)
    y = standardize(s, "Y")
    assert abs(y.values.mean()) < 1e-12 and abs(y.values.std(ddof=1) - 1) < 1e-12
    regime = CumulantRegime.graphon(100, 3)
    x = standardize(s, "X", regime)
    scale = float(regime.N_n) ** (1 / 3) * float(regime.D_n) ** (2 / 3)
    assert np.allclose(x.values * scale + s.mean(), s)
    with pytest.raises(ValueError):
        standardize(s, "X")
    with pytest.raises(ZeroDivisionError):
        standardize(np.ones(100), "Y")


def test_clopper_pearson():
    lo, hi = clopper_pearson(0, 1000, level=0.99)
    assert lo == 0.0 and 0.004 < hi < 0.008
    lo, hi = clopper_pearson(1000, 1000, level=0.99)
    assert hi == 1.0 and lo > 0.99
    lo, hi = clopper_pearson(500, 1000, level=0.95)
    assert lo < 0.5 < hi and hi - lo < 0.07


def test_concentration_check_passes_on_catalog_smoke():
    n, reps = 50, 10000
    s = sample_statistics(UniformPermuton(), (2, 1), n, reps, RngSeed(7))
    t_values = s / math.comb(n, 2)
    report = concentration_check(t_values, 0.5, n, 2, [0.02, 0.05, 0.1, 1.5], coefficient=2.0)
    assert report.passed
    # beyond the almost-sure range the empirical mass is exactly zero
    assert report.points[-1].exceed_count == 0
    doc = report.to_json()
    assert doc["kind"] == "concentration" and len(doc["points"]) == 4


def test_concentration_check_reps_floor():
    with pytest.raises(ValueError):
        concentration_check(np.zeros(100), 0.0, 10, 2, [0.1])


def test_tail_report_triangle():
    n, reps = 80, 20000
    s = sample_statistics(ProductGraphon(), K3, n, reps, RngSeed(41))
    regime = CumulantRegime.graphon(n, 3)
    limits = compute_limits(K3, ProductGraphon())
    report = tail_report(standardize(s, "Y", regime), limits, regime)
    assert report.passed  # resolvable skewness must match sign(L) > 0
    assert report.meta["skewness_resolvable"] in (True, False)
    # the deviation constant is the k/6-weighted skewness ratio of the limits
    sigma2, L = float(limits[0]), float(limits[1])
    assert abs(report.meta["l"] - 0.5 * L / sigma2**1.5) < 1e-12
    gauss = [pt.gaussian for pt in report.points]
    assert all(g is not None and 0 <= g <= 0.5 for g in gauss)
    # corrected tail exceeds the Gaussian tail when L > 0
    assert all(pt.bound >= g - 1e-15 for pt, g in zip(report.points, gauss))


def test_tail_report_symmetric_toy():
    rng = np.random.default_rng(5)
    s = rng.standard_normal(20000)
    regime = CumulantRegime.graphon(100, 2)
    report = tail_report(StandardizedStatistic("Y", s), (1.0, 0.0), regime)
    for pt in report.points:
        gauss_density_form = math.exp(-pt.threshold**2 / 2) / (pt.threshold * math.sqrt(2 * math.pi))
        assert abs(pt.bound - gauss_density_form) < 1e-12
    assert report.passed


def test_tail_report_singular():
    regime = CumulantRegime.graphon(100, 2)
    with pytest.raises(ValueError):
        tail_report(StandardizedStatistic("Y", np.zeros(2000)), (0.0, 0.0), regime)


def test_skewness_sign():
    rng = np.random.default_rng(8)
    skew, se = skewness_with_stderr(rng.gamma(1.0, size=50000))
    assert skew > 3 * se  # gamma(1) skewness = 2, strongly resolvable


def test_tv_test():
    tv, ok = tv_test({"a": 5000, "b": 5000}, {"a": Fraction(1, 2), "b": Fraction(1, 2)}, 0.02)
    assert tv < 0.02 and ok
    tv, ok = tv_test({"a": 10}, {"b": Fraction(1)}, 0.99)
    assert tv == 1.0 and not ok
    with pytest.raises(ValueError):
        tv_test({}, {"a": Fraction(1)}, 0.5)


def test_tv_test_multinomial_noise():
    rng = np.random.default_rng(9)
    probs = {i: Fraction(1, 10) for i in range(10)}
    draws = rng.integers(0, 10, size=20000)
    counts = {i: int((draws == i).sum()) for i in range(10)}
    tv, ok = tv_test(counts, probs, 0.05)
    assert ok and tv < 3 * math.sqrt(10 / 20000)


def test_singular_point_signals():
    # the singularity predicate is exact while Y-standardization still works
    assert evaluate(kappa2_parts((2,), (2,)), PLANCHEREL) == 0
    s = sample_statistics(PLANCHEREL, (2,), 30, 2000, RngSeed(55))
    std = standardize(s, "Y")
    assert len(std.values) == 2000
    with pytest.raises(ValueError):
        kolmogorov_bound(CumulantRegime.thoma(30, 2), 0.0)
