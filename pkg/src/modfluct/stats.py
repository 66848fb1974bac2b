"""Distributional checks downstream of the cumulant method.

Standardization of replicate statistics, Kolmogorov distance to the
standard normal, the explicit Berry-Esseen-type bound, sub-Gaussian
concentration predicates, tail reports with the third-cumulant correction,
and total-variation sampler-vs-oracle tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import beta as _beta

from .cumulants import CumulantRegime

KOLMOGOROV_CONSTANT = 76.36
MIN_KOLMOGOROV_SAMPLES = 1000
MIN_CONCENTRATION_REPS = 10000


def normal_cdf(t: float) -> float:
    """Phi via the C library's complementary error function (|rel err| ~ 1e-16)."""
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


def normal_tail(t: float) -> float:
    return 0.5 * math.erfc(t / math.sqrt(2.0))


@dataclass(frozen=True)
class StandardizedStatistic:
    """Replicates of S_n after X-mode (third-root) or Y-mode (variance) scaling."""

    mode: str  # "X" | "Y"
    values: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("X", "Y"):
            raise ValueError("mode must be 'X' or 'Y'")


def standardize(samples: np.ndarray, mode: str, regime: CumulantRegime | None = None, provenance: dict | None = None) -> StandardizedStatistic:
    """Center at the replicate mean; scale by N^(1/3) D^(2/3) (X) or the
    replicate standard deviation (Y)."""
    x = np.asarray(samples, dtype=np.float64)
    centered = x - x.mean()
    if mode == "Y":
        scale = x.std(ddof=1)
        if scale == 0:
            raise ZeroDivisionError("degenerate sample: zero variance")
    elif mode == "X":
        if regime is None:
            raise ValueError("X-mode scaling needs the cumulant regime")
        scale = float(regime.N_n) ** (1.0 / 3.0) * float(regime.D_n) ** (2.0 / 3.0)
    else:
        raise ValueError("mode must be 'X' or 'Y'")
    return StandardizedStatistic(mode=mode, values=centered / scale, provenance=provenance or {})


def kolmogorov_distance(samples) -> float:
    """sup_t |empirical CDF - Phi(t)|, evaluated on both sides of each jump."""
    values = samples.values if isinstance(samples, StandardizedStatistic) else np.asarray(samples, dtype=np.float64)
    n = len(values)
    if n < MIN_KOLMOGOROV_SAMPLES:
        raise ValueError(f"need at least {MIN_KOLMOGOROV_SAMPLES} samples, got {n}")
    xs = np.sort(values)
    phis = 0.5 * np.array([math.erfc(-t / math.sqrt(2.0)) for t in xs])
    steps_hi = np.arange(1, n + 1) / n
    steps_lo = np.arange(0, n) / n
    return float(np.maximum(np.abs(steps_hi - phis), np.abs(phis - steps_lo)).max())


def kolmogorov_bound(regime: CumulantRegime, sigma_n: float) -> float:
    """The explicit normal-approximation bound 76.36 A^3 / sigma_n^3 * sqrt(D/N)."""
    if sigma_n <= 0:
        raise ValueError("sigma_n <= 0: singular point, the bound does not apply")
    return KOLMOGOROV_CONSTANT * float(regime.A) ** 3 / sigma_n**3 * math.sqrt(regime.ratio())


def clopper_pearson(successes: int, trials: int, level: float = 0.99) -> tuple[float, float]:
    """Exact two-sided binomial confidence interval."""
    alpha = 1.0 - level
    lo = 0.0 if successes == 0 else float(_beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(_beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


@dataclass
class TailPoint:
    threshold: float
    exceed_count: int
    trials: int
    empirical: float
    ci_low: float
    ci_high: float
    bound: float
    ok: bool
    gaussian: float | None = None


@dataclass
class TailReport:
    kind: str  # "concentration" | "tails"
    points: list[TailPoint]
    level: float
    passed: bool
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "level": self.level,
            "passed": self.passed,
            "meta": self.meta,
            "points": [
                {
                    "threshold": p.threshold,
                    "exceed_count": p.exceed_count,
                    "trials": p.trials,
                    "empirical": p.empirical,
                    "ci_low": p.ci_low,
                    "ci_high": p.ci_high,
                    "bound": p.bound,
                    "ok": p.ok,
                    **({"gaussian": p.gaussian} if p.gaussian is not None else {}),
                }
                for p in self.points
            ],
        }


def concentration_check(
    t_values: np.ndarray,
    center: float,
    n: int,
    k: int,
    x_grid,
    coefficient: float = 2.0,
    level: float = 0.99,
) -> TailReport:
    """Empirical exceedance of |t - center| against coeff * exp(-n x^2 / (9 k^2)).

    The predicate holds when the upper confidence bound stays below the
    theoretical bound at every grid point (bounds >= 1 pass vacuously).
    """
    values = np.asarray(t_values, dtype=np.float64)
    reps = len(values)
    if reps < MIN_CONCENTRATION_REPS:
        raise ValueError(f"need at least {MIN_CONCENTRATION_REPS} replicates, got {reps}")
    gaps = np.abs(values - center)
    points = []
    for x in x_grid:
        count = int((gaps >= x).sum())
        emp = count / reps
        lo, hi = clopper_pearson(count, reps, level)
        bound = coefficient * math.exp(-n * x * x / (9.0 * k * k))
        ok = bound >= 1.0 or hi <= bound
        points.append(TailPoint(float(x), count, reps, emp, lo, hi, bound, ok))
    passed = all(p.ok for p in points)
    return TailReport(
        kind="concentration",
        points=points,
        level=level,
        passed=passed,
        meta={"n": n, "k": k, "coefficient": coefficient, "center": center},
    )


def skewness_with_stderr(samples: np.ndarray, n_boot: int = 200, seed: int = 0) -> tuple[float, float]:
    x = np.asarray(samples, dtype=np.float64)
    n = len(x)

    def skew(v):
        c = v - v.mean(axis=-1, keepdims=True)
        m2 = (c**2).mean(axis=-1)
        m3 = (c**3).mean(axis=-1)
        return m3 / m2**1.5

    rng = np.random.Generator(np.random.Philox(key=[seed, 31337]))
    boots = []
    for start in range(0, n_boot, 50):
        b = min(50, n_boot - start)
        idx = rng.integers(0, n, size=(b, n))
        boots.append(skew(x[idx]))
    return float(skew(x)), float(np.concatenate(boots).std(ddof=1))


def tail_report(
    samples: StandardizedStatistic,
    limits: tuple,
    regime: CumulantRegime,
    y_grid=None,
    level: float = 0.95,
) -> TailReport:
    """Empirical upper tails against the Gaussian tail and its third-cumulant
    correction exp(L/(6 sigma^3) sqrt(D/N) y^3).  Report-only, except that a
    statistically resolvable skewness must match the sign of L."""
    sigma2, L = limits
    sigma2 = float(sigma2)
    if sigma2 <= 0:
        raise ValueError("singular limit: sigma^2 <= 0")
    y_grid = np.arange(1.0, 3.01, 0.5) if y_grid is None else np.asarray(list(y_grid), dtype=float)
    values = samples.values
    reps = len(values)
    correction_scale = float(L) / (6.0 * sigma2**1.5) * math.sqrt(regime.ratio()) if L is not None else 0.0
    points = []
    for y in y_grid:
        count = int((values >= y).sum())
        emp = count / reps
        lo, hi = clopper_pearson(count, reps, level)
        gauss = normal_tail(y)
        corrected = (
            math.exp(-y * y / 2.0) / (y * math.sqrt(2.0 * math.pi)) * math.exp(correction_scale * y**3)
        )
        # informational rows; the pass/fail gate is the skewness sign below
        points.append(TailPoint(float(y), count, reps, emp, lo, hi, corrected, True, gaussian=gauss))
    skew, skew_se = skewness_with_stderr(values)
    resolvable = abs(skew) > 3.0 * skew_se
    sign_ok = (not resolvable) or L is None or skew * float(L) > 0
    return TailReport(
        kind="tails",
        points=points,
        level=level,
        passed=bool(sign_ok),
        meta={
            "sigma2": sigma2,
            "L": None if L is None else float(L),
            # deviation constant: correction factor is exp(l y^3 / sqrt(n))
            "l": None if L is None else regime.k / 6.0 * float(L) / sigma2**1.5,
            "skewness": skew,
            "skewness_stderr": skew_se,
            "skewness_resolvable": resolvable,
            "t_n": sigma2 * (1.0 / regime.ratio()) ** (1.0 / 3.0),
        },
    )


def tv_test(empirical: dict, exact: dict, threshold: float) -> tuple[float, bool]:
    """Total-variation distance between an empirical histogram and a law."""
    reps = sum(empirical.values())
    if reps <= 0:
        raise ValueError("no samples")
    keys = set(empirical) | set(exact)
    tv = sum(abs(empirical.get(k, 0) / reps - float(exact.get(k, Fraction(0)))) for k in keys) / 2.0
    return tv, tv <= threshold
