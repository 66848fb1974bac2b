"""Limiting-cumulant maps, Monte-Carlo cumulant estimation and exact oracles.

The kappa2/kappa3 maps turn pairs/triples of equal-size basis objects into
formal sums whose evaluation at a model parameter gives the limits of the
scaled second and third cumulants of the associated counting statistics.
The estimators and enumeration oracles let every desk-scale consequence be
checked against them.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable

import numpy as np

from . import kernels
from .combinatorics import graphs as G
from .combinatorics import partitions as P
from .combinatorics import perms as S
from .combinatorics.formal import FormalSum, bilinear_product
from .combinatorics.graphs import Graph, canonical, disjoint_union
from .combinatorics.partitions import Partition, p_rho
from .combinatorics.perms import Permutation
from .models import (
    ConstantGraphon,
    GraphonSpec,
    RngSeed,
    StepGraphon,
    ThomaParameter,
    UniformPermuton,
    exact_central_measure,
    family_of,
    sample_adjacency,
    sample_letters,
)
from .observables import Observable, evaluate, graphon_density, hom_count, occ_fast

EXACT_GRAPH_MAX_N = 4
EXACT_GRAPH_MAX_BLOCKS = 2
EXACT_PERM_MAX_N = 7
EXACT_THOMA_MAX_N = 8
MC_MIN_REPS = 1000
BOOTSTRAP_DEFAULT = 200
CHUNK_SIZE = 1024


# ---------------------------------------------------------------------------
# regimes and reports


@dataclass(frozen=True)
class CumulantRegime:
    """Parameters (D_n, N_n, A) of the uniform cumulant bound, plus sizes."""

    D_n: Fraction
    N_n: Fraction
    A: Fraction
    n: int
    k: int

    @classmethod
    def graphon(cls, n: int, k: int) -> "CumulantRegime":
        return cls(Fraction(k * k * n ** (k - 1)), Fraction(n**k), Fraction(1), n, k)

    @classmethod
    def permutation_occ(cls, n: int, k: int) -> "CumulantRegime":
        return cls(Fraction(k * comb(n - 1, k - 1)), Fraction(comb(n, k)), Fraction(1), n, k)

    @classmethod
    def thoma(cls, n: int, k: int) -> "CumulantRegime":
        return cls(Fraction(k * k * n ** (k - 1)), Fraction(n**k), Fraction(1), n, k)

    @classmethod
    def for_family(cls, family: str, n: int, k: int) -> "CumulantRegime":
        if family == "graphon":
            return cls.graphon(n, k)
        if family == "permuton":
            return cls.permutation_occ(n, k)
        if family == "thoma":
            return cls.thoma(n, k)
        raise ValueError(family)

    def ratio(self) -> float:
        return float(self.D_n / self.N_n)


@dataclass
class CumulantReport:
    """Estimated or exact cumulants of S_n with the scaled quantities."""

    kappa: list
    regime: CumulantRegime
    mode: str  # "mc" | "exact"
    stderr: list | None = None
    limits: tuple | None = None  # (sigma^2, L) from the formal maps, if known
    reps: int | None = None
    seed: tuple[int, int] | None = None
    wall_seconds: float | None = None

    @property
    def sigma2_n(self):
        return self.kappa[1] / (self.regime.N_n * self.regime.D_n)

    @property
    def L_n(self):
        return self.kappa[2] / (self.regime.N_n * self.regime.D_n**2)

    @property
    def sigma2_n_stderr(self) -> float | None:
        if self.stderr is None:
            return None
        return self.stderr[1] / float(self.regime.N_n * self.regime.D_n)

    @property
    def L_n_stderr(self) -> float | None:
        if self.stderr is None:
            return None
        return self.stderr[2] / float(self.regime.N_n * self.regime.D_n**2)

    def to_json(self) -> dict:
        def num(x):
            return str(x) if isinstance(x, Fraction) else float(x)

        doc = {
            "mode": self.mode,
            "kappa": [num(k) for k in self.kappa],
            "regime": {
                "D_n": str(self.regime.D_n),
                "N_n": str(self.regime.N_n),
                "A": str(self.regime.A),
                "n": self.regime.n,
                "k": self.regime.k,
            },
            "sigma2_n": num(self.sigma2_n),
            "L_n": num(self.L_n),
        }
        if self.stderr is not None:
            doc["stderr"] = [float(s) for s in self.stderr]
            doc["sigma2_n_stderr"] = self.sigma2_n_stderr
            doc["L_n_stderr"] = self.L_n_stderr
        if self.limits is not None:
            doc["limits"] = {"sigma2": num(self.limits[0]), "L": None if self.limits[1] is None else num(self.limits[1])}
        if self.reps is not None:
            doc["reps"] = self.reps
        if self.seed is not None:
            doc["seed"] = list(self.seed)
        if self.wall_seconds is not None:
            doc["wall_seconds"] = round(self.wall_seconds, 3)
        return doc


# ---------------------------------------------------------------------------
# the formal maps: graphs


def kappa2_graphs(f: Graph, g: Graph) -> Observable:
    k = f.k
    if g.k != k:
        raise ValueError("kappa2 needs equal-size graphs")
    total: FormalSum[Graph] = FormalSum()
    product = canonical(disjoint_union(f, g))
    for a in range(1, k + 1):
        for b in range(1, k + 1):
            total += FormalSum.single(canonical(G.junction2(f, g, a, b)))
            total -= FormalSum.single(product)
    return Observable("graph", total * Fraction(1, k * k))


def kappa3_graphs(f: Graph, g: Graph, h: Graph) -> Observable:
    k = f.k
    if g.k != k or h.k != k:
        raise ValueError("kappa3 needs equal-size graphs")
    total: FormalSum[Graph] = FormalSum()
    triple = canonical(disjoint_union(disjoint_union(f, g), h))
    rng_k = range(1, k + 1)
    for a, b, c in itertools.product(rng_k, rng_k, rng_k):
        total += FormalSum.single(canonical(G.junction3_point(f, g, h, a, b, c)))
        total += FormalSum.single(triple, 2)
        total -= FormalSum.single(canonical(disjoint_union(f, G.junction2(g, h, b, c))))
        total -= FormalSum.single(canonical(disjoint_union(g, G.junction2(f, h, a, c))))
        total -= FormalSum.single(canonical(disjoint_union(h, G.junction2(f, g, a, b))))
    for x, y, z in ((f, g, h), (g, h, f), (h, f, g)):
        for a, d in itertools.product(rng_k, rng_k):
            for b, c in itertools.permutations(rng_k, 2):
                total += FormalSum.single(canonical(G.junction3_pair(x, y, z, a, b, c, d)))
                total += FormalSum.single(triple)
                total -= FormalSum.single(canonical(disjoint_union(z, G.junction2(x, y, a, b))))
                total -= FormalSum.single(canonical(disjoint_union(x, G.junction2(y, z, c, d))))
    return Observable("graph", total * Fraction(1, k**4))


# ---------------------------------------------------------------------------
# the formal maps: permutations


def kappa2_perms(tau: Permutation, rho: Permutation) -> Observable:
    k = len(tau)
    if len(rho) != k:
        raise ValueError("kappa2 needs equal-size permutations")
    product = S.graphical_shuffle(tau, rho)
    total: FormalSum[Permutation] = FormalSum()
    for a in range(1, k + 1):
        for b in range(1, k + 1):
            total += S.amalgamated_shuffle2(tau, rho, a, b)
            total -= product
    return Observable("permutation", total * Fraction(1, k * k))


def _perm_triple_product(tau: Permutation, rho: Permutation, mu: Permutation) -> FormalSum[Permutation]:
    return bilinear_product(S.graphical_shuffle(tau, rho), FormalSum.single(mu), S.shuffle_mul)


def kappa3_perms(tau: Permutation, rho: Permutation, mu: Permutation) -> Observable:
    """Third-cumulant map for patterns.

    Size 2 runs in well under a second; size 3 expands into thousands of
    9-letter shuffle terms and takes minutes."""
    k = len(tau)
    if len(rho) != k or len(mu) != k:
        raise ValueError("kappa3 needs equal-size permutations")
    triple = _perm_triple_product(tau, rho, mu)
    pair_cache: dict = {}

    def pair_amalg(x, y, a, b):
        key = (x, y, a, b)
        if key not in pair_cache:
            pair_cache[key] = S.amalgamated_shuffle2(x, y, a, b)
        return pair_cache[key]

    def amalg_times(x_fs, z):
        return bilinear_product(x_fs, FormalSum.single(z), S.shuffle_mul)

    total: FormalSum[Permutation] = FormalSum()
    rng_k = range(1, k + 1)
    for a, b, c in itertools.product(rng_k, rng_k, rng_k):
        total += S.amalgamated_shuffle3_point(tau, rho, mu, a, b, c)
        total += triple * 2
        total -= amalg_times(pair_amalg(tau, rho, a, b), mu)
        total -= amalg_times(pair_amalg(rho, mu, b, c), tau)
        total -= amalg_times(pair_amalg(tau, mu, a, c), rho)
    for x, y, z in ((tau, rho, mu), (rho, mu, tau), (mu, tau, rho)):
        for a, d in itertools.product(rng_k, rng_k):
            for b, c in itertools.permutations(rng_k, 2):
                total += S.amalgamated_shuffle3_pair(x, y, z, a, b, c, d)
                total += triple
                total -= amalg_times(pair_amalg(x, y, a, b), z)
                total -= amalg_times(pair_amalg(y, z, c, d), x)
    return Observable("permutation", total * Fraction(1, k**4))


# ---------------------------------------------------------------------------
# the formal maps: partitions


def kappa2_parts(rho: Partition, mu: Partition) -> Observable:
    k = sum(rho)
    if sum(mu) != k:
        raise ValueError("kappa2 needs equal-size partitions")
    product = P.partition_product(rho, mu)
    total: FormalSum[Partition] = FormalSum()
    for a in range(1, len(rho) + 1):
        for b in range(1, len(mu) + 1):
            weight = Fraction(rho[a - 1] * mu[b - 1])
            total += FormalSum.single(P.partition_join(rho, mu, a, b), weight)
            total -= FormalSum.single(product, weight)
    return Observable("partition", total * Fraction(1, k * k))


def kappa3_parts(rho: Partition, mu: Partition, nu: Partition) -> Observable:
    k = sum(rho)
    if sum(mu) != k or sum(nu) != k:
        raise ValueError("kappa3 needs equal-size partitions")
    total: FormalSum[Partition] = FormalSum()
    product = P.partition_product(P.partition_product(rho, mu), nu)

    def j2(x, y, a, b):
        return P.partition_join(x, y, a, b)

    for a in range(1, len(rho) + 1):
        for b in range(1, len(mu) + 1):
            for c in range(1, len(nu) + 1):
                w = Fraction(rho[a - 1] * mu[b - 1] * nu[c - 1])
                total += FormalSum.single(P.partition_join3_point(rho, mu, nu, a, b, c), w)
                total += FormalSum.single(product, 2 * w)
                total -= FormalSum.single(P.partition_product(j2(rho, mu, a, b), nu), w)
                total -= FormalSum.single(P.partition_product(j2(mu, nu, b, c), rho), w)
                total -= FormalSum.single(P.partition_product(j2(rho, nu, a, c), mu), w)
    for x, y, z in ((rho, mu, nu), (mu, nu, rho), (nu, rho, mu)):
        for a in range(1, len(x) + 1):
            for b in range(1, len(y) + 1):
                for c in range(1, len(z) + 1):
                    w = Fraction(x[a - 1] * y[b - 1] * (y[b - 1] - 1) * z[c - 1])
                    if not w:
                        continue
                    total += FormalSum.single(product, w)
                    total += FormalSum.single(P.partition_join3_point(x, y, z, a, b, c), w)
                    total -= FormalSum.single(P.partition_product(j2(x, y, a, b), z), w)
                    total -= FormalSum.single(P.partition_product(j2(y, z, b, c), x), w)
        for a in range(1, len(x) + 1):
            for b, c in itertools.permutations(range(1, len(y) + 1), 2):
                for d in range(1, len(z) + 1):
                    w = Fraction(x[a - 1] * y[b - 1] * y[c - 1] * z[d - 1])
                    total += FormalSum.single(product, w)
                    total += FormalSum.single(P.partition_join3_pair(x, y, z, a, b, c, d), w)
                    total -= FormalSum.single(P.partition_product(j2(x, y, a, b), z), w)
                    total -= FormalSum.single(P.partition_product(j2(y, z, c, d), x), w)
    return Observable("partition", total * Fraction(1, k**4))


def kappa2_map(family: str, f, g) -> Observable:
    if family == "graph":
        return kappa2_graphs(f, g)
    if family == "permutation":
        return kappa2_perms(f, g)
    return kappa2_parts(f, g)


def kappa3_map(family: str, f, g, h) -> Observable:
    if family == "graph":
        return kappa3_graphs(f, g, h)
    if family == "permutation":
        return kappa3_perms(f, g, h)
    return kappa3_parts(f, g, h)


# ---------------------------------------------------------------------------
# statistics of one replicate


def _basis_kind(obs, model) -> tuple[str, int]:
    """(model family, observable degree); the model resolves tuples that are
    both valid permutations and valid partitions."""
    family = family_of(model)
    if family == "graphon":
        if not isinstance(obs, Graph):
            raise TypeError(f"graphon statistics need a Graph observable, got {obs!r}")
        return family, obs.k
    if not isinstance(obs, tuple):
        raise TypeError(f"{family} statistics need a tuple observable, got {obs!r}")
    if family == "permuton":
        if sorted(obs) != list(range(1, len(obs) + 1)):
            raise TypeError(f"{obs!r} is not a permutation in one-line notation")
        return family, len(obs)
    if any(obs[i] < obs[i + 1] for i in range(len(obs) - 1)) or (obs and obs[-1] < 1):
        raise TypeError(f"{obs!r} is not a partition")
    return family, sum(obs)


def _graph_statistic(obs: Graph) -> Callable[[np.ndarray], float]:
    if obs.k == 1:
        return lambda adj: float(adj.shape[0])
    if obs.k == 2 and obs.edge_count == 1:
        return lambda adj: float(adj.sum())
    if obs.k == 3 and obs.edge_count == 3:
        return lambda adj: 6.0 * kernels.triangle_count(adj)
    if obs.k == 3 and obs.edge_count == 2:
        return lambda adj: float(kernels.path2_hom(adj))

    def generic(adj: np.ndarray) -> float:
        n = adj.shape[0]
        host = Graph.from_edges(
            n, ((int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(np.triu(adj, 1))))
        )
        return float(hom_count(obs, host))

    return generic


def sample_statistics(model, obs, n: int, reps: int, seed: RngSeed, threads: int = 1) -> np.ndarray:
    """Replicates of the unscaled statistic S_n (counts; p_rho for partitions).

    Replicates are generated in fixed chunks keyed by stream id, so the
    result is independent of `threads`.
    """
    family = family_of(model)
    chunks = [
        (c, min(CHUNK_SIZE, reps - c * CHUNK_SIZE))
        for c in range((reps + CHUNK_SIZE - 1) // CHUNK_SIZE)
    ]
    if threads <= 1:
        parts = [_statistic_chunk(model, obs, n, count, seed.seed, seed.stream + c) for c, count in chunks]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_statistic_chunk, model, obs, n, count, seed.seed, seed.stream + c)
                for c, count in chunks
            ]
            parts = [f.result() for f in futures]
    return np.concatenate(parts) if parts else np.empty(0)


def _statistic_chunk(model, obs, n: int, count: int, seed: int, stream: int) -> np.ndarray:
    family = family_of(model)
    rng = RngSeed(seed, stream).generator()
    out = np.empty(count, dtype=np.float64)
    if family == "graphon":
        stat = _graph_statistic(obs)
        for i in range(count):
            out[i] = stat(sample_adjacency(model, n, rng))
        return out
    if family == "permuton":
        k = len(obs)
        inv_fast = obs == (2, 1)
        if isinstance(model, UniformPermuton):
            for i in range(count):
                sigma = rng.permutation(n) + 1
                out[i] = (
                    kernels.inversion_count(sigma)
                    if inv_fast
                    else _occ_of_array(obs, sigma, k)
                )
            return out
        from .models import sample_points
        from .combinatorics.perms import conf as _conf

        for i in range(count):
            x, y = sample_points(model, n, rng)
            sigma = np.array(_conf(zip(x.tolist(), y.tolist())), dtype=np.int64)
            out[i] = kernels.inversion_count(sigma) if inv_fast else _occ_of_array(obs, sigma, k)
        return out
    if family == "thoma":
        k = sum(obs)
        for i in range(count):
            letters, cutoff = sample_letters(model, n, rng)
            lam = tuple(int(r) for r in kernels.rsk_row_lengths(letters, cutoff))
            out[i] = float(p_rho(obs, lam))
        return out
    raise ValueError(family)


def _occ_of_array(tau: Permutation, sigma: np.ndarray, k: int) -> float:
    if k in kernels.PROFILE_KS:
        return float(kernels.pattern_profile(sigma, k)[kernels.pattern_index(tau)])
    return float(occ_fast(tau, tuple(int(v) for v in sigma)))


# ---------------------------------------------------------------------------
# k-statistics and the Monte-Carlo estimator


def k_statistics(samples: np.ndarray) -> tuple[float, float, float]:
    """Unbiased estimators of the first three cumulants."""
    x = np.asarray(samples, dtype=np.float64)
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 samples")
    mean = x.mean()
    centered = x - mean
    m2 = float((centered**2).mean())
    m3 = float((centered**3).mean())
    k2 = n / (n - 1) * m2
    k3 = n * n / ((n - 1) * (n - 2)) * m3
    return float(mean), k2, k3


def bootstrap_stderr(
    samples: np.ndarray, n_boot: int = BOOTSTRAP_DEFAULT, seed: RngSeed | None = None, block: int = 50
) -> tuple[float, float, float]:
    """Nonparametric bootstrap standard errors for the three k-statistics."""
    x = np.asarray(samples, dtype=np.float64)
    n = len(x)
    rng = (seed or RngSeed(0, 10**6)).generator()
    k1s, k2s, k3s = [], [], []
    done = 0
    while done < n_boot:
        b = min(block, n_boot - done)
        idx = rng.integers(0, n, size=(b, n))
        resampled = x[idx]
        means = resampled.mean(axis=1)
        centered = resampled - means[:, None]
        m2 = (centered**2).mean(axis=1)
        m3 = (centered**3).mean(axis=1)
        k1s.append(means)
        k2s.append(n / (n - 1) * m2)
        k3s.append(n * n / ((n - 1) * (n - 2)) * m3)
        done += b
    return (
        float(np.concatenate(k1s).std(ddof=1)),
        float(np.concatenate(k2s).std(ddof=1)),
        float(np.concatenate(k3s).std(ddof=1)),
    )


def compute_limits(obs, model, with_third: bool | None = None) -> tuple:
    """(sigma^2, L) by evaluating the formal maps at the model, where exact
    evaluation is available.  L is skipped when the kappa3 expansion would
    be expensive (permutation patterns of size > 2)."""
    model_family, k = _basis_kind(obs, model)
    family = {"graphon": "graph", "permuton": "permutation", "thoma": "partition"}[model_family]
    sigma2 = evaluate(kappa2_map(family, obs, obs), model)
    if with_third is None:
        with_third = not (family == "permutation" and k > 2)
    L = evaluate(kappa3_map(family, obs, obs, obs), model) if with_third else None
    return sigma2, L


def mc_cumulants(
    model,
    obs,
    n: int,
    reps: int,
    seed: RngSeed,
    threads: int = 1,
    n_boot: int = BOOTSTRAP_DEFAULT,
    limits: tuple | str | None = "auto",
    samples: np.ndarray | None = None,
) -> CumulantReport:
    """Estimate the first three cumulants of S_n over `reps` replicates.

    `samples` short-circuits the sampling step when the caller already drew
    the replicates (it must come from the same model/obs/n/seed)."""
    if reps < MC_MIN_REPS:
        raise ValueError(f"need at least {MC_MIN_REPS} replicates")
    started = time.perf_counter()
    family, k = _basis_kind(obs, model)
    regime = CumulantRegime.for_family(family, n, k)
    if samples is None:
        samples = sample_statistics(model, obs, n, reps, seed, threads=threads)
    elif len(samples) != reps:
        raise ValueError("precomputed samples disagree with reps")
    kappa = list(k_statistics(samples))
    stderr = list(bootstrap_stderr(samples, n_boot=n_boot, seed=seed.with_stream(seed.stream + 10**6)))
    if limits == "auto":
        try:
            limits = compute_limits(obs, model)
        except (TypeError, ValueError):
            limits = None
    return CumulantReport(
        kappa=kappa,
        regime=regime,
        mode="mc",
        stderr=stderr,
        limits=limits,
        reps=reps,
        seed=(seed.seed, seed.stream),
        wall_seconds=time.perf_counter() - started,
    )


def mc_joint_kappa2(model, obs_a, obs_b, n: int, reps: int, seed: RngSeed, threads: int = 1) -> tuple[float, float]:
    """Joint second cumulant via the polarization identity on S_a +/- S_b."""
    _basis_kind(obs_a, model)
    _basis_kind(obs_b, model)
    sa = sample_statistics(model, obs_a, n, reps, seed, threads=threads)
    sb = sample_statistics(model, obs_b, n, reps, seed, threads=threads)
    # same seed/stream per replicate index, so sa[i] and sb[i] share the draw
    plus = k_statistics(sa + sb)[1]
    minus = k_statistics(sa - sb)[1]
    est = (plus - minus) / 4.0
    rng = seed.with_stream(seed.stream + 2 * 10**6).generator()
    boots = []
    for _ in range(BOOTSTRAP_DEFAULT):
        idx = rng.integers(0, reps, size=reps)
        boots.append((k_statistics(sa[idx] + sb[idx])[1] - k_statistics(sa[idx] - sb[idx])[1]) / 4.0)
    return est, float(np.std(boots, ddof=1))


# ---------------------------------------------------------------------------
# exact enumeration oracles


def moments_to_cumulants(moments: list) -> list:
    """kappa_r from raw moments m_1..m_R via the standard recursion."""
    kappas: list = []
    for r in range(1, len(moments) + 1):
        value = moments[r - 1]
        for j in range(1, r):
            value -= comb(r - 1, j - 1) * kappas[j - 1] * moments[r - j - 1]
        kappas.append(value)
    return kappas


def exact_cumulants(model, obs, n: int, R: int = 4) -> CumulantReport:
    """Exact cumulants of S_n by full enumeration (small n only)."""
    if R > 6:
        raise ValueError("exact cumulants capped at order 6")
    model_family, k = _basis_kind(obs, model)
    regime = CumulantRegime.for_family(model_family, n, k)
    if model_family == "graphon":
        dist = _exact_graph_distribution(model, obs, n)
    elif model_family == "permuton":
        dist = _exact_perm_distribution(model, obs, n)
    else:
        dist = _exact_thoma_distribution(model, obs, n)
    moments = [sum(p * Fraction(s) ** r for s, p in dist.items()) for r in range(1, R + 1)]
    kappa = moments_to_cumulants(moments)
    return CumulantReport(kappa=kappa, regime=regime, mode="exact")


def _exact_graph_distribution(spec: GraphonSpec, obs: Graph, n: int) -> dict:
    if isinstance(spec, ConstantGraphon):
        spec = StepGraphon((Fraction(1),), ((spec.p,),))
    if not isinstance(spec, StepGraphon):
        raise ValueError("exact graph enumeration needs a constant or step spec")
    if n > EXACT_GRAPH_MAX_N:
        raise ValueError(f"exact graph enumeration capped at n={EXACT_GRAPH_MAX_N}")
    if spec.q > EXACT_GRAPH_MAX_BLOCKS:
        raise ValueError(f"exact graph enumeration capped at {EXACT_GRAPH_MAX_BLOCKS} blocks")
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    stat_cache: dict[int, int] = {}
    for bits in range(1 << len(pairs)):
        host = Graph.from_edges(n, (pairs[i] for i in range(len(pairs)) if bits >> i & 1))
        stat_cache[bits] = hom_count(obs, host)
    dist: dict[Fraction, Fraction] = {}
    for assignment in itertools.product(range(spec.q), repeat=n):
        type_weight = Fraction(1)
        for t in assignment:
            type_weight *= spec.masses[t]
        edge_p = [spec.values[assignment[u - 1]][assignment[v - 1]] for u, v in pairs]
        for bits in range(1 << len(pairs)):
            w = type_weight
            for i, p in enumerate(edge_p):
                w *= p if bits >> i & 1 else 1 - p
                if not w:
                    break
            if not w:
                continue
            s = Fraction(stat_cache[bits])
            dist[s] = dist.get(s, Fraction(0)) + w
    return dist


def _exact_perm_distribution(spec, obs: Permutation, n: int) -> dict:
    if not isinstance(spec, UniformPermuton):
        raise ValueError("exact permutation enumeration supports the uniform permuton")
    if n > EXACT_PERM_MAX_N:
        raise ValueError(f"exact permutation enumeration capped at n={EXACT_PERM_MAX_N}")
    dist: dict[Fraction, Fraction] = {}
    weight = Fraction(1, factorial(n))
    for sigma in itertools.permutations(range(1, n + 1)):
        s = Fraction(occ_fast(obs, sigma))
        dist[s] = dist.get(s, Fraction(0)) + weight
    return dist


def _exact_thoma_distribution(omega: ThomaParameter, obs: Partition, n: int) -> dict:
    if n > EXACT_THOMA_MAX_N:
        raise ValueError(f"exact partition enumeration capped at n={EXACT_THOMA_MAX_N}")
    dist: dict[Fraction, Fraction] = {}
    for lam, p in exact_central_measure(omega, n).items():
        s = p_rho(obs, lam)
        dist[s] = dist.get(s, Fraction(0)) + p
    return dist


# ---------------------------------------------------------------------------
# exact moments of subgraph-count statistics at any n (set-partition method)


def exact_hom_cumulants(spec: GraphonSpec, graphs_list: list[Graph], n: int) -> list:
    """Exact joint cumulant of the hom-count statistics of `graphs_list`.

    E[prod S_i] expands over loop-free set partitions of the disjoint
    vertices: each partition contributes n-falling-(#blocks) times the
    density of the quotient graph.  Orders 1..3 supported.
    """
    r = len(graphs_list)
    if r not in (1, 2, 3):
        raise ValueError("orders 1..3 supported")
    subsets_moments: dict[tuple[int, ...], Fraction] = {}
    for idx_subset in _nonempty_subsets(r):
        union = None
        for i in idx_subset:
            union = graphs_list[i] if union is None else disjoint_union(union, graphs_list[i])
        subsets_moments[idx_subset] = _hom_moment(spec, union, n)
    if r == 1:
        return [subsets_moments[(0,)]]
    if r == 2:
        m12 = subsets_moments[(0, 1)]
        return [m12 - subsets_moments[(0,)] * subsets_moments[(1,)]]
    m1, m2, m3 = (subsets_moments[(i,)] for i in range(3))
    m12, m13, m23 = subsets_moments[(0, 1)], subsets_moments[(0, 2)], subsets_moments[(1, 2)]
    m123 = subsets_moments[(0, 1, 2)]
    return [m123 - m12 * m3 - m13 * m2 - m23 * m1 + 2 * m1 * m2 * m3]


def _nonempty_subsets(r: int):
    for size in range(1, r + 1):
        yield from itertools.combinations(range(r), size)


def _hom_moment(spec: GraphonSpec, f: Graph, n: int) -> Fraction:
    """E[number of edge-preserving maps of f into the size-n random graph]."""
    total = Fraction(0)
    adj = f.adjacency()
    blocks: list[list[int]] = []

    def rec(v: int):
        nonlocal total
        if v == f.k:
            quotient = _quotient_graph(f, blocks)
            weight = Fraction(1)
            nn = n
            for _ in blocks:
                weight *= nn
                nn -= 1
            total += weight * graphon_density(quotient, spec)
            return
        for block in blocks:
            if any(adj[u, v] for u in block):
                continue
            block.append(v)
            rec(v + 1)
            block.pop()
        blocks.append([v])
        rec(v + 1)
        blocks.pop()

    rec(0)
    return total


def _quotient_graph(f: Graph, blocks: list[list[int]]) -> Graph:
    index = {}
    for bi, block in enumerate(blocks):
        for v in block:
            index[v] = bi + 1
    edges = set()
    for u, v in f.edges:
        bu, bv = index[u - 1], index[v - 1]
        if bu != bv:
            edges.add((min(bu, bv), max(bu, bv)))
    return Graph.from_edges(len(blocks), edges)


# ---------------------------------------------------------------------------
# the uniform cumulant bound


@dataclass(frozen=True)
class Mc1Result:
    order: int
    value: float
    bound: float
    margin: float
    ok: bool


def mc1_bound(regime: CumulantRegime, r: int) -> Fraction:
    return regime.N_n * (2 * regime.D_n) ** (r - 1) * Fraction(r) ** (r - 2) * regime.A**r


def mc1_check(report: CumulantReport, orders: range | None = None) -> list[Mc1Result]:
    """Compare |kappa^(r)| against N (2D)^(r-1) r^(r-2) A^r for each order."""
    orders = orders or range(1, len(report.kappa) + 1)
    out = []
    for r in orders:
        value = report.kappa[r - 1]
        bound = mc1_bound(report.regime, r)
        if isinstance(value, Fraction) and isinstance(bound, Fraction):
            ok = abs(value) <= bound
            margin = float(bound - abs(value))
        else:
            ok = abs(float(value)) <= float(bound)
            margin = float(bound) - abs(float(value))
        out.append(Mc1Result(order=r, value=float(value), bound=float(bound), margin=margin, ok=bool(ok)))
    return out
