"""Evaluating observables on finite objects and on model parameters.

Subgraph densities t(F, G) and t(F, g), pattern densities t(tau, sigma) and
t(tau, pi), Frobenius moments, and the linear/multiplicative extension of
these evaluations to formal sums (the evaluation morphism).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from . import kernels
from .combinatorics.formal import FormalSum
from .combinatorics.graphs import Graph
from .combinatorics.partitions import Partition, p_rho
from .combinatorics.perms import Permutation, conf, occ
from .models import (
    ConstantGraphon,
    GraphonSpec,
    GridGraphon,
    GridPermuton,
    MeanGraphon,
    PermutationPermuton,
    PermutonSpec,
    ProductGraphon,
    RngSeed,
    StepGraphon,
    ThomaParameter,
    UniformPermuton,
    family_of,
    sample_points,
)

HOM_PATTERN_MAX = 8
QUADRATURE_MAX_VERTICES = 7
QUADRATURE_DEFAULT_ORDER = 32
QUADRATURE_RICHARDSON_TOL = 1e-8
F_TAU_MAX = 5
STEP_ENUM_MAX_ASSIGNMENTS = 4_000_000


@dataclass(frozen=True)
class Observable:
    """A formal sum over one family's basis, graded by the largest object."""

    family: str  # "graph" | "permutation" | "partition"
    element: FormalSum

    def __post_init__(self):
        if self.family not in ("graph", "permutation", "partition"):
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def degree(self) -> int:
        degs = [_basis_degree(self.family, key) for key, _ in self.element]
        return max(degs, default=0)


def _basis_degree(family: str, key) -> int:
    if family == "graph":
        return key.k
    return sum(key) if family == "partition" else len(key)


# ---------------------------------------------------------------------------
# graphs: homomorphism and embedding densities


def hom_count(f: Graph, host: Graph) -> int:
    """Number of edge-preserving maps from f into host (images may repeat)."""
    if f.k > HOM_PATTERN_MAX:
        raise ValueError(f"hom counting capped at {HOM_PATTERN_MAX} pattern vertices")
    n = host.k
    if f.k == 1:
        return n
    adj = host.adjacency()
    if f == Graph.from_edges(2, [(1, 2)]):
        return int(adj.sum())
    if f.k == 3 and f.edge_count == 3:
        return 6 * kernels.triangle_count(adj)
    if f.k == 3 and f.edge_count == 2:
        # path: free center choice weighted by squared degree, up to labeling
        return kernels.path2_hom(adj)
    return _hom_backtrack(f, adj, injective=False)


def emb_count(f: Graph, host: Graph) -> int:
    """Number of injective edge-preserving maps from f into host."""
    if f.k > HOM_PATTERN_MAX:
        raise ValueError(f"embedding counting capped at {HOM_PATTERN_MAX} pattern vertices")
    return _hom_backtrack(f, host.adjacency(), injective=True)


def _hom_backtrack(f: Graph, adj: np.ndarray, injective: bool) -> int:
    n = adj.shape[0]
    k = f.k
    # constraints[v] = edges from v to already-assigned vertices
    earlier = [[u for u in range(1, v) if f.has_edge(u, v)] for v in range(k + 1)]
    count = 0
    assignment = [0] * (k + 1)

    def rec(v: int):
        nonlocal count
        if v > k:
            count += 1
            return
        for target in range(n):
            if injective and target in assignment[1:v]:
                continue
            ok = True
            for u in earlier[v]:
                if not adj[assignment[u], target]:
                    ok = False
                    break
            if ok:
                assignment[v] = target
                rec(v + 1)
    rec(1)
    return count


def hom_density(f: Graph, host: Graph) -> Fraction:
    return Fraction(hom_count(f, host), host.k**f.k)


def falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def emb_density(f: Graph, host: Graph) -> Fraction:
    return Fraction(emb_count(f, host), falling(host.k, f.k))


# ---------------------------------------------------------------------------
# graphs: densities in graph functions


def graphon_density(f: Graph, spec: GraphonSpec, order: int = QUADRATURE_DEFAULT_ORDER):
    """Edge-product integral of f against the graph function.

    Exact (Fraction) for constant, product and step specs; tensorized
    Gauss-Legendre quadrature with an order-doubling check otherwise.
    """
    if isinstance(spec, ConstantGraphon):
        return Fraction(spec.p) ** f.edge_count
    if isinstance(spec, ProductGraphon):
        out = Fraction(1)
        for d in f.degrees():
            out *= Fraction(1, d + 1)
        return out
    if isinstance(spec, StepGraphon):
        return _step_density(f, spec)
    if isinstance(spec, GridGraphon) and spec.mode == "constant":
        return _block_contraction(f, np.array(spec.values), np.full(spec.m, 1.0 / spec.m))
    if isinstance(spec, (MeanGraphon, GridGraphon)):
        if f.k > QUADRATURE_MAX_VERTICES:
            raise ValueError(f"quadrature capped at {QUADRATURE_MAX_VERTICES} vertices")
        coarse = _quadrature_density(f, spec, order)
        fine = _quadrature_density(f, spec, 2 * order)
        if abs(coarse - fine) > QUADRATURE_RICHARDSON_TOL:
            raise ArithmeticError(
                f"quadrature did not converge: order {order} -> {coarse}, order {2*order} -> {fine}"
            )
        return fine
    raise TypeError(f"unknown graph function spec {spec!r}")


def _step_density(f: Graph, spec: StepGraphon) -> Fraction:
    q = spec.q
    if q**f.k > STEP_ENUM_MAX_ASSIGNMENTS:
        raise ValueError("step-function enumeration too large")
    total = Fraction(0)
    for assignment in itertools.product(range(q), repeat=f.k):
        weight = Fraction(1)
        for block in assignment:
            weight *= spec.masses[block]
        for u, v in f.edges:
            weight *= spec.values[assignment[u - 1]][assignment[v - 1]]
            if not weight:
                break
        total += weight
    return total


def _quadrature_density(f: Graph, spec, order: int) -> float:
    """Tensor contraction over Gauss-Legendre nodes; composite per cell for
    grid specs so kinks at cell boundaries do not spoil convergence."""
    base_nodes, base_weights = np.polynomial.legendre.leggauss(order)
    base_nodes = (base_nodes + 1.0) / 2.0
    base_weights = base_weights / 2.0
    if isinstance(spec, GridGraphon):
        # composite cells aligned to the interpolation patches (kinks at centers)
        m = spec.m
        breaks = np.concatenate(([0.0], (np.arange(m - 1) + 1.0) / m if spec.mode == "constant" else (np.arange(m) + 0.5) / m, [1.0]))
        breaks = np.unique(breaks)
        nodes_list, weights_list = [], []
        for lo, hi in zip(breaks[:-1], breaks[1:]):
            nodes_list.append(lo + (hi - lo) * base_nodes)
            weights_list.append((hi - lo) * base_weights)
        nodes = np.concatenate(nodes_list)
        weights = np.concatenate(weights_list)
    else:
        nodes, weights = base_nodes, base_weights
    gmat = spec.values_at(nodes[:, None], nodes[None, :])
    return _contract_edges(f, gmat, weights)


def _block_contraction(f: Graph, values: np.ndarray, masses: np.ndarray) -> float:
    """Exact integral of a step function as a contraction over its blocks."""
    return _contract_edges(f, values, masses)


def _contract_edges(f: Graph, gmat: np.ndarray, weights: np.ndarray) -> float:
    operands = []
    subscripts = []
    for u, v in f.edges:
        operands.append(gmat)
        subscripts.append(f"{_axis(u)}{_axis(v)}")
    for v in range(1, f.k + 1):
        operands.append(weights)
        subscripts.append(_axis(v))
    return float(np.einsum(",".join(subscripts) + "->", *operands, optimize="greedy"))


def _axis(v: int) -> str:
    return "abcdefghij"[v - 1]


# ---------------------------------------------------------------------------
# permutations: pattern densities


def pattern_density(tau: Permutation, sigma: Permutation) -> Fraction:
    k, n = len(tau), len(sigma)
    if k > n:
        raise ValueError("pattern larger than host")
    return Fraction(occ_fast(tau, sigma), comb(n, k))


def occ_fast(tau: Permutation, sigma: Permutation) -> int:
    """occ() with a kernel fast path for k in {2, 3, 4}."""
    k = len(tau)
    if k in kernels.PROFILE_KS and len(sigma) >= k:
        profile = kernels.pattern_profile(np.array(sigma, dtype=np.int64), k)
        return int(profile[kernels.pattern_index(tau)])
    return occ(tau, sigma)


def f_tau(tau: Permutation, points) -> Fraction:
    """Limit probability that a vanishing perturbation of `points` shows pattern tau.

    Coordinate ties are broken by independent uniform offsets: every x-tie
    group receives a uniform suborder, every y-tie group an independent one.
    On a general configuration this is the plain indicator.
    """
    pts = [(x, y) for x, y in points]
    k = len(pts)
    if len(tau) != k:
        raise ValueError("pattern size must match the number of points")
    if k > F_TAU_MAX:
        raise ValueError(f"tie-break enumeration capped at {F_TAU_MAX} points")
    xgroups = _tie_groups([p[0] for p in pts])
    ygroups = _tie_groups([p[1] for p in pts])
    if all(len(g) == 1 for g in xgroups) and all(len(g) == 1 for g in ygroups):
        return Fraction(1) if conf(pts) == tau else Fraction(0)
    favorable = 0
    total = 0
    for xorder in _group_orders(xgroups):
        for yorder in _group_orders(ygroups):
            total += 1
            sigma = [0] * k
            for pos, i in enumerate(xorder):
                sigma[pos] = yorder.index(i) + 1
            if tuple(sigma) == tau:
                favorable += 1
    return Fraction(favorable, total)


def _tie_groups(coords) -> list[list[int]]:
    groups: dict = {}
    for i, c in enumerate(coords):
        groups.setdefault(c, []).append(i)
    return [groups[c] for c in sorted(groups)]


def _group_orders(groups):
    """All orderings of point indices consistent with the group order."""
    per_group = [itertools.permutations(g) for g in groups]
    for choice in itertools.product(*per_group):
        yield [i for block in choice for i in block]


def permuton_density_of_perm(tau: Permutation, sigma: Permutation) -> Fraction:
    """Exact pattern density of tau in the permuton of sigma.

    The defining n^k-term sum collapses by symmetry: a tuple with repeated
    indices contributes through the pattern of its distinct support only,
    so everything reduces to occurrence counts of patterns of size <= k.
    """
    k, n = len(tau), len(sigma)
    if k == 0:
        return Fraction(1)
    if k > 4:
        raise ValueError("exact permuton densities capped at patterns of size 4")
    total = Fraction(0)
    occ_cache: dict[Permutation, int] = {}
    for part in _set_partitions(k):
        s = len(part)
        if s > n:
            continue
        block_of = [0] * k
        for b, block in enumerate(part):
            for i in block:
                block_of[i] = b
        for beta in itertools.permutations(range(1, s + 1)):
            for small in itertools.permutations(range(1, s + 1)):
                value = f_tau(tau, [(beta[block_of[i]], small[beta[block_of[i]] - 1]) for i in range(k)])
                if not value:
                    continue
                if small not in occ_cache:
                    occ_cache[small] = occ_fast(small, sigma)
                total += value * occ_cache[small]
    return total / Fraction(n**k)


def _set_partitions(k: int):
    """All set partitions of {0..k-1} as tuples of blocks."""
    if k == 0:
        yield ()
        return

    def rec(items):
        if not items:
            yield []
            return
        head, tail = items[0], items[1:]
        for sub in rec(tail):
            for i in range(len(sub)):
                yield sub[:i] + [sub[i] + [head]] + sub[i + 1 :]
            yield [[head]] + sub

    for blocks in rec(list(range(k))):
        yield tuple(tuple(sorted(b)) for b in blocks)


def permuton_density_exact(tau: Permutation, spec: PermutonSpec) -> Fraction:
    """Exact t(tau, pi) for the specs that admit one."""
    k = len(tau)
    if isinstance(spec, UniformPermuton):
        return Fraction(1, factorial(k))
    if isinstance(spec, PermutationPermuton):
        return permuton_density_of_perm(tau, spec.sigma)
    if isinstance(spec, GridPermuton):
        return _grid_permuton_density(tau, spec)
    raise TypeError(f"no exact pattern density for {spec!r}")


def _grid_permuton_density(tau: Permutation, spec: GridPermuton) -> Fraction:
    """Sum over cell multisets: within-cell and within-band ties are uniform."""
    k = len(tau)
    m = spec.m
    cells = [(i, j) for i in range(m) for j in range(m) if spec.masses[i][j]]
    total = Fraction(0)
    for combo in itertools.combinations_with_replacement(range(len(cells)), k):
        counts = Counter(combo)
        weight = Fraction(factorial(k))
        for idx, mult in counts.items():
            weight *= spec.masses[cells[idx][0]][cells[idx][1]] ** mult
            weight /= factorial(mult)
        value = f_tau(tau, [cells[idx] for idx in combo])
        total += weight * value
    return total


def permuton_density(
    tau: Permutation, spec: PermutonSpec, budget: int = 20000, seed: RngSeed | None = None
) -> tuple[float, float]:
    """Monte-Carlo estimate of t(tau, pi) with its binomial standard error."""
    k = len(tau)
    if isinstance(spec, UniformPermuton):
        return 1.0 / factorial(k), 0.0
    rng = (seed or RngSeed(0)).generator()
    hits = 0
    for _ in range(budget):
        x, y = sample_points(spec, k, rng)
        if conf(zip(x.tolist(), y.tolist())) == tau:
            hits += 1
    p = hits / budget
    return p, (p * (1 - p) / budget) ** 0.5


# ---------------------------------------------------------------------------
# partitions


def thoma_moment(k: int, omega: ThomaParameter) -> Fraction:
    return omega.moment(k)


def thoma_moment_rho(rho: Partition, omega: ThomaParameter) -> Fraction:
    return omega.moment_rho(rho)


def partition_observable_on_partition(rho: Partition, lam: Partition) -> Fraction:
    """t(rho, embedded lam) = p_rho(lam)/n^|rho|."""
    n = sum(lam)
    return p_rho(rho, lam) / Fraction(n ** sum(rho))


# ---------------------------------------------------------------------------
# the evaluation morphism


def evaluate(obs, model, *, budget: int = 20000, seed: RngSeed | None = None):
    """Linear extension of the basis evaluations to formal sums.

    The observable family is taken from the model (a tuple like (2, 1) is a
    valid permutation and a valid partition; the model disambiguates).
    Exact (Fraction) whenever every basis evaluation is exact; floats
    appear only through quadrature or Monte-Carlo basis values.
    """
    family = {"graphon": "graph", "permuton": "permutation", "thoma": "partition"}[family_of(model)]
    if isinstance(obs, Observable):
        if obs.family != family:
            raise ValueError(f"{obs.family} observable on a {family_of(model)} model")
        element = obs.element
    elif isinstance(obs, FormalSum):
        element = obs
    else:
        element = FormalSum.single(obs)
    for key, _ in element:
        _check_basis(family, key)
    if family == "graph":
        return element.apply(lambda g: graphon_density(g, model))
    if family == "permutation":
        if isinstance(model, (UniformPermuton, PermutationPermuton, GridPermuton)):
            return element.apply(lambda t: permuton_density_exact(t, model))
        return element.apply(lambda t: permuton_density(t, model, budget=budget, seed=seed)[0])
    return element.apply(lambda r: thoma_moment_rho(r, model))


def _check_basis(family: str, key) -> None:
    if family == "graph":
        if not isinstance(key, Graph):
            raise ValueError(f"graph models evaluate Graph observables, got {key!r}")
        return
    if not isinstance(key, tuple):
        raise ValueError(f"{family} basis objects are tuples, got {key!r}")
    if family == "permutation" and sorted(key) != list(range(1, len(key) + 1)):
        raise ValueError(f"{key!r} is not a permutation in one-line notation")
    if family == "partition" and any(
        key[i] < key[i + 1] for i in range(len(key) - 1)
    ):
        raise ValueError(f"{key!r} is not a weakly decreasing partition")
