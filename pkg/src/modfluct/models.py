"""Parameter spaces and samplers for the three families of random models.

Each family is parametrized by a point of a compact space: symmetric
[0,1]-valued functions on the square for random graphs, measures on the
square with uniform marginals for random permutations, and pairs of
decreasing sequences with total mass <= 1 for random partitions.  Samplers
are pure functions of (spec, n, seed); replicates parallelize by stream id.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import pi

import numpy as np

from . import kernels
from .combinatorics.graphs import Graph
from .combinatorics.partitions import (
    Partition,
    hook_dimension,
    mn_character,
    partitions_of,
    size as partition_size,
    validate as validate_partition,
    z_order,
)
from .combinatorics.perms import Permutation, conf, validate as validate_perm
from .combinatorics import partitions as _partitions

EXACT_MEASURE_MAX_N = 10


@dataclass(frozen=True)
class RngSeed:
    """Philox (counter-based) RNG key: same (seed, stream) replays the same draws."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=[self.seed % 2**64, self.stream % 2**64]))

    def with_stream(self, stream: int) -> "RngSeed":
        return RngSeed(self.seed, stream)


def _as_fraction_grid(values) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in values)


# ---------------------------------------------------------------------------
# graph functions


@dataclass(frozen=True)
class ConstantGraphon:
    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if not 0 <= self.p <= 1:
            raise ValueError("edge probability must lie in [0,1]")

    def values_at(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.full(np.broadcast(x, y).shape, float(self.p))


@dataclass(frozen=True)
class StepGraphon:
    """Piecewise-constant symmetric function: block b has width masses[b]."""

    masses: tuple[Fraction, ...]
    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        masses = tuple(Fraction(m) for m in self.masses)
        values = _as_fraction_grid(self.values)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "values", values)
        q = len(masses)
        if any(m <= 0 for m in masses):
            raise ValueError("block masses must be positive")
        if sum(masses) != 1:
            raise ValueError("block masses must sum to 1")
        if len(values) != q or any(len(row) != q for row in values):
            raise ValueError("value matrix must be q x q")
        for i in range(q):
            for j in range(q):
                if values[i][j] != values[j][i]:
                    raise ValueError("value matrix must be symmetric")
                if not 0 <= values[i][j] <= 1:
                    raise ValueError("values must lie in [0,1]")

    @property
    def q(self) -> int:
        return len(self.masses)

    def block_of(self, x: np.ndarray) -> np.ndarray:
        bounds = np.cumsum([float(m) for m in self.masses])[:-1]
        return np.searchsorted(bounds, x, side="right")

    def values_at(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        vals = np.array([[float(v) for v in row] for row in self.values])
        return vals[self.block_of(np.asarray(x)), self.block_of(np.asarray(y))]


@dataclass(frozen=True)
class ProductGraphon:
    """g(x, y) = x*y."""

    def values_at(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.asarray(x) * np.asarray(y)


@dataclass(frozen=True)
class MeanGraphon:
    """g(x, y) = (x + y)/2."""

    def values_at(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (np.asarray(x) + np.asarray(y)) / 2.0


@dataclass(frozen=True)
class GridGraphon:
    """Symmetric m x m sample of a graph function on the unit square.

    mode "constant": piecewise constant on cells; mode "bilinear": the
    samples sit at cell centers and are interpolated bilinearly.
    """

    values: tuple[tuple[float, ...], ...]
    mode: str = "bilinear"

    def __post_init__(self):
        values = tuple(tuple(float(v) for v in row) for row in self.values)
        object.__setattr__(self, "values", values)
        m = len(values)
        if self.mode not in ("bilinear", "constant"):
            raise ValueError("mode must be 'bilinear' or 'constant'")
        if any(len(row) != m for row in values):
            raise ValueError("value grid must be square")
        arr = np.array(values)
        if not np.allclose(arr, arr.T):
            raise ValueError("value grid must be symmetric")
        if arr.min() < 0 or arr.max() > 1:
            raise ValueError("values must lie in [0,1]")

    @property
    def m(self) -> int:
        return len(self.values)

    def values_at(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        arr = np.array(self.values)
        m = self.m
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.mode == "constant":
            i = np.clip((x * m).astype(int), 0, m - 1)
            j = np.clip((y * m).astype(int), 0, m - 1)
            return arr[i, j]
        # bilinear between cell centers (clamped at the boundary)
        gx = np.clip(x * m - 0.5, 0.0, m - 1.0)
        gy = np.clip(y * m - 0.5, 0.0, m - 1.0)
        i0 = np.clip(np.floor(gx).astype(int), 0, m - 2) if m > 1 else np.zeros_like(gx, dtype=int)
        j0 = np.clip(np.floor(gy).astype(int), 0, m - 2) if m > 1 else np.zeros_like(gy, dtype=int)
        if m == 1:
            return np.broadcast_to(arr[0, 0], np.broadcast(x, y).shape).copy()
        tx = gx - i0
        ty = gy - j0
        return (
            arr[i0, j0] * (1 - tx) * (1 - ty)
            + arr[i0 + 1, j0] * tx * (1 - ty)
            + arr[i0, j0 + 1] * (1 - tx) * ty
            + arr[i0 + 1, j0 + 1] * tx * ty
        )


GraphonSpec = ConstantGraphon | StepGraphon | ProductGraphon | MeanGraphon | GridGraphon


def sample_adjacency(spec: GraphonSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Boolean adjacency matrix of one random graph draw."""
    if n < 1:
        raise ValueError("need n >= 1")
    x = rng.random(n)
    probs = spec.values_at(x[:, None], x[None, :])
    iu = np.triu_indices(n, k=1)
    u = rng.random(len(iu[0]))
    adj = np.zeros((n, n), dtype=bool)
    adj[iu] = u < probs[iu]
    adj |= adj.T
    return adj


def sample_graph(spec: GraphonSpec, n: int, seed: RngSeed) -> Graph:
    adj = sample_adjacency(spec, n, seed.generator())
    iu = np.triu_indices(n, k=1)
    edges = [(int(i) + 1, int(j) + 1) for i, j in zip(*iu) if adj[i, j]]
    return Graph.from_edges(n, edges)


# ---------------------------------------------------------------------------
# permutons


@dataclass(frozen=True)
class UniformPermuton:
    pass


@dataclass(frozen=True)
class PermutationPermuton:
    """The measure with density n * 1[sigma(ceil(nx)) = ceil(ny)]."""

    sigma: Permutation

    def __post_init__(self):
        object.__setattr__(self, "sigma", validate_perm(self.sigma))


@dataclass(frozen=True)
class GridPermuton:
    """Cell masses on an m x m grid; every row and column must weigh 1/m."""

    masses: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        masses = _as_fraction_grid(self.masses)
        object.__setattr__(self, "masses", masses)
        m = len(masses)
        if any(len(row) != m for row in masses):
            raise ValueError("mass grid must be square")
        if any(v < 0 for row in masses for v in row):
            raise ValueError("masses must be nonnegative")
        target = Fraction(1, m)
        for i in range(m):
            if sum(masses[i]) != target:
                raise ValueError(f"row {i} mass {sum(masses[i])} != 1/{m}")
            if sum(row[i] for row in masses) != target:
                raise ValueError(f"column {i} mass != 1/{m}")

    @property
    def m(self) -> int:
        return len(self.masses)


@dataclass(frozen=True)
class DiscPermuton:
    """Supported on the disc inscribed in the square, density prop. to
    1/sqrt(1-4r^2); its marginals are uniform."""


PermutonSpec = UniformPermuton | PermutationPermuton | GridPermuton | DiscPermuton


def sample_points(spec: PermutonSpec, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """n i.i.d. points of the permuton measure (general configuration a.s.)."""
    if isinstance(spec, UniformPermuton):
        return rng.random(n), rng.random(n)
    if isinstance(spec, PermutationPermuton):
        m = len(spec.sigma)
        cells = rng.integers(0, m, size=n)
        x = (cells + rng.random(n)) / m
        y = (np.array([spec.sigma[c] - 1 for c in cells]) + rng.random(n)) / m
        return x, y
    if isinstance(spec, GridPermuton):
        m = spec.m
        flat = np.array([float(v) for row in spec.masses for v in row])
        idx = rng.choice(m * m, size=n, p=flat / flat.sum())
        rows, cols = idx // m, idx % m
        x = (rows + rng.random(n)) / m
        y = (cols + rng.random(n)) / m
        return x, y
    if isinstance(spec, DiscPermuton):
        w = rng.random(n)
        radius = 0.5 * np.sqrt(1.0 - (1.0 - w) ** 2)
        theta = rng.random(n) * 2 * pi
        return 0.5 + radius * np.cos(theta), 0.5 + radius * np.sin(theta)
    raise TypeError(f"unknown permuton spec {spec!r}")


def sample_permutation(spec: PermutonSpec, n: int, seed: RngSeed) -> Permutation:
    if n < 1:
        raise ValueError("need n >= 1")
    rng = seed.generator()
    if isinstance(spec, UniformPermuton):
        return tuple(int(v) + 1 for v in rng.permutation(n))
    x, y = sample_points(spec, n, rng)
    return conf(zip(x.tolist(), y.tolist()))


# ---------------------------------------------------------------------------
# Thoma parameters and central measures


@dataclass(frozen=True)
class ThomaParameter:
    alpha: tuple[Fraction, ...] = ()
    beta: tuple[Fraction, ...] = ()

    def __post_init__(self):
        alpha = tuple(Fraction(a) for a in self.alpha)
        beta = tuple(Fraction(b) for b in self.beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        for seq in (alpha, beta):
            if any(v < 0 for v in seq):
                raise ValueError("entries must be nonnegative")
            if any(seq[i] < seq[i + 1] for i in range(len(seq) - 1)):
                raise ValueError("entries must be weakly decreasing")
        if sum(alpha) + sum(beta) > 1:
            raise ValueError("total mass must be at most 1")

    @property
    def gamma_mass(self) -> Fraction:
        return 1 - sum(self.alpha, Fraction(0)) - sum(self.beta, Fraction(0))

    def moment(self, k: int) -> Fraction:
        """Frobenius moment: sum alpha^k + (-1)^(k-1) sum beta^k, with value 1 at k=1."""
        if k < 1:
            raise ValueError("moment order must be >= 1")
        if k == 1:
            return Fraction(1)
        sign = (-1) ** (k - 1)
        return sum((a**k for a in self.alpha), Fraction(0)) + sign * sum(
            (b**k for b in self.beta), Fraction(0)
        )

    def moment_rho(self, rho: Partition) -> Fraction:
        out = Fraction(1)
        for part in rho:
            out *= self.moment(part)
        return out


PLANCHEREL = ThomaParameter((), ())


def sample_letters(omega: ThomaParameter, n: int, rng: np.random.Generator) -> tuple[np.ndarray, float]:
    """Encode n i.i.d. Thoma-alphabet letters as floats, plus the weak/strict cutoff.

    Ordinary letters are 1..len(alpha), primed letters follow, continuous
    letters sit above both with fresh uniform offsets.
    """
    na, nb = len(omega.alpha), len(omega.beta)
    probs = [float(a) for a in omega.alpha] + [float(b) for b in omega.beta] + [float(omega.gamma_mass)]
    probs = np.array(probs)
    probs = probs / probs.sum()
    choices = rng.choice(na + nb + 1, size=n, p=probs)
    letters = np.empty(n, dtype=np.float64)
    discrete = choices < na + nb
    letters[discrete] = choices[discrete] + 1.0
    cont = ~discrete
    n_cont = int(cont.sum())
    if n_cont:
        offsets = rng.random(n_cont)
        if len(np.unique(offsets)) != n_cont:
            raise RuntimeError("continuous letter collision; resample with a new stream")
        letters[cont] = na + nb + 1.0 + offsets
    return letters, na + 0.5


def sample_partition(omega: ThomaParameter, n: int, seed: RngSeed) -> Partition:
    """One draw of the size-n central measure, via insertion of a random word."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = seed.generator()
    letters, cutoff = sample_letters(omega, n, rng)
    rows = kernels.rsk_row_lengths(letters, cutoff)
    return tuple(int(r) for r in rows)


def sample_partition_counts(
    omega: ThomaParameter, n: int, reps: int, seed: RngSeed, chunk: int = 10000
) -> dict[Partition, int]:
    """Histogram of `reps` central-measure draws, chunked by stream id."""
    counts: dict[Partition, int] = {}
    for c in range((reps + chunk - 1) // chunk):
        count = min(chunk, reps - c * chunk)
        rng = seed.with_stream(seed.stream + c).generator()
        for _ in range(count):
            letters, cutoff = sample_letters(omega, n, rng)
            lam = tuple(int(r) for r in kernels.rsk_row_lengths(letters, cutoff))
            counts[lam] = counts.get(lam, 0) + 1
    return counts


def schur_value(lam: Partition, omega: ThomaParameter) -> Fraction:
    """Specialization of the Schur function at omega via the power-sum expansion."""
    n = partition_size(lam)
    total = Fraction(0)
    for rho in partitions_of(n):
        total += Fraction(mn_character(lam, rho), z_order(rho)) * omega.moment_rho(rho)
    return total


def exact_central_measure(omega: ThomaParameter, n: int) -> dict[Partition, Fraction]:
    """Exact law of the size-n random partition: dim(lam) * s_lam(omega)."""
    if n > EXACT_MEASURE_MAX_N:
        raise ValueError(f"exact central measure capped at n={EXACT_MEASURE_MAX_N}")
    out: dict[Partition, Fraction] = {}
    for lam in partitions_of(n):
        out[lam] = hook_dimension(lam) * schur_value(lam, omega)
    total = sum(out.values(), Fraction(0))
    if total != 1:
        raise AssertionError(f"central measure mass {total} != 1")
    if any(p < 0 for p in out.values()):
        raise AssertionError("central measure has a negative weight")
    return out


# ---------------------------------------------------------------------------
# embeddings of finite objects


def embed_graph(g: Graph) -> StepGraphon:
    q = g.k
    masses = tuple(Fraction(1, q) for _ in range(q))
    values = tuple(
        tuple(Fraction(1) if g.has_edge(i, j) else Fraction(0) for j in range(1, q + 1))
        for i in range(1, q + 1)
    )
    return StepGraphon(masses, values)


def embed_permutation(sigma: Permutation) -> GridPermuton:
    n = len(sigma)
    masses = tuple(
        tuple(Fraction(1, n) if sigma[i] == j + 1 else Fraction(0) for j in range(n)) for i in range(n)
    )
    return GridPermuton(masses)


def embed_partition(lam: Partition) -> ThomaParameter:
    lam = validate_partition(lam)
    n = partition_size(lam)
    a, b = _partitions.frobenius_coords(lam)
    return ThomaParameter(tuple(x / n for x in a), tuple(x / n for x in b))


# ---------------------------------------------------------------------------
# JSON wire formats


def model_to_json(spec) -> dict:
    if isinstance(spec, ConstantGraphon):
        return {"family": "graphon", "variant": "constant", "p": str(spec.p)}
    if isinstance(spec, StepGraphon):
        return {
            "family": "graphon",
            "variant": "step",
            "masses": [str(m) for m in spec.masses],
            "values": [[str(v) for v in row] for row in spec.values],
        }
    if isinstance(spec, ProductGraphon):
        return {"family": "graphon", "variant": "product"}
    if isinstance(spec, MeanGraphon):
        return {"family": "graphon", "variant": "mean"}
    if isinstance(spec, GridGraphon):
        return {"family": "graphon", "variant": "grid", "values": [list(r) for r in spec.values], "mode": spec.mode}
    if isinstance(spec, UniformPermuton):
        return {"family": "permuton", "variant": "uniform"}
    if isinstance(spec, PermutationPermuton):
        return {"family": "permuton", "variant": "from-permutation", "sigma": list(spec.sigma)}
    if isinstance(spec, GridPermuton):
        return {"family": "permuton", "variant": "grid", "masses": [[str(v) for v in row] for row in spec.masses]}
    if isinstance(spec, DiscPermuton):
        return {"family": "permuton", "variant": "disc"}
    if isinstance(spec, ThomaParameter):
        return {"family": "thoma", "alpha": [str(a) for a in spec.alpha], "beta": [str(b) for b in spec.beta]}
    raise TypeError(f"not a model spec: {spec!r}")


def model_from_json(doc: dict):
    family = doc.get("family")
    if family == "graphon":
        variant = doc.get("variant")
        if variant == "constant":
            return ConstantGraphon(Fraction(doc["p"]))
        if variant == "step":
            return StepGraphon(
                tuple(Fraction(m) for m in doc["masses"]),
                tuple(tuple(Fraction(v) for v in row) for row in doc["values"]),
            )
        if variant == "product":
            return ProductGraphon()
        if variant == "mean":
            return MeanGraphon()
        if variant == "grid":
            return GridGraphon(tuple(tuple(row) for row in doc["values"]), doc.get("mode", "bilinear"))
    if family == "permuton":
        variant = doc.get("variant")
        if variant == "uniform":
            return UniformPermuton()
        if variant == "from-permutation":
            return PermutationPermuton(tuple(doc["sigma"]))
        if variant == "grid":
            return GridPermuton(tuple(tuple(Fraction(v) for v in row) for row in doc["masses"]))
        if variant == "disc":
            return DiscPermuton()
    if family == "thoma":
        return ThomaParameter(
            tuple(Fraction(a) for a in doc.get("alpha", [])),
            tuple(Fraction(b) for b in doc.get("beta", [])),
        )
    raise ValueError(f"unrecognized model document: {doc!r}")


def family_of(spec) -> str:
    if isinstance(spec, (ConstantGraphon, StepGraphon, ProductGraphon, MeanGraphon, GridGraphon)):
        return "graphon"
    if isinstance(spec, (UniformPermuton, PermutationPermuton, GridPermuton, DiscPermuton)):
        return "permuton"
    if isinstance(spec, ThomaParameter):
        return "thoma"
    raise TypeError(f"not a model spec: {spec!r}")
