"""Labeled finite simple graphs and the junction operations on them.

Graphs are immutable and hashable so they can serve as FormalSum keys.
Vertices are labeled 1..k.  Junctions identify one vertex of each factor
graph; they are the combinatorial core of the limiting covariance and
third-cumulant maps for subgraph counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

Edge = tuple[int, int]

CANONICAL_MAX_VERTICES = 10


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices 1..k with an immutable edge set."""

    k: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("vertex count must be nonnegative")
        for u, v in self.edges:
            if not (1 <= u < v <= self.k):
                raise ValueError(f"edge {(u, v)} invalid for k={self.k} (need 1 <= u < v <= k)")

    @classmethod
    def from_edges(cls, k: int, edges) -> "Graph":
        normalized = frozenset((min(u, v), max(u, v)) for u, v in edges)
        for u, v in normalized:
            if u == v:
                raise ValueError("loops are not allowed")
        return cls(k, normalized)

    @classmethod
    def parse(cls, text: str) -> "Graph":
        """Parse the wire format "k=5; 1-2,2-3" (edge part may be empty)."""
        head, _, tail = text.partition(";")
        head = head.strip()
        if not head.startswith("k="):
            raise ValueError(f"bad graph string {text!r}")
        k = int(head[2:])
        tail = tail.strip()
        edges = []
        if tail:
            for item in tail.split(","):
                u, _, v = item.strip().partition("-")
                edges.append((int(u), int(v)))
        return cls.from_edges(k, edges)

    def format(self) -> str:
        body = ",".join(f"{u}-{v}" for u, v in sorted(self.edges))
        return f"k={self.k}; {body}" if body else f"k={self.k};"

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        degs = [0] * (self.k + 1)
        for u, v in self.edges:
            degs[u] += 1
            degs[v] += 1
        return degs[1:]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for x, y in self.edges:
            if x == v:
                out.add(y)
            elif y == v:
                out.add(x)
        return out

    def adjacency(self) -> np.ndarray:
        mat = np.zeros((self.k, self.k), dtype=bool)
        for u, v in self.edges:
            mat[u - 1, v - 1] = mat[v - 1, u - 1] = True
        return mat

    def relabel(self, mapping: dict[int, int], new_k: int | None = None) -> "Graph":
        k = new_k if new_k is not None else self.k
        return Graph.from_edges(k, ((mapping[u], mapping[v]) for u, v in self.edges))

    def __repr__(self) -> str:
        return f"Graph({self.format()!r})"


def empty_graph(k: int) -> Graph:
    return Graph(k)


def complete_graph(k: int) -> Graph:
    return Graph.from_edges(k, itertools.combinations(range(1, k + 1), 2))


def path_graph(k: int) -> Graph:
    return Graph.from_edges(k, ((i, i + 1) for i in range(1, k)))


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph.from_edges(k, [(i, i + 1) for i in range(1, k)] + [(1, k)])


K2 = complete_graph(2)
K3 = complete_graph(3)
P3 = path_graph(3)


def disjoint_union(f: Graph, g: Graph) -> Graph:
    shifted = ((u + f.k, v + f.k) for u, v in g.edges)
    return Graph.from_edges(f.k + g.k, itertools.chain(f.edges, shifted))


def junction2(f: Graph, g: Graph, a: int, b: int) -> Graph:
    """Identify vertex `a` of `f` with vertex `b` of `g` inside their disjoint union."""
    if not 1 <= a <= f.k:
        raise IndexError(f"vertex {a} out of range for first factor")
    if not 1 <= b <= g.k:
        raise IndexError(f"vertex {b} out of range for second factor")
    gmap = _shift_skipping(g.k, {b: a}, offset=f.k)
    edges = itertools.chain(f.edges, ((gmap[u], gmap[v]) for u, v in g.edges))
    return Graph.from_edges(f.k + g.k - 1, edges)


def junction3_point(f: Graph, g: Graph, h: Graph, a: int, b: int, c: int) -> Graph:
    """Identify a∈f, b∈g and c∈h into one vertex of f ⊔ g ⊔ h."""
    for v, graph, name in ((a, f, "first"), (b, g, "second"), (c, h, "third")):
        if not 1 <= v <= graph.k:
            raise IndexError(f"vertex {v} out of range for {name} factor")
    gmap = _shift_skipping(g.k, {b: a}, offset=f.k)
    hmap = _shift_skipping(h.k, {c: a}, offset=f.k + g.k - 1)
    edges = itertools.chain(
        f.edges,
        ((gmap[u], gmap[v]) for u, v in g.edges),
        ((hmap[u], hmap[v]) for u, v in h.edges),
    )
    return Graph.from_edges(f.k + g.k + h.k - 2, edges)


def junction3_pair(f: Graph, g: Graph, h: Graph, a: int, b: int, c: int, d: int) -> Graph:
    """Identify a∈f with b∈g, and c∈g with d∈h (b ≠ c), in f ⊔ g ⊔ h."""
    if b == c:
        raise ValueError("pair mode needs two distinct vertices of the middle factor")
    for v, graph, name in ((a, f, "first"), (b, g, "second"), (c, g, "second"), (d, h, "third")):
        if not 1 <= v <= graph.k:
            raise IndexError(f"vertex {v} out of range for {name} factor")
    gmap = _shift_skipping(g.k, {b: a}, offset=f.k)
    hmap = _shift_skipping(h.k, {d: gmap[c]}, offset=f.k + g.k - 1)
    edges = itertools.chain(
        f.edges,
        ((gmap[u], gmap[v]) for u, v in g.edges),
        ((hmap[u], hmap[v]) for u, v in h.edges),
    )
    return Graph.from_edges(f.k + g.k + h.k - 2, edges)


def _shift_skipping(k: int, glued: dict[int, int], offset: int) -> dict[int, int]:
    """Relabel 1..k by shifting past `offset`, sending glued vertices to their targets."""
    mapping = {}
    next_label = offset + 1
    for v in range(1, k + 1):
        if v in glued:
            mapping[v] = glued[v]
        else:
            mapping[v] = next_label
            next_label += 1
    return mapping


def _pair_rank(u: int, v: int, k: int) -> int:
    """Lexicographic rank of the pair (u, v), u < v, among all pairs of 1..k."""
    return (u - 1) * k - (u - 1) * u // 2 + (v - u - 1)


def _edge_mask(edges, k: int, perm: tuple[int, ...]) -> int:
    npairs = k * (k - 1) // 2
    mask = 0
    for u, v in edges:
        pu, pv = perm[u - 1], perm[v - 1]
        if pu > pv:
            pu, pv = pv, pu
        mask |= 1 << (npairs - 1 - _pair_rank(pu, pv, k))
    return mask


def _mask_to_graph(mask: int, k: int) -> Graph:
    npairs = k * (k - 1) // 2
    edges = []
    rank = 0
    for u in range(1, k + 1):
        for v in range(u + 1, k + 1):
            if mask >> (npairs - 1 - rank) & 1:
                edges.append((u, v))
            rank += 1
    return Graph.from_edges(k, edges)


@lru_cache(maxsize=65536)
def canonical(g: Graph) -> Graph:
    """Canonical representative of the isomorphism class of `g`.

    Brute force over all vertex relabelings; the winner is the relabeling
    whose sorted edge list is lexicographically least (computed as the max
    of an edge-indicator bitmask, which is the same order at fixed edge
    count).  Capped at 10 vertices.
    """
    k = g.k
    if k > CANONICAL_MAX_VERTICES:
        raise ValueError(f"canonical labeling capped at {CANONICAL_MAX_VERTICES} vertices, got {k}")
    if k <= 1 or not g.edges:
        return g
    if k <= 7:
        best = max(_edge_mask(g.edges, k, perm) for perm in itertools.permutations(range(1, k + 1)))
        return _mask_to_graph(best, k)
    return _canonical_batched(g)


def _canonical_batched(g: Graph) -> Graph:
    k = g.k
    npairs = k * (k - 1) // 2
    perms = np.array(list(itertools.permutations(range(k))), dtype=np.int8)
    rank = np.zeros((k, k), dtype=np.int64)
    for u in range(1, k + 1):
        for v in range(u + 1, k + 1):
            rank[u - 1, v - 1] = rank[v - 1, u - 1] = _pair_rank(u, v, k)
    masks = np.zeros(len(perms), dtype=np.int64)
    for u, v in g.edges:
        pu = perms[:, u - 1].astype(np.int64)
        pv = perms[:, v - 1].astype(np.int64)
        masks |= np.int64(1) << (npairs - 1 - rank[pu, pv])
    return _mask_to_graph(int(masks.max()), k)


def are_isomorphic(f: Graph, g: Graph) -> bool:
    if f.k != g.k or f.edge_count != g.edge_count:
        return False
    return canonical(f) == canonical(g)
