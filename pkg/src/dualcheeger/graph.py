"""Weighted graphs, set functionals and deterministic generators.

Vertex sets are passed around as plain iterables of integer vertex ids and
stored as ``frozenset`` inside witness containers.  All functionals sum in
edge input order so that repeated evaluation is bit-identical.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DomainError

__all__ = [
    "WeightedGraph",
    "Subpartition",
    "SubBipartition",
    "volume",
    "boundary_measure",
    "internal_weight",
    "expansion",
    "dual_expansion",
    "dominant_bipartition",
    "contract_edge",
    "disjoint_union",
    "generate",
    "GENERATOR_KINDS",
]


class WeightedGraph:
    """Undirected, loop-free graph with positive edge weights.

    Parameters
    ----------
    n : int
        Number of vertices, labelled ``0..n-1``.
    edges : iterable of (u, v) or (u, v, w)
        Edge list; a missing weight means 1.
    allow_isolated : bool
        Permit vertices of degree zero.  Only auxiliary constructions
        (the signed duplication graph) need this.
    """

    def __init__(self, n: int, edges: Iterable[Sequence], *, allow_isolated: bool = False):
        n = int(n)
        if n < 1:
            raise DomainError("a graph needs at least one vertex")
        clean = []
        seen = set()
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            elif len(e) == 3:
                u, v, w = e
            else:
                raise DomainError(f"bad edge {e!r}")
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (w > 0.0) or not np.isfinite(w):
                raise DomainError(f"edge ({u}, {v}) has non-positive weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DomainError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            clean.append((u, v, w))
        self.n = n
        self.edges = tuple(clean)

        deg = [0.0] * n
        for u, v, w in self.edges:
            deg[u] += w
            deg[v] += w
        self.degrees = np.array(deg)
        if not allow_isolated and np.any(self.degrees <= 0.0):
            iso = int(np.flatnonzero(self.degrees <= 0.0)[0])
            raise DomainError(f"vertex {iso} is isolated")
        self.total_volume = float(sum(deg))

        adj = np.zeros((n, n))
        for u, v, w in self.edges:
            adj[u, v] = w
            adj[v, u] = w
        adj.setflags(write=False)
        self.degrees.setflags(write=False)
        self._adj = adj

    @property
    def adjacency(self) -> np.ndarray:
        """Dense symmetric weight matrix (read-only)."""
        return self._adj

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def mask(self, s: Iterable[int]) -> np.ndarray:
        """Boolean membership vector of a vertex set."""
        m = np.zeros(self.n, dtype=bool)
        for v in s:
            v = int(v)
            if not 0 <= v < self.n:
                raise DomainError(f"vertex {v} out of range for n={self.n}")
            m[v] = True
        return m

    def complement(self, s: Iterable[int]) -> frozenset:
        return frozenset(np.flatnonzero(~self.mask(s)).tolist())

    def neighbors(self, u: int) -> np.ndarray:
        return np.flatnonzero(self._adj[u])

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def components(self) -> list:
        """Connected components as sorted vertex lists, ordered by smallest vertex."""
        seen = np.zeros(self.n, dtype=bool)
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            queue = deque([s])
            comp = []
            while queue:
                u = queue.popleft()
                comp.append(u)
                for v in self.neighbors(u):
                    if not seen[v]:
                        seen[v] = True
                        queue.append(int(v))
            comps.append(sorted(comp))
        return comps

    def is_bipartite(self) -> bool:
        color = -np.ones(self.n, dtype=int)
        for s in range(self.n):
            if color[s] >= 0:
                continue
            color[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self.neighbors(u):
                    if color[v] < 0:
                        color[v] = 1 - color[u]
                        queue.append(int(v))
                    elif color[v] == color[u]:
                        return False
        return True

    def edge_weight(self, u: int, v: int) -> float:
        return float(self._adj[u, v])

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class Subpartition:
    """``k`` non-empty, pairwise disjoint vertex sets."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(frozenset(int(v) for v in p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        seen = set()
        for p in parts:
            if not p:
                raise DomainError("subpartition parts must be non-empty")
            if seen & p:
                raise DomainError("subpartition parts must be disjoint")
            seen |= p

    @property
    def k(self) -> int:
        return len(self.parts)

    def as_lists(self):
        return [sorted(p) for p in self.parts]


@dataclass(frozen=True)
class SubBipartition:
    """``k`` disjoint pairs ``(V_odd, V_even)`` with non-empty unions.

    ``residual`` is everything not covered by a pair; it is derived from
    ``n`` and never supplied by the caller.
    """

    n: int
    pairs: tuple
    residual: frozenset = field(init=False)

    def __post_init__(self):
        pairs = tuple((frozenset(int(v) for v in a), frozenset(int(v) for v in b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        seen = set()
        for a, b in pairs:
            if not (a or b):
                raise DomainError("each pair needs a non-empty union")
            for side in (a, b):
                if seen & side:
                    raise DomainError("all 2k sets must be pairwise disjoint")
                if any(not 0 <= v < self.n for v in side):
                    raise DomainError("vertex out of range")
                seen |= side
        object.__setattr__(self, "residual", frozenset(range(self.n)) - seen)

    @property
    def k(self) -> int:
        return len(self.pairs)

    def unions(self):
        return [a | b for a, b in self.pairs]

    def labels(self) -> np.ndarray:
        """Label vector: 0 for the residual, ``2i+1``/``2i+2`` for pair ``i``."""
        lab = np.zeros(self.n, dtype=int)
        for i, (a, b) in enumerate(self.pairs):
            lab[list(a)] = 2 * i + 1
            lab[list(b)] = 2 * i + 2
        return lab

    def as_lists(self):
        return [[sorted(a), sorted(b)] for a, b in self.pairs]


# ---------------------------------------------------------------- functionals


def volume(g: WeightedGraph, s: Iterable[int]) -> float:
    m = g.mask(s)
    total = 0.0
    for u in range(g.n):
        if m[u]:
            total += g.degrees[u]
    return float(total)


def boundary_measure(g: WeightedGraph, a: Iterable[int], b: Iterable[int]) -> float:
    """Weight of edges running between ``a`` and ``b``.

    An edge counts once if either orientation has its tail in ``a`` and its
    head in ``b``; with ``a == b`` this is the internal weight of the set,
    so that ``vol(S) = 2|E(S,S)| + |E(S, complement)|``.
    """
    ma, mb = g.mask(a), g.mask(b)
    total = 0.0
    for u, v, w in g.edges:
        if (ma[u] and mb[v]) or (ma[v] and mb[u]):
            total += w
    return float(total)


def internal_weight(g: WeightedGraph, s: Iterable[int]) -> float:
    s = list(s)
    return boundary_measure(g, s, s)


def expansion(g: WeightedGraph, s: Iterable[int]) -> float:
    s = frozenset(s)
    if not s:
        raise DomainError("expansion of the empty set is undefined")
    # separate summations can overshoot 1 by an ulp when s has no inner edges
    return min(1.0, boundary_measure(g, s, g.complement(s)) / volume(g, s))


def dual_expansion(g: WeightedGraph, v1: Iterable[int], v2: Iterable[int]) -> float:
    v1, v2 = frozenset(v1), frozenset(v2)
    if v1 & v2:
        raise DomainError("the two sides of a pair must be disjoint")
    if not (v1 or v2):
        raise DomainError("a pair needs a non-empty union")
    return min(1.0, 2.0 * boundary_measure(g, v1, v2) / volume(g, v1 | v2))


def dominant_bipartition(g: WeightedGraph, s: Iterable[int]):
    """Split ``s`` so that the cut weight dominates both internal weights.

    Local search from the all-in-first-side split: a vertex switches sides
    when its same-side weight inside ``s`` strictly exceeds its cross weight.
    Every switch strictly increases the cut, so the loop terminates.
    """
    members = sorted(frozenset(int(v) for v in s))
    if not members:
        raise DomainError("cannot bipartition the empty set")
    side = {v: 0 for v in members}
    A = g.adjacency
    moved = True
    while moved:
        moved = False
        for v in members:
            same = cross = 0.0
            for u in members:
                if u == v or A[v, u] == 0.0:
                    continue
                if side[u] == side[v]:
                    same += A[v, u]
                else:
                    cross += A[v, u]
            if same > cross:
                side[v] = 1 - side[v]
                moved = True
    v1 = frozenset(v for v in members if side[v] == 0)
    v2 = frozenset(v for v in members if side[v] == 1)
    return v1, v2


def contract_edge(g: WeightedGraph, u: int, v: int) -> WeightedGraph:
    """Identify the endpoints of edge ``{u, v}``.

    The merged vertex keeps the smaller id, higher ids shift down by one,
    the contracted edge disappears and parallel edges add their weights.
    """
    u, v = int(u), int(v)
    if not (0 <= u < g.n and 0 <= v < g.n) or u == v or g.adjacency[u, v] == 0.0:
        raise DomainError(f"({u}, {v}) is not an edge")
    keep, drop = min(u, v), max(u, v)

    def relabel(x):
        if x == drop:
            x = keep
        return x - 1 if x > drop else x

    merged: dict = {}
    for a, b, w in g.edges:
        if {a, b} == {u, v}:
            continue
        a2, b2 = relabel(a), relabel(b)
        key = (min(a2, b2), max(a2, b2))
        merged[key] = merged.get(key, 0.0) + w
    return WeightedGraph(g.n - 1, [(a, b, w) for (a, b), w in merged.items()])


def disjoint_union(*graphs: WeightedGraph) -> WeightedGraph:
    edges = []
    offset = 0
    for h in graphs:
        edges.extend((a + offset, b + offset, w) for a, b, w in h.edges)
        offset += h.n
    return WeightedGraph(offset, edges)


# ----------------------------------------------------------------- generators

GENERATOR_KINDS = (
    "cycle",
    "path",
    "complete",
    "complete_bipartite",
    "hypercube",
    "random_connected_weighted",
    "random_tree",
)


def _need(cond, msg):
    if not cond:
        raise DomainError(msg)


def generate(kind: str, params: Sequence = (), seed: int = 0) -> WeightedGraph:
    """Build a graph from one of the named families.

    ``params`` are positional: ``cycle N``, ``path N``, ``complete N``,
    ``complete_bipartite a b``, ``hypercube d``,
    ``random_connected_weighted N density wmin wmax`` and ``random_tree N``.
    Random families draw from ``numpy.random.default_rng(seed)``.
    """
    params = list(params)
    if kind == "cycle":
        (n,) = _ints(params, 1)
        _need(n >= 3, "a cycle needs N >= 3")
        return WeightedGraph(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "path":
        (n,) = _ints(params, 1)
        _need(n >= 2, "a path needs N >= 2")
        return WeightedGraph(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "complete":
        (n,) = _ints(params, 1)
        _need(n >= 2, "a complete graph needs N >= 2")
        return WeightedGraph(n, list(combinations(range(n), 2)))
    if kind == "complete_bipartite":
        a, b = _ints(params, 2)
        _need(a >= 1 and b >= 1, "both sides must be non-empty")
        return WeightedGraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    if kind == "hypercube":
        (d,) = _ints(params, 1)
        _need(d >= 1, "hypercube dimension must be >= 1")
        n = 1 << d
        return WeightedGraph(n, [(x, x ^ (1 << b)) for x in range(n) for b in range(d) if x < x ^ (1 << b)])
    if kind == "random_connected_weighted":
        _need(len(params) >= 1, "random_connected_weighted needs N")
        n = int(params[0])
        density = float(params[1]) if len(params) > 1 else 0.5
        wmin = float(params[2]) if len(params) > 2 else 0.1
        wmax = float(params[3]) if len(params) > 3 else 10.0
        _need(n >= 2, "random_connected_weighted needs N >= 2")
        _need(0.0 < density <= 1.0, "density must lie in (0, 1]")
        _need(0.0 < wmin <= wmax, "need 0 < wmin <= wmax")
        rng = np.random.default_rng(seed)
        pairs = list(combinations(range(n), 2))
        while True:
            keep = rng.random(len(pairs)) < density
            weights = rng.uniform(wmin, wmax, len(pairs))
            edges = [(u, v, float(w)) for (u, v), k, w in zip(pairs, keep, weights) if k]
            if _connected(n, edges):
                return WeightedGraph(n, edges)
    if kind == "random_tree":
        (n,) = _ints(params, 1)
        _need(n >= 2, "a tree needs N >= 2")
        rng = np.random.default_rng(seed)
        return WeightedGraph(n, [(int(rng.integers(0, v)), v) for v in range(1, n)])
    raise DomainError(f"unknown graph kind {kind!r}")


def _ints(params, count):
    if len(params) != count:
        raise DomainError(f"expected {count} integer parameter(s), got {len(params)}")
    try:
        out = [int(p) for p in params]
    except (TypeError, ValueError) as exc:
        raise DomainError(f"bad integer parameter in {params!r}") from exc
    _need(all(p >= 1 for p in out), "N < 1")
    return out


def _connected(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in edges:
        parent[find(u)] = find(v)
    return len({find(x) for x in range(n)}) == 1
