"""Threshold sweep cuts and the dual sweep through a signed duplication graph."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .graph import WeightedGraph, dual_expansion, expansion
from .spectral import dual_rayleigh, rayleigh

__all__ = [
    "SignedDuplicationGraph",
    "build_duplication",
    "cheeger_sweep",
    "dual_sweep",
    "sweep_bound",
    "GUARANTEE_TOL",
]

GUARANTEE_TOL = 1e-9


def sweep_bound(q: float) -> float:
    """``sqrt(q (2 - q))`` for a quotient ``q <= 1``; ``inf`` otherwise (no guarantee)."""
    if q > 1.0:
        return math.inf
    return math.sqrt(max(q * (2.0 - q), 0.0))


def _as_function(g, f):
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n,):
        raise DomainError(f"function must have shape ({g.n},), got {f.shape}")
    if not np.all(np.isfinite(f)):
        raise DomainError("function values must be finite")
    if not np.any(f != 0.0):
        raise DomainError("function is identically zero")
    return f


def cheeger_sweep(g: WeightedGraph, h):
    """Best threshold set ``{v : h(v)^2 > t}`` over the distinct values of ``h^2``.

    Parameters
    ----------
    g : WeightedGraph
    h : array of shape (n,), nonnegative and not identically zero

    Returns
    -------
    (frozenset, float)
        The threshold set of least expansion (the smallest one on ties) and
        its expansion.

    Raises
    ------
    RuntimeError
        If ``R(h) <= 1`` and the set found is worse than ``sqrt(R (2 - R))``.
    """
    h = _as_function(g, h)
    if np.any(h < 0):
        raise DomainError("sweep function must be nonnegative")
    sq = h * h
    order = np.argsort(-sq, kind="stable")
    levels = np.unique(sq[sq > 0])[::-1]
    A = g.adjacency
    d = g.degrees
    inside = np.zeros(g.n, dtype=bool)
    vol = 0.0
    internal = 0.0
    best, best_size, pos = math.inf, 0, 0
    for level in levels:
        end = pos
        while end < g.n and sq[order[end]] >= level:
            end += 1
        block = order[pos:end]
        internal += 2.0 * A[np.ix_(block, np.flatnonzero(inside))].sum() + A[np.ix_(block, block)].sum()
        inside[block] = True
        vol += d[block].sum()
        phi = (vol - internal) / vol if vol > 0 else math.inf
        if phi < best:
            best, best_size = phi, end
        pos = end
    s = frozenset(int(v) for v in order[:best_size])
    phi = expansion(g, s)
    R = rayleigh(g, h)
    if phi > sweep_bound(R) + GUARANTEE_TOL:
        raise RuntimeError(f"sweep guarantee violated: phi={phi!r}, R={R!r}")
    return s, phi


@dataclass(frozen=True)
class SignedDuplicationGraph:
    """Graph in which every edge joining two vertices of the same sign is
    replaced by two edges to the duplicates of its endpoints.

    Vertices ``0..n-1`` are the base vertices; ``n + i`` is the duplicate of
    ``origin[n + i]``.  ``sign[v]`` is +1, -1 or 0 for base vertices.
    """

    base: WeightedGraph
    lifted: WeightedGraph
    origin: np.ndarray
    sign: np.ndarray

    @property
    def positive(self) -> frozenset:
        return frozenset(np.flatnonzero(self.sign > 0).tolist())

    @property
    def negative(self) -> frozenset:
        return frozenset(np.flatnonzero(self.sign < 0).tolist())

    def duplicate(self, v: int) -> int:
        hits = np.flatnonzero(self.origin[self.base.n:] == v)
        if len(hits) == 0:
            raise DomainError(f"vertex {v} has no duplicate")
        return self.base.n + int(hits[0])

    def lift(self, f) -> np.ndarray:
        """``|f|`` on base vertices, zero on duplicates."""
        f = np.asarray(f, dtype=float)
        return np.concatenate([np.abs(f), np.zeros(self.lifted.n - self.base.n)])


def build_duplication(g: WeightedGraph, f) -> SignedDuplicationGraph:
    f = _as_function(g, f)
    sign = np.sign(f).astype(int)
    support = np.flatnonzero(sign != 0)
    dup = {int(v): g.n + i for i, v in enumerate(support)}
    edges = []
    for u, v, w in g.edges:
        if sign[u] * sign[v] > 0:
            edges.append((u, dup[v], w))
            edges.append((v, dup[u], w))
        else:
            edges.append((u, v, w))
    lifted = WeightedGraph(g.n + len(support), edges, allow_isolated=True)
    origin = np.concatenate([np.arange(g.n), support])
    origin.setflags(write=False)
    sign.setflags(write=False)
    return SignedDuplicationGraph(g, lifted, origin, sign)


def dual_sweep(g: WeightedGraph, f):
    """Pair ``(V1, V2)`` inside the positive and negative parts of ``f`` with
    large dual expansion.

    Returns
    -------
    (frozenset, frozenset, float)
        ``V1`` within ``{f > 0}``, ``V2`` within ``{f < 0}``, and their dual
        expansion.  One side may be empty.
    """
    dup = build_duplication(g, f)
    s, _ = cheeger_sweep(dup.lifted, dup.lift(f))
    v1 = frozenset(v for v in s if dup.sign[v] > 0)
    v2 = frozenset(v for v in s if dup.sign[v] < 0)
    phibar = dual_expansion(g, v1, v2)
    Rbar = dual_rayleigh(g, f)
    if 1.0 - phibar > sweep_bound(Rbar) + GUARANTEE_TOL:
        raise RuntimeError(f"dual sweep guarantee violated: phibar={phibar!r}, Rbar={Rbar!r}")
    return v1, v2, phibar
