"""Exact multi-way Cheeger and dual Cheeger constants for small graphs.

The optimum is found by dynamic programming over vertex subsets rather than
by listing label vectors one at a time: each constant is a min-max (or
max-min) over collections of disjoint blocks, so it reduces to an exact
cover recursion over bitmasks.  The work is ``3**N`` subset pairs for
``h`` and ``hbar`` (all ``k`` at once) and ``4**N`` for ``hbar_star``.

Budgets are expressed in the label-vector counts of a canonical
enumeration, ``(k+1)**N / k!`` and ``(2k+1)**N / (k! 2**k)``; a request is
also refused when the dynamic program itself would exceed the budget.
Reported values are always re-evaluated on the witness with the
functionals of :mod:`dualcheeger.graph`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _subsets as ss
from .exceptions import BudgetError, DomainError
from .graph import (
    SubBipartition,
    Subpartition,
    WeightedGraph,
    boundary_measure,
    dual_expansion,
    expansion,
    internal_weight,
    volume,
)

__all__ = [
    "DEFAULT_BUDGET",
    "CheegerProfile",
    "DualCheegerProfile",
    "BipartiteWitnessReport",
    "h_count",
    "hbar_count",
    "h_exact",
    "hbar_exact",
    "hbar_star_exact",
    "cheeger_profile",
    "dual_cheeger_profile",
    "star_objective",
    "check_bipartite_witness",
]

DEFAULT_BUDGET = 3e8


def h_count(n: int, k: int) -> float:
    """Canonical label vectors for a ``k``-subpartition search."""
    return (k + 1) ** n / math.factorial(k)


def hbar_count(n: int, k: int) -> float:
    """Canonical label vectors for a ``k``-sub-bipartition search."""
    return (2 * k + 1) ** n / (math.factorial(k) * 2 ** k)


def star_objective(g: WeightedGraph, sb: SubBipartition) -> float:
    """Worst pair score ``(2|E(V1,V2)| + |E(V1 u V2, V*)|/2) / vol(V1 u V2)``."""
    worst = math.inf
    for a, b in sb.pairs:
        u = a | b
        val = (2.0 * boundary_measure(g, a, b) + 0.5 * boundary_measure(g, u, sb.residual)) / volume(g, u)
        worst = min(worst, val)
    return worst


# ------------------------------------------------------------ search kernels
# These work on any (W, m) pair and return bitmask witnesses.


class _Problem:
    def __init__(self, W, m):
        self.W = np.asarray(W, dtype=float)
        self.m = np.asarray(m, dtype=float)
        self.n = self.W.shape[0]
        self._tables = None

    @property
    def tables(self) -> ss.SubsetTables:
        if self._tables is None:
            self._tables = ss.SubsetTables(self.W, self.m)
        return self._tables


def _expansion_scores(T):
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (T.measure - T.inner) / T.measure
    s[0] = 0.0
    return s


def _dual_scores(T):
    with np.errstate(divide="ignore", invalid="ignore"):
        s = 2.0 * T.maxcut / T.measure
    s[0] = 0.0
    return s


def search_min_max_expansion(prob: _Problem, ks):
    """``k -> list of block masks`` minimizing the worst expansion."""
    T = prob.tables
    score = _expansion_scores(T)
    tables = ss.cover_tables(prob.n, score, max(ks), maximize=False)
    out = {}
    for k in ks:
        w, _ = ss.best_mask(tables[k], maximize=False)
        out[k] = ss.trace_cover(tables, score, w, k, maximize=False)
    return out


def search_max_min_dual(prob: _Problem, ks):
    """``k -> list of (A, B) masks`` maximizing the worst dual expansion."""
    T = prob.tables
    score = _dual_scores(T)
    tables = ss.cover_tables(prob.n, score, max(ks), maximize=True)
    out = {}
    for k in ks:
        w, _ = ss.best_mask(tables[k], maximize=True)
        out[k] = [T.best_split(u) for u in ss.trace_cover(tables, score, w, k, maximize=True)]
    return out


def search_max_min_star(prob: _Problem, ks):
    """``k -> list of (A, B) masks`` maximizing the worst residual-aware score."""
    T = prob.tables
    mc = T.maxcut
    out = {}
    if 1 in ks:
        with np.errstate(divide="ignore", invalid="ignore"):
            s1 = (2.0 * mc + 0.5 * T.cross(np.arange(T.size), T.full ^ np.arange(T.size))) / T.measure
        s1[0] = -np.inf
        u, _ = ss.best_mask(s1, maximize=True)
        out[1] = [T.best_split(u)]
    multi = [k for k in ks if k >= 2]
    if not multi:
        return out
    kmax = max(multi)
    best = {k: -np.inf for k in multi}
    arg = {k: None for k in multi}

    def local_problem(w0):
        pos = ss.members(w0)
        size = 1 << len(pos)
        glob = ss.deposit(np.arange(size), pos)
        rest = T.full ^ w0
        s = np.zeros(size)
        g1 = glob[1:]
        s[1:] = (2.0 * mc[g1] + 0.5 * T.cross(g1, rest)) / T.measure[g1]
        return pos, glob, s

    for w0 in range(1, T.size):
        m = bin(w0).count("1")
        top = min(kmax, m)
        if top < 2:
            continue
        _, _, s = local_problem(w0)
        tables = ss.cover_tables(m, s, top, maximize=True)
        full_local = (1 << m) - 1
        for k in multi:
            if k <= top and tables[k][full_local] > best[k]:
                best[k] = tables[k][full_local]
                arg[k] = w0
    for k in multi:
        w0 = arg[k]
        if w0 is None:
            raise DomainError(f"no {k}-sub-bipartition exists on {prob.n} vertices")
        pos, glob, s = local_problem(w0)
        m = len(pos)
        tables = ss.cover_tables(m, s, k, maximize=True)
        blocks = ss.trace_cover(tables, s, (1 << m) - 1, k, maximize=True)
        out[k] = [T.best_split(int(glob[b])) for b in blocks]
    return out


def _star_work(n):
    return float(4 ** n)


def _dp_work(n):
    return float(3 ** n)


# ------------------------------------------------------------------ profiles


@dataclass
class CheegerProfile:
    """Exact ``h(k)`` with optimal subpartitions; ``skipped`` holds budget failures."""

    values: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)


@dataclass
class DualCheegerProfile:
    """Exact ``hbar(k)`` (and optionally ``hbar_star(k)``) with witnesses."""

    values: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)
    star_values: dict = field(default_factory=dict)
    star_witnesses: dict = field(default_factory=dict)
    star_skipped: dict = field(default_factory=dict)


def _check_k(n, k):
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in 1..{n}, got {k}")


def _kmax(n, kmax):
    return n if kmax is None else min(int(kmax), n)


def _bip_from_masks(n, pairs):
    return SubBipartition(n, [(ss.members(a), ss.members(b)) for a, b in pairs])


def cheeger_profile(g: WeightedGraph, kmax=None, budget=DEFAULT_BUDGET) -> CheegerProfile:
    n = g.n
    prof = CheegerProfile()
    need = []
    for k in range(1, _kmax(n, kmax) + 1):
        if k == 1:
            prof.witnesses[1] = Subpartition([range(n)])
        elif 2 * k > n:
            # some block is a singleton, and a loop-free singleton has expansion 1
            prof.witnesses[k] = Subpartition([[v] for v in range(k)])
        else:
            required = max(h_count(n, k), _dp_work(n))
            if required > budget:
                prof.skipped[k] = BudgetError(required, budget, f"h({k})")
            else:
                need.append(k)
    if need:
        found = search_min_max_expansion(_Problem(g.adjacency, g.degrees), need)
        for k, blocks in found.items():
            prof.witnesses[k] = Subpartition([ss.members(b) for b in blocks])
    for k, sp in prof.witnesses.items():
        prof.values[k] = max(expansion(g, p) for p in sp.parts)
    prof.values = dict(sorted(prof.values.items()))
    prof.witnesses = dict(sorted(prof.witnesses.items()))
    return prof


def dual_cheeger_profile(g: WeightedGraph, kmax=None, budget=DEFAULT_BUDGET, star=True) -> DualCheegerProfile:
    n = g.n
    prof = DualCheegerProfile()
    need, need_star = [], []
    for k in range(1, _kmax(n, kmax) + 1):
        if 2 * k > n:
            # some pair has an empty side and so zero cross weight
            prof.witnesses[k] = SubBipartition(n, [([v], []) for v in range(k)])
        else:
            required = max(hbar_count(n, k), _dp_work(n))
            if required > budget:
                prof.skipped[k] = BudgetError(required, budget, f"hbar({k})")
            else:
                need.append(k)
        if star:
            required = max(hbar_count(n, k), _dp_work(n) if k == 1 else _star_work(n))
            if required > budget:
                prof.star_skipped[k] = BudgetError(required, budget, f"hbar_star({k})")
            else:
                need_star.append(k)
    prob = _Problem(g.adjacency, g.degrees)
    if need:
        for k, pairs in search_max_min_dual(prob, need).items():
            prof.witnesses[k] = _bip_from_masks(n, pairs)
    if need_star:
        for k, pairs in search_max_min_star(prob, need_star).items():
            prof.star_witnesses[k] = _bip_from_masks(n, pairs)
    prof.witnesses = dict(sorted(prof.witnesses.items()))
    prof.star_witnesses = dict(sorted(prof.star_witnesses.items()))
    prof.values = {k: min(dual_expansion(g, a, b) for a, b in sb.pairs) for k, sb in prof.witnesses.items()}
    prof.star_values = {k: star_objective(g, sb) for k, sb in prof.star_witnesses.items()}
    return prof


def _single(profile_values, witnesses, skipped, k):
    if k in skipped:
        raise skipped[k]
    return profile_values[k], witnesses[k]


def h_exact(g: WeightedGraph, k: int, budget=DEFAULT_BUDGET):
    """``(h(k), optimal Subpartition)``; raises :class:`BudgetError` when too large."""
    _check_k(g.n, k)
    required = h_count(g.n, k)
    if required > budget:
        raise BudgetError(required, budget, f"h({k})")
    prof = cheeger_profile(g, k, budget)
    return _single(prof.values, prof.witnesses, prof.skipped, k)


def hbar_exact(g: WeightedGraph, k: int, budget=DEFAULT_BUDGET):
    """``(hbar(k), optimal SubBipartition)``."""
    _check_k(g.n, k)
    required = hbar_count(g.n, k)
    if required > budget:
        raise BudgetError(required, budget, f"hbar({k})")
    prof = _dual_single(g, k, budget, star=False)
    return _single(prof.values, prof.witnesses, prof.skipped, k)


def hbar_star_exact(g: WeightedGraph, k: int, budget=DEFAULT_BUDGET):
    """``(hbar_star(k), optimal SubBipartition)``."""
    _check_k(g.n, k)
    required = hbar_count(g.n, k)
    if required > budget:
        raise BudgetError(required, budget, f"hbar_star({k})")
    prof = _dual_single(g, k, budget, star=True)
    return _single(prof.star_values, prof.star_witnesses, prof.star_skipped, k)


def _dual_single(g, k, budget, star):
    # only the requested k, so the budget of smaller k does not matter
    n = g.n
    prof = DualCheegerProfile()
    prob = _Problem(g.adjacency, g.degrees)
    if not star:
        if 2 * k > n:
            prof.witnesses[k] = SubBipartition(n, [([v], []) for v in range(k)])
        elif _dp_work(n) > budget:
            prof.skipped[k] = BudgetError(_dp_work(n), budget, f"hbar({k})")
        else:
            prof.witnesses[k] = _bip_from_masks(n, search_max_min_dual(prob, [k])[k])
        prof.values = {k: min(dual_expansion(g, a, b) for a, b in sb.pairs) for k, sb in prof.witnesses.items()}
    else:
        work = _dp_work(n) if k == 1 else _star_work(n)
        if work > budget:
            prof.star_skipped[k] = BudgetError(work, budget, f"hbar_star({k})")
        else:
            prof.star_witnesses[k] = _bip_from_masks(n, search_max_min_star(prob, [k])[k])
        prof.star_values = {k: star_objective(g, sb) for k, sb in prof.star_witnesses.items()}
    return prof


# ------------------------------------------------------------------- reports


@dataclass(frozen=True)
class BipartiteWitnessReport:
    k: int
    applies: bool
    pair_index: int | None
    internal_odd: float
    internal_even: float

    @property
    def passed(self) -> bool:
        return (not self.applies) or (self.internal_odd == 0.0 and self.internal_even == 0.0)


def check_bipartite_witness(g: WeightedGraph, k: int, h_profile: CheegerProfile,
                            hbar_profile: DualCheegerProfile, tol: float = 1e-12) -> BipartiteWitnessReport:
    """When ``h(k) + hbar(k) = 1``, the optimal pair of largest expansion has no internal edges."""
    if k not in h_profile.values or k not in hbar_profile.values:
        raise DomainError(f"profiles do not cover k={k}")
    if abs(h_profile.values[k] + hbar_profile.values[k] - 1.0) > tol:
        return BipartiteWitnessReport(k, False, None, 0.0, 0.0)
    sb = hbar_profile.witnesses[k]
    phis = [expansion(g, a | b) for a, b in sb.pairs]
    i = int(np.argmax(phis))
    a, b = sb.pairs[i]
    return BipartiteWitnessReport(k, True, i, internal_weight(g, a), internal_weight(g, b))
