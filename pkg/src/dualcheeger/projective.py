"""Clustering in the projective space of a spectral embedding.

Each vertex ``v`` with ``F(v) != 0`` becomes the line through ``F(v)``, and
lines are compared with the rough metric ``min(|x - y|, |x + y|)`` of their
unit representatives.  Clusters are carved from this space, localized with
a cut-off function and turned into disjoint pairs by dual sweeps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, PipelineError
from .graph import SubBipartition, WeightedGraph
from .spectral import EmbeddingMap, dual_rayleigh, eigensystem, top_embedding
from .sweep import GUARANTEE_TOL, dual_sweep

__all__ = [
    "rough_distance",
    "ProjectiveSpace",
    "PipelineParams",
    "padded_random_partition",
    "padded_cores",
    "mass_condition",
    "spreading_bound_check",
    "SpreadingReport",
    "merge_heavy_clusters",
    "cutoff_localize",
    "best_coordinate",
    "PairCertificate",
    "Certificate",
    "extract_sub_bipartition",
    "DIM_CONSTANT",
]

# doubling-dimension constant of the projective space under the rough metric
DIM_CONSTANT = 4.0 * (math.log2(math.pi) - 0.5)

_MATRIX_LIMIT = 512
_CHUNK_ENTRIES = 4_000_000


def _pair_dist(X, Y):
    diff = np.linalg.norm(X[:, None, :] - Y[None, :, :], axis=2)
    summ = np.linalg.norm(X[:, None, :] + Y[None, :, :], axis=2)
    return np.minimum(diff, summ)


def rough_distance(x, y) -> float:
    """``min(|x' - y'|, |x' + y'|)`` for the unit vectors ``x'``, ``y'`` along ``x``, ``y``."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise DomainError("rough distance is undefined for the zero vector")
    x, y = x / nx, y / ny
    return float(min(np.linalg.norm(x - y), np.linalg.norm(x + y)))


class ProjectiveSpace:
    """Support of an embedding with the rough metric and per-point masses.

    Parameters
    ----------
    F : EmbeddingMap
    mu : array of vertex weights (the degrees for a graph)

    Points are indexed ``0..m-1`` in increasing vertex order; ``points[i]``
    is the vertex id.  The full distance matrix is kept only for small
    supports, otherwise rows are computed on demand.
    """

    def __init__(self, F: EmbeddingMap, mu):
        cols = np.asarray(F.columns, dtype=float)
        mu = np.asarray(mu, dtype=float)
        self.F = F
        self.n = cols.shape[0]
        self.points = np.flatnonzero(np.any(cols != 0.0, axis=1))
        if len(self.points) == 0:
            raise DomainError("embedding is identically zero")
        rows = cols[self.points]
        self.unit = rows / np.linalg.norm(rows, axis=1)[:, None]
        self.masses = mu[self.points] * np.sum(rows * rows, axis=1)
        self.total_mass = float(np.sum(mu * np.sum(cols * cols, axis=1)))
        self.index = np.full(self.n, -1)
        self.index[self.points] = np.arange(len(self.points))
        self._matrix = None

    @property
    def m(self) -> int:
        return len(self.points)

    def _chunk(self):
        k = self.unit.shape[1]
        return max(1, _CHUNK_ENTRIES // (self.m * k))

    @property
    def matrix(self):
        """Full distance matrix (cached when the support is small)."""
        if self._matrix is not None:
            return self._matrix
        D = np.vstack([self.rows(np.arange(a, min(a + self._chunk(), self.m)))
                       for a in range(0, self.m, self._chunk())])
        if self.m <= _MATRIX_LIMIT:
            self._matrix = D
        return D

    def rows(self, idx):
        """Distances from the points ``idx`` to every point."""
        idx = np.atleast_1d(idx)
        if self._matrix is not None:
            return self._matrix[idx]
        return _pair_dist(self.unit[idx], self.unit)

    def distance(self, u: int, v: int) -> float:
        """Distance between two vertices of the support."""
        i, j = self._point(u), self._point(v)
        return float(_pair_dist(self.unit[[i]], self.unit[[j]])[0, 0])

    def _point(self, v):
        i = self.index[v]
        if i < 0:
            raise DomainError(f"vertex {v} is outside the support")
        return i

    def distance_to_set(self, T) -> np.ndarray:
        """``min_{t in T} d(p, t)`` for every point ``p``."""
        tidx = np.array([self._point(v) for v in T], dtype=int)
        if len(tidx) == 0:
            raise DomainError("distance to the empty set")
        out = np.full(self.m, np.inf)
        step = max(1, _CHUNK_ENTRIES // (self.m * self.unit.shape[1]))
        for a in range(0, len(tidx), step):
            out = np.minimum(out, self.rows(tidx[a:a + step]).min(axis=0))
        return out

    def mass(self, S) -> float:
        idx = [self.index[v] for v in S if self.index[v] >= 0]
        return float(self.masses[idx].sum())

    def diameter(self, S) -> float:
        idx = np.array([self.index[v] for v in S if self.index[v] >= 0], dtype=int)
        if len(idx) < 2:
            return 0.0
        return float(_pair_dist(self.unit[idx], self.unit[idx]).max())


@dataclass(frozen=True)
class PipelineParams:
    """Scales of the clustering pipeline for a target of ``k`` pairs."""

    k: int
    r: float
    delta: float
    C: float
    alpha: float
    eps: float
    max_partition_attempts: int = 1000
    seed: int = 0

    @classmethod
    def for_k(cls, k: int, seed: int = 0, max_partition_attempts: int = 1000) -> "PipelineParams":
        if k < 1:
            raise DomainError("k must be positive")
        r = 1.0 / (3.0 * math.sqrt(k))
        alpha = 128.0 * k * DIM_CONSTANT * (k - 1)
        eps = r / alpha if alpha > 0 else math.inf
        return cls(k, r, 1.0 / (4 * k), DIM_CONSTANT, alpha, eps, int(max_partition_attempts), int(seed))

    @property
    def pad_radius(self) -> float:
        return self.r / self.alpha if self.alpha > 0 else 0.0

    @property
    def bound_factor(self) -> float:
        """``2 (768 C)^2 k^6`` (or 1 for ``k = 1``)."""
        if self.k == 1:
            return 1.0
        return 2.0 * (768.0 * self.C) ** 2 * self.k ** 6


def padded_random_partition(space: ProjectiveSpace, r: float, delta: float, rng) -> list:
    """Ball-carving partition of the support with clusters of diameter at most ``r``.

    A radius ``beta`` is drawn uniformly from ``[r/4, r/2]`` and the points
    are visited in a random order; every point joins the first visited
    point within ``beta``.  ``delta`` is the padding failure rate the caller
    is aiming for; the scheme itself does not depend on it.
    """
    if not r > 0:
        raise DomainError("r must be positive")
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    beta = rng.uniform(r / 4.0, r / 2.0)
    order = rng.permutation(space.m)
    label = np.full(space.m, -1)
    clusters = []
    for c in order:
        free = np.flatnonzero(label < 0)
        if len(free) == 0:
            break
        hit = free[space.rows(c)[0][free] <= beta]
        if len(hit):
            label[hit] = len(clusters)
            clusters.append(frozenset(space.points[hit].tolist()))
    return clusters


def padded_cores(space: ProjectiveSpace, partition, radius: float) -> list:
    """Points whose closed ball of the given radius stays inside their own cluster."""
    label = np.full(space.m, -1)
    for i, S in enumerate(partition):
        label[[space.index[v] for v in S]] = i
    if np.any(label < 0):
        raise DomainError("partition does not cover the support")
    inside = np.zeros(space.m, dtype=bool)
    step = space._chunk()
    for a in range(0, space.m, step):
        idx = np.arange(a, min(a + step, space.m))
        near = space.rows(idx) <= radius
        foreign = near & (label[None, :] != label[idx][:, None])
        inside[idx] = ~foreign.any(axis=1)
    return [frozenset(space.points[(label == i) & inside].tolist()) for i in range(len(partition))]


def mass_condition(space: ProjectiveSpace, cores, k: int) -> bool:
    """Padded cores keep at least ``1 - 1/(4k)`` of the total mass."""
    return sum(space.mass(c) for c in cores) >= (1.0 - 1.0 / (4 * k)) * space.total_mass


@dataclass(frozen=True)
class SpreadingReport:
    diameter: float
    applies: bool
    mass: float
    bound: float

    @property
    def passed(self) -> bool:
        return (not self.applies) or self.mass <= self.bound + GUARANTEE_TOL


def spreading_bound_check(g: WeightedGraph, F: EmbeddingMap, S, r: float) -> SpreadingReport:
    """A set of small projective diameter cannot hold much more than ``1/k`` of the mass.

    With ``F`` built from ``k`` orthonormal functions, a set of diameter at
    most ``r`` has mass at most ``E_V / (k (1 - r^2))``.
    """
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)")
    S = list(S)
    space = ProjectiveSpace(F, g.degrees)
    diam = space.diameter(S)
    mass = space.mass(S)
    bound = space.total_mass / (F.k * (1.0 - r * r))
    return SpreadingReport(diam, diam <= r, mass, bound)


def merge_heavy_clusters(space: ProjectiveSpace, cores, k: int) -> list:
    """Turn padded cores into ``k`` sets each holding at least ``1/(2k)`` of the mass.

    Two sets both below the threshold are merged (the first such pair in
    list order) until no such pair remains.  The remaining light set, if
    any, is moved to the end, and everything from position ``k`` on is
    united into the last set.
    """
    thr = space.total_mass / (2 * k)
    sets = [set(c) for c in cores if c]
    while True:
        light = [i for i, s in enumerate(sets) if space.mass(s) < thr]
        if len(light) < 2:
            break
        i, j = light[0], light[1]
        sets[i] |= sets[j]
        del sets[j]
    light = [i for i, s in enumerate(sets) if space.mass(s) < thr]
    if light:
        sets.append(sets.pop(light[0]))
    if len(sets) < k:
        raise DomainError(f"only {len(sets)} non-empty cores for k={k}")
    tail = set().union(*sets[k - 1:])
    return [frozenset(s) for s in sets[:k - 1]] + [frozenset(tail)]


def cutoff_localize(F: EmbeddingMap, T, eps: float, space: ProjectiveSpace | None = None) -> np.ndarray:
    """``theta * F`` with ``theta = max(0, 1 - d(v, T) / eps)`` on the support, 0 elsewhere."""
    if not 0.0 < eps < 2.0:
        raise DomainError("eps must lie in (0, 2)")
    if space is None:
        space = ProjectiveSpace(F, np.ones(F.n))
    T = list(T)
    if not T:
        raise DomainError("localization set is empty")
    d = space.distance_to_set(T)
    theta = np.zeros(F.n)
    theta[space.points] = np.maximum(0.0, 1.0 - d / eps)
    return theta[:, None] * np.asarray(F.columns)


def best_coordinate(g: WeightedGraph, psi):
    """Nonzero coordinate of least dual Rayleigh quotient (0-based, first on ties)."""
    psi = np.asarray(psi, dtype=float)
    if psi.ndim == 1:
        psi = psi[:, None]
    best, j0 = math.inf, None
    for j in range(psi.shape[1]):
        col = psi[:, j]
        if not np.any(col != 0.0):
            continue
        q = dual_rayleigh(g, col)
        if q < best:
            best, j0 = q, j
    if j0 is None:
        raise DomainError("localized map is identically zero")
    return j0, psi[:, j0].copy()


@dataclass(frozen=True)
class PairCertificate:
    phibar: float
    lhs: float
    rbar_psi: float
    rbar_coordinate: float
    coordinate: int

    def chain(self, bound_psi: float, bound: float) -> dict:
        t = GUARANTEE_TOL
        return {
            "sweep": self.lhs <= self.rbar_coordinate + t,
            "coordinate": self.rbar_coordinate <= self.rbar_psi + t,
            "localization": self.rbar_psi <= bound_psi + t,
            "final": self.lhs <= bound + t,
        }


@dataclass(frozen=True)
class Certificate:
    """Per-pair evidence that ``1 - sqrt(1 - (1 - phibar)^2) <= B(k)``.

    ``B(k) = 2 (768 C)^2 k^6 Rbar(F)`` for ``k >= 2`` and ``Rbar(f_N)`` for
    ``k = 1``.  ``bound_psi`` is the intermediate bound on each localized map.
    """

    k: int
    rbar_F: float
    bound: float
    bound_psi: float
    pairs: tuple
    clusters: tuple = ()
    supports: tuple = ()
    attempts: int = 0

    @property
    def checks(self) -> list:
        return [p.chain(self.bound_psi, self.bound) for p in self.pairs]

    @property
    def passed(self) -> bool:
        return all(all(c.values()) for c in self.checks)


def _lhs(phibar):
    return 1.0 - math.sqrt(max(0.0, 1.0 - (1.0 - phibar) ** 2))


def extract_sub_bipartition(g: WeightedGraph, k: int, seed: int = 0, max_partition_attempts: int = 1000,
                            eigen=None):
    """Certified ``k``-sub-bipartition from the top ``k`` eigenfunctions.

    Parameters
    ----------
    g : WeightedGraph
    k : int, ``1 <= k <= n``
    seed : int
        Attempt ``i`` draws from ``numpy.random.default_rng([seed, i])``.
    max_partition_attempts : int
    eigen : EigenSystem, optional
        Precomputed spectrum of ``g``.

    Returns
    -------
    (SubBipartition, Certificate)

    Raises
    ------
    PipelineError
        When no sampled partition passes the mass test; ``stats`` counts the
        failures by kind.
    """
    if not 1 <= k <= g.n:
        raise DomainError(f"k must lie in 1..{g.n}")
    es = eigensystem(g) if eigen is None else eigen
    F = top_embedding(es, k)
    params = PipelineParams.for_k(k, seed, max_partition_attempts)
    rbar_F = dual_rayleigh(g, F.columns)
    if k == 1:
        f = F.columns[:, 0]
        v1, v2, phibar = dual_sweep(g, f)
        pc = PairCertificate(phibar, _lhs(phibar), rbar_F, rbar_F, 0)
        supp = frozenset(np.flatnonzero(f != 0.0).tolist())
        cert = Certificate(1, rbar_F, rbar_F, rbar_F, (pc,), (supp,), (supp,), 0)
        return SubBipartition(g.n, [(v1, v2)]), cert

    space = ProjectiveSpace(F, g.degrees)
    E_V = space.total_mass
    cap = E_V * (1.0 + 1.0 / (8 * k)) / k
    stats = {"attempts": 0, "mass_failures": 0, "spreading_failures": 0, "merge_failures": 0,
             "best_core_fraction": 0.0}
    clusters = None
    for attempt in range(params.max_partition_attempts):
        stats["attempts"] = attempt + 1
        rng = np.random.default_rng([params.seed, attempt])
        partition = padded_random_partition(space, params.r, params.delta, rng)
        cores = padded_cores(space, partition, params.pad_radius)
        masses = [space.mass(c) for c in cores]
        stats["best_core_fraction"] = max(stats["best_core_fraction"], sum(masses) / E_V)
        if not mass_condition(space, cores, k):
            stats["mass_failures"] += 1
            continue
        if max(masses) > cap:
            stats["spreading_failures"] += 1
            continue
        try:
            T = merge_heavy_clusters(space, cores, k)
        except DomainError:
            stats["merge_failures"] += 1
            continue
        if min(space.mass(t) for t in T) < E_V / (2 * k):
            stats["merge_failures"] += 1
            continue
        clusters = T
        break
    if clusters is None:
        raise PipelineError(f"no partition passed the mass test in {params.max_partition_attempts} attempts",
                            stats)

    pairs, certs, supports = [], [], []
    for T in clusters:
        psi = cutoff_localize(F, T, params.eps, space)
        j0, col = best_coordinate(g, psi)
        v1, v2, phibar = dual_sweep(g, col)
        pairs.append((v1, v2))
        supports.append(frozenset(np.flatnonzero(np.any(psi != 0.0, axis=1)).tolist()))
        certs.append(PairCertificate(phibar, _lhs(phibar), dual_rayleigh(g, psi), dual_rayleigh(g, col), j0))
    bound_psi = 2.0 * k * (1.0 + 2.0 / params.eps) ** 2 * rbar_F
    cert = Certificate(k, rbar_F, params.bound_factor * rbar_F, bound_psi, tuple(certs),
                       tuple(clusters), tuple(supports), stats["attempts"])
    if not cert.passed:
        raise PipelineError("certificate check failed", {**stats, "checks": cert.checks})
    return SubBipartition(g.n, pairs), cert
