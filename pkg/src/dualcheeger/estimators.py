"""scikit-learn style wrappers.

All estimators take a graph as input: either a :class:`WeightedGraph` or a
symmetric affinity matrix whose rows index the vertices.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_graph, check_seed
from .exact import DEFAULT_BUDGET, cheeger_profile, dual_cheeger_profile
from .projective import extract_sub_bipartition
from .spectral import eigensystem, top_embedding

__all__ = ["DualCheegerClustering", "CheegerProfiler", "TopEigenEmbedding"]


class DualCheegerClustering(ClusterMixin, BaseEstimator):
    """Find ``n_pairs`` disjoint, nearly bipartite vertex pairs.

    Parameters
    ----------
    n_pairs : int, default=1
        Number of pairs ``k``.
    random_state : int, RandomState or None
        Seed of the partition sampler.
    max_partition_attempts : int, default=1000

    Attributes
    ----------
    labels_ : ndarray of shape (n,)
        0 for vertices outside every pair, ``2i+1`` and ``2i+2`` for the two
        sides of pair ``i``.
    sub_bipartition_ : SubBipartition
    certificate_ : Certificate
    dual_expansions_ : ndarray of shape (n_pairs,)
    """

    def __init__(self, n_pairs=1, random_state=None, max_partition_attempts=1000):
        self.n_pairs = n_pairs
        self.random_state = random_state
        self.max_partition_attempts = max_partition_attempts

    def fit(self, X, y=None):
        g = check_graph(X)
        seed = check_seed(self.random_state)
        sb, cert = extract_sub_bipartition(g, int(self.n_pairs), seed=seed,
                                           max_partition_attempts=int(self.max_partition_attempts))
        self.n_features_in_ = g.n
        self.sub_bipartition_ = sb
        self.certificate_ = cert
        self.labels_ = sb.labels()
        self.dual_expansions_ = np.array([p.phibar for p in cert.pairs])
        return self


class CheegerProfiler(BaseEstimator):
    """Exact multi-way Cheeger and dual Cheeger constants of a small graph.

    Parameters
    ----------
    kmax : int or None
        Largest ``k`` (default ``min(n, 8)``).
    budget : float
        Search budget; larger ``k`` are skipped and listed in ``skipped_``.
    star : bool
        Also compute the residual-aware dual constant.
    """

    def __init__(self, kmax=None, budget=DEFAULT_BUDGET, star=False):
        self.kmax = kmax
        self.budget = budget
        self.star = star

    def fit(self, X, y=None):
        g = check_graph(X)
        kmax = min(g.n, 8) if self.kmax is None else min(int(self.kmax), g.n)
        hp = cheeger_profile(g, kmax, self.budget)
        dp = dual_cheeger_profile(g, kmax, self.budget, star=self.star)
        self.n_features_in_ = g.n
        self.h_ = dict(hp.values)
        self.hbar_ = dict(dp.values)
        self.hbar_star_ = dict(dp.star_values)
        self.h_witnesses_ = dict(hp.witnesses)
        self.hbar_witnesses_ = dict(dp.witnesses)
        self.skipped_ = {**{("h", k): e for k, e in hp.skipped.items()},
                         **{("hbar", k): e for k, e in dp.skipped.items()},
                         **{("hbar_star", k): e for k, e in dp.star_skipped.items()}}
        return self


class TopEigenEmbedding(TransformerMixin, BaseEstimator):
    """Rows of the top ``n_components`` eigenfunctions of ``I - D^{-1}A``.

    The embedding is transductive: ``transform`` embeds the graph it is
    given, which must have as many vertices as the fitted one.
    """

    def __init__(self, n_components=2, tol=1e-12):
        self.n_components = n_components
        self.tol = tol

    def _embed(self, g):
        es = eigensystem(g, self.tol)
        return es, top_embedding(es, int(self.n_components)).columns

    def fit(self, X, y=None):
        g = check_graph(X)
        es, F = self._embed(g)
        self.n_features_in_ = g.n
        self.eigenvalues_ = es.values[g.n - int(self.n_components):]
        self.embedding_ = np.array(F)
        return self

    def transform(self, X):
        check_is_fitted(self, "embedding_")
        g = check_graph(X)
        if g.n != self.n_features_in_:
            raise ValueError(f"expected a graph on {self.n_features_in_} vertices, got {g.n}")
        return np.array(self._embed(g)[1])
