"""Input validation for the estimator layer."""
from __future__ import annotations

import numbers

import numpy as np
from scipy import sparse
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_array

from .exceptions import DomainError
from .graph import WeightedGraph


def check_graph(X, sym_tol: float = 1e-12) -> WeightedGraph:
    """Coerce ``X`` to a :class:`WeightedGraph`.

    ``X`` may already be a graph, or a square symmetric nonnegative affinity
    matrix (dense or sparse) with zero diagonal whose nonzero entries are
    the edge weights.
    """
    if isinstance(X, WeightedGraph):
        return X
    A = check_array(X, accept_sparse=("csr", "csc", "coo"), dtype=np.float64, ensure_min_samples=2)
    if sparse.issparse(A):
        A = A.toarray()
    if A.shape[0] != A.shape[1]:
        raise DomainError(f"affinity matrix must be square, got shape {A.shape}")
    if np.any(A < 0):
        raise DomainError("affinity matrix must be nonnegative")
    if np.any(np.diag(A) != 0):
        raise DomainError("affinity matrix must have a zero diagonal")
    if np.max(np.abs(A - A.T)) > sym_tol * max(1.0, np.abs(A).max()):
        raise DomainError("affinity matrix must be symmetric")
    iu, ju = np.nonzero(np.triu(A, 1))
    edges = [(int(i), int(j), float(A[i, j])) for i, j in zip(iu, ju)]
    return WeightedGraph(A.shape[0], edges)


def check_seed(random_state) -> int:
    """Integer seed from ``None``, an int, or a numpy random state."""
    if random_state is None:
        return 0
    if isinstance(random_state, numbers.Integral):
        if random_state < 0:
            raise DomainError("random_state must be nonnegative")
        return int(random_state)
    rs = check_random_state(random_state)
    return int(rs.randint(0, 2 ** 31 - 1))
