"""Normalized Laplacian spectrum and (dual) Rayleigh quotients."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .graph import WeightedGraph

__all__ = [
    "EigenSystem",
    "EmbeddingMap",
    "jacobi_eigh",
    "eigensystem",
    "rayleigh",
    "dual_rayleigh",
    "top_embedding",
    "SUPPORT_RTOL",
]

# rows of an embedding below this fraction of the largest row norm are
# treated as exact zeros (they are round-off from the eigensolver)
SUPPORT_RTOL = 1e-12


def _round_robin(m):
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    players = list(range(m + (m % 2)))
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for i in range(size // 2):
            a, b = players[i], players[size - 1 - i]
            if a < m and b < m:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the rotations of one round act on disjoint index pairs and can be
    applied together.  Iteration stops once the Frobenius norm of the
    off-diagonal part is at most ``tol``.

    Returns
    -------
    values : ndarray, ascending
    vectors : ndarray, columns are orthonormal eigenvectors
    """
    A = np.array(a, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("jacobi_eigh needs a square matrix")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(A).max(initial=0.0))):
        raise DomainError("jacobi_eigh needs a symmetric matrix")
    A = 0.5 * (A + A.T)
    m = A.shape[0]
    V = np.eye(m)
    rounds = _round_robin(m)

    def off_norm():
        off = A - np.diag(np.diag(A))
        return np.sqrt(np.sum(off * off))

    sweeps = 0
    while m > 1 and off_norm() > tol:
        if sweeps >= max_sweeps:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p, q in rounds:
            apq = A[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore", divide="ignore"):
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                sgn = np.where(theta >= 0.0, 1.0, -1.0)
                t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp, rq = A[p, :].copy(), A[q, :].copy()
            A[p, :] = c[:, None] * rp - s[:, None] * rq
            A[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = A[:, p].copy(), A[:, q].copy()
            A[:, p] = cp * c - cq * s
            A[:, q] = cp * s + cq * c
            A[p, q] = 0.0
            A[q, p] = 0.0
            vp, vq = V[:, p].copy(), V[:, q].copy()
            V[:, p] = vp * c - vq * s
            V[:, q] = vp * s + vq * c

    values = np.diag(A).copy()
    order = np.argsort(values, kind="stable")
    return values[order], V[:, order]


@dataclass(frozen=True)
class EigenSystem:
    """Ascending spectrum of ``I - D^{-1}A`` with ``mu``-orthonormal eigenfunctions.

    ``functions[:, j]`` is the eigenfunction of ``values[j]``.
    """

    values: np.ndarray
    functions: np.ndarray

    @property
    def n(self) -> int:
        return len(self.values)

    def residuals(self, g: WeightedGraph) -> np.ndarray:
        """``mu``-norm of ``Delta f - lambda f`` for each eigenpair."""
        d = g.degrees
        P = g.adjacency / d[:, None]
        F = self.functions
        R = F - P @ F - F * self.values[None, :]
        return np.sqrt(np.sum(d[:, None] * R * R, axis=0))

    def gram(self, g: WeightedGraph) -> np.ndarray:
        return self.functions.T @ (g.degrees[:, None] * self.functions)


def eigensystem(g: WeightedGraph, tol: float = 1e-12) -> EigenSystem:
    if not tol > 0:
        raise DomainError("tol must be positive")
    d = g.degrees
    if np.any(d <= 0):
        raise DomainError("eigensystem needs a graph without isolated vertices")
    s = 1.0 / np.sqrt(d)
    L = np.eye(g.n) - s[:, None] * g.adjacency * s[None, :]
    values, phi = jacobi_eigh(L, tol=tol)
    functions = s[:, None] * phi
    values.setflags(write=False)
    functions.setflags(write=False)
    return EigenSystem(values, functions)


def _as_map(g, F):
    F = np.asarray(F, dtype=float)
    if F.ndim == 1:
        F = F[:, None]
    if F.ndim != 2 or F.shape[0] != g.n:
        raise DomainError(f"map must have {g.n} rows, got shape {F.shape}")
    return F


def _quotient(g, F, sign):
    F = _as_map(g, F)
    denom = float(np.sum(g.degrees * np.sum(F * F, axis=1)))
    if denom == 0.0:
        raise DomainError("Rayleigh quotient of the zero map is undefined")
    num = 0.0
    for u, v, w in g.edges:
        diff = F[u] + sign * F[v]
        num += w * float(diff @ diff)
    return num / denom


def rayleigh(g: WeightedGraph, F) -> float:
    """Edge-difference energy of ``F`` over its ``mu``-mass."""
    return _quotient(g, F, -1.0)


def dual_rayleigh(g: WeightedGraph, F) -> float:
    """Edge-sum energy of ``F`` over its ``mu``-mass; ``rayleigh + dual_rayleigh == 2``."""
    return _quotient(g, F, 1.0)


@dataclass(frozen=True)
class EmbeddingMap:
    """``F : V -> R^k`` whose columns are ``mu``-orthonormal functions."""

    columns: np.ndarray

    @property
    def k(self) -> int:
        return self.columns.shape[1]

    @property
    def n(self) -> int:
        return self.columns.shape[0]

    def __call__(self, v):
        return self.columns[v]

    def support(self) -> np.ndarray:
        return np.flatnonzero(np.any(self.columns != 0.0, axis=1))

    def mass(self, g: WeightedGraph) -> np.ndarray:
        """Per-vertex ``mu(v) * |F(v)|^2``."""
        return g.degrees * np.sum(self.columns ** 2, axis=1)


def top_embedding(es: EigenSystem, k: int) -> EmbeddingMap:
    """Map built from the ``k`` eigenfunctions with the largest eigenvalues.

    Rows whose norm is round-off relative to the largest row are zeroed so
    the support matches the exact eigenfunctions.
    """
    k = int(k)
    if not 1 <= k <= es.n:
        raise DomainError(f"k must lie in 1..{es.n}")
    F = np.array(es.functions[:, es.n - k:], copy=True)
    norms = np.linalg.norm(F, axis=1)
    F[norms <= SUPPORT_RTOL * norms.max()] = 0.0
    F.setflags(write=False)
    return EmbeddingMap(F)
