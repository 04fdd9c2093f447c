"""Finite reversible Markov operators and their multi-way constants."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _subsets as ss
from .exact import (
    DEFAULT_BUDGET,
    _Problem,
    _dp_work,
    h_count,
    hbar_count,
    search_max_min_dual,
    search_min_max_expansion,
)
from .exceptions import BudgetError, DomainError
from .graph import SubBipartition, Subpartition, WeightedGraph
from .projective import DIM_CONSTANT
from .spectral import jacobi_eigh

__all__ = [
    "FiniteMarkovOperator",
    "MarkovProfile",
    "HCIReport",
    "j_measure",
    "from_graph",
    "metropolis",
    "markov_profiles",
    "check_markov_hci",
]

_TOL = 1e-12


class FiniteMarkovOperator:
    """Row-stochastic kernel ``P`` reversible with respect to a probability ``mu``.

    Parameters
    ----------
    mu : array of shape (n,)
        Strictly positive, summing to one.
    kernel : array of shape (n, n)
        Nonnegative rows summing to one with ``mu_x P_xy == mu_y P_yx``.
        Diagonal entries (holding) are allowed.
    """

    def __init__(self, mu, kernel):
        mu = np.array(mu, dtype=float)
        P = np.array(kernel, dtype=float)
        n = mu.shape[0]
        if mu.ndim != 1 or P.shape != (n, n):
            raise DomainError(f"kernel must be {n}x{n}")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(P))):
            raise DomainError("entries must be finite")
        if np.any(mu <= 0) or abs(mu.sum() - 1.0) > _TOL:
            raise DomainError("mu must be a strictly positive probability vector")
        if np.any(P < 0):
            raise DomainError("kernel entries must be nonnegative")
        if np.max(np.abs(P.sum(axis=1) - 1.0)) > _TOL:
            raise DomainError("kernel rows must sum to one")
        W = mu[:, None] * P
        if np.max(np.abs(W - W.T)) > _TOL:
            raise DomainError("kernel is not reversible with respect to mu")
        mu.setflags(write=False)
        P.setflags(write=False)
        self.mu = mu
        self.kernel = P
        self._spectrum = None

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def flow(self) -> np.ndarray:
        """Symmetric matrix ``mu_x P_xy`` (symmetrized to remove round-off)."""
        W = self.mu[:, None] * self.kernel
        return 0.5 * (W + W.T)

    def balance_residual(self) -> float:
        W = self.mu[:, None] * self.kernel
        return float(np.max(np.abs(W - W.T)))

    def stochastic_residual(self) -> float:
        return float(np.max(np.abs(self.kernel.sum(axis=1) - 1.0)))

    def spectrum(self) -> np.ndarray:
        """Ascending eigenvalues of ``P``."""
        if self._spectrum is None:
            s = np.sqrt(self.mu)
            S = self.flow / (s[:, None] * s[None, :])
            vals, _ = jacobi_eigh(S)
            vals.setflags(write=False)
            self._spectrum = vals
        return self._spectrum

    def lambda_bar(self) -> np.ndarray:
        """Ascending eigenvalues of ``I + P``."""
        return 1.0 + self.spectrum()


def j_measure(op: FiniteMarkovOperator, A, B) -> float:
    """``sum_{x in A} mu_x sum_{y in B} P_xy``."""
    A = sorted(set(int(a) for a in A))
    B = sorted(set(int(b) for b in B))
    if not A or not B:
        return 0.0
    return float(np.sum(op.mu[A, None] * op.kernel[np.ix_(A, B)]))


def _mu(op, S):
    return float(op.mu[sorted(S)].sum())


def _expansion(op, S):
    S = set(S)
    return j_measure(op, S, set(range(op.n)) - S) / _mu(op, S)


def _dual(op, A, B):
    return 2.0 * j_measure(op, A, B) / _mu(op, set(A) | set(B))


def from_graph(g: WeightedGraph) -> FiniteMarkovOperator:
    """Simple random walk ``P = D^{-1} A`` with ``mu = d / vol(V)``."""
    d = g.degrees
    return FiniteMarkovOperator(d / d.sum(), g.adjacency / d[:, None])


def metropolis(base: WeightedGraph, target_mu=None, seed: int = 0) -> FiniteMarkovOperator:
    """Metropolis-Hastings chain over ``base`` with a uniform-neighbour proposal.

    When ``target_mu`` is omitted a random positive target is drawn from
    ``default_rng(seed)``; otherwise ``seed`` is not used.
    """
    n = base.n
    if target_mu is None:
        rng = np.random.default_rng(seed)
        target_mu = rng.uniform(0.5, 2.0, n)
        target_mu = target_mu / target_mu.sum()
    mu = np.asarray(target_mu, dtype=float)
    if mu.shape != (n,) or np.any(mu <= 0) or abs(mu.sum() - 1.0) > _TOL:
        raise DomainError("target_mu must be a strictly positive probability vector")
    nbr = (base.adjacency > 0).astype(float)
    Q = nbr / nbr.sum(axis=1)[:, None]
    # mu_x Q_xy min(1, mu_y Q_yx / (mu_x Q_xy)), written symmetrically
    W = np.minimum(mu[:, None] * Q, (mu[:, None] * Q).T)
    P = W / mu[:, None]
    np.fill_diagonal(P, 0.0)
    np.fill_diagonal(P, np.maximum(0.0, 1.0 - P.sum(axis=1)))
    return FiniteMarkovOperator(mu, P)


@dataclass
class MarkovProfile:
    """Exact ``h_P(k)``, ``hbar_P(k)`` with witnesses and the spectrum of ``I + P``."""

    h_values: dict = field(default_factory=dict)
    h_witnesses: dict = field(default_factory=dict)
    hbar_values: dict = field(default_factory=dict)
    hbar_witnesses: dict = field(default_factory=dict)
    lambda_bar: np.ndarray = None


def markov_profiles(op: FiniteMarkovOperator, kmax=None, budget=DEFAULT_BUDGET) -> MarkovProfile:
    n = op.n
    kmax = n if kmax is None else int(kmax)
    if not 1 <= kmax <= n:
        raise DomainError(f"kmax must lie in 1..{n}")
    for k in range(1, kmax + 1):
        for what, count in (("h_P", h_count(n, k)), ("hbar_P", hbar_count(n, k))):
            required = max(count, _dp_work(n))
            if required > budget:
                raise BudgetError(required, budget, f"{what}({k})")
    prof = MarkovProfile(lambda_bar=op.lambda_bar())
    prob = _Problem(op.flow, op.mu)
    ks = list(range(1, kmax + 1))
    for k, blocks in search_min_max_expansion(prob, ks).items():
        sp = Subpartition([ss.members(b) for b in blocks])
        prof.h_witnesses[k] = sp
        prof.h_values[k] = max(_expansion(op, p) for p in sp.parts)
    for k, pairs in search_max_min_dual(prob, ks).items():
        sb = SubBipartition(n, [(ss.members(a), ss.members(b)) for a, b in pairs])
        prof.hbar_witnesses[k] = sb
        prof.hbar_values[k] = min(_dual(op, a, b) for a, b in sb.pairs)
    return prof


@dataclass(frozen=True)
class HCIReport:
    """Per-``k`` upper bound check and lower-bound slack.

    ``upper[k]`` is ``2 (1 - hbar_P(k)) - lambda_bar_k`` (must be >= -tol);
    ``lower_slack[k]`` is ``lambda_bar_k - (1 - hbar_P(k))^2 / c_k`` with
    ``c_k = 4 (768 C)^2 k^6`` (``c_1 = 2``), reported only.
    """

    upper: dict
    lower_slack: dict
    tol: float

    @property
    def passed(self) -> bool:
        return all(v >= -self.tol for v in self.upper.values())


def check_markov_hci(op: FiniteMarkovOperator, kmax=None, budget=DEFAULT_BUDGET, tol: float = 1e-9) -> HCIReport:
    prof = markov_profiles(op, kmax, budget)
    lb = prof.lambda_bar
    upper, lower = {}, {}
    for k, hb in prof.hbar_values.items():
        upper[k] = float(2.0 * (1.0 - hb) - lb[k - 1])
        c = 2.0 if k == 1 else 4.0 * (768.0 * DIM_CONSTANT) ** 2 * k ** 6
        lower[k] = float(lb[k - 1] - (1.0 - hb) ** 2 / c)
    return HCIReport(upper, lower, tol)
