"""Batteries of inequality checks over graphs, cycles and a fixed corpus."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exact import DEFAULT_BUDGET, cheeger_profile, dual_cheeger_profile
from .exceptions import DomainError, PipelineError
from .graph import WeightedGraph, contract_edge, generate
from .projective import extract_sub_bipartition
from .spectral import dual_rayleigh, eigensystem, top_embedding

__all__ = [
    "CheckResult",
    "CorpusEntry",
    "default_corpus",
    "run_suite",
    "cycle_suite",
    "interlacing_check",
    "cycle_closed_forms",
    "summarize",
    "TOL_EIG",
    "TOL_COMB",
]

TOL_EIG = 1e-9
TOL_COMB = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """One inequality ``lhs <= rhs`` (up to ``tol``).

    Equalities are recorded as ``|a - b| <= 0``.  A check that could not be
    evaluated carries ``error``; when ``skipped`` is set the reason was the
    search budget and the check counts neither as pass nor as failure.
    """

    name: str
    k: int | None
    lhs: float
    rhs: float
    tol: float
    witness: tuple = ()
    error: str | None = None
    skipped: bool = False

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.error is None and self.slack >= -self.tol

    @property
    def failed(self) -> bool:
        return not self.skipped and not self.passed

    def to_dict(self) -> dict:
        d = asdict(self)
        d["witness"] = list(self.witness)
        d["slack"] = self.slack if self.error is None else None
        d["pass"] = self.passed
        for key in ("lhs", "rhs", "slack"):
            if d[key] is not None and not math.isfinite(d[key]):
                d[key] = None
        return d


def _check(name, k, lhs, rhs, tol, witness=()):
    return CheckResult(name, k, float(lhs), float(rhs), float(tol), tuple(witness))


def _equal(name, k, a, b, tol, witness=()):
    return _check(name, k, abs(float(a) - float(b)), 0.0, tol, witness)


def _skip(name, k, tol, err, skipped=True):
    return CheckResult(name, k, math.nan, math.nan, float(tol), (), str(err), skipped)


def summarize(checks) -> dict:
    checks = list(checks)
    return {
        "total": len(checks),
        "passed": sum(c.passed for c in checks),
        "failed": sum(c.failed for c in checks),
        "skipped": sum(c.skipped for c in checks),
    }


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str
    params: tuple
    seed: int = 0

    def graph(self) -> WeightedGraph:
        return generate(self.kind, self.params, self.seed)

    def manifest(self) -> dict:
        return {"name": self.name, "kind": self.kind, "params": list(self.params), "seed": self.seed}


def default_corpus() -> list:
    """Cycles, paths, small complete graphs, ``K_{2,3}``, ``Q_3``, 20 random
    weighted graphs on 4 to 8 vertices and 5 random trees."""
    out = [CorpusEntry(f"C{n}", "cycle", (n,)) for n in range(3, 11)]
    out += [CorpusEntry(f"P{n}", "path", (n,)) for n in range(2, 11)]
    out += [CorpusEntry(f"K{n}", "complete", (n,)) for n in range(2, 7)]
    out.append(CorpusEntry("K2,3", "complete_bipartite", (2, 3)))
    out.append(CorpusEntry("Q3", "hypercube", (3,)))
    for s in range(20):
        n = 4 + s % 5
        out.append(CorpusEntry(f"rand{s}", "random_connected_weighted", (n, 0.5, 0.1, 10.0), s))
    for s in range(5):
        out.append(CorpusEntry(f"tree{s}", "random_tree", (6 + s,), s))
    return out


def run_suite(g: WeightedGraph, kmax=None, budget=DEFAULT_BUDGET, tol_eig=TOL_EIG, tol_comb=TOL_COMB,
              seed=None, eigen=None, profiles=None) -> list:
    """Every universal inequality between spectrum and exact constants, per ``k``.

    With ``seed`` given, the clustering pipeline is also run for each
    ``k <= n/2`` and its certificate and feasibility are checked.
    ``profiles`` may carry precomputed ``(CheegerProfile, DualCheegerProfile)``.
    """
    n = g.n
    kmax = min(n, 8) if kmax is None else min(int(kmax), n)
    es = eigensystem(g) if eigen is None else eigen
    lam = es.values
    if profiles is None:
        hp = cheeger_profile(g, kmax, budget)
        dp = dual_cheeger_profile(g, kmax, budget, star=True)
    else:
        hp, dp = profiles
    H, HB, HS = hp.values, dp.values, dp.star_values

    def top(k):  # lambda_{N-k+1}
        return lam[n - k]

    def miss(k, *tables):
        for vals, skipped in tables:
            if k not in vals:
                return skipped.get(k, f"value for k={k} unavailable")
        return None

    bip = g.is_bipartite()
    out = []
    for k in range(1, kmax + 1):
        hb_missing = miss(k, (HB, dp.skipped))
        if hb_missing is None:
            out.append(_check("dual_cheeger_upper", k, 2.0 - top(k), 2.0 * (1.0 - HB[k]), tol_eig, [f"hbar:{k}"]))
        else:
            out.append(_skip("dual_cheeger_upper", k, tol_eig, hb_missing))
        err = miss(k, (HS, dp.star_skipped))
        if err is None:
            out.append(_check("star_dual_lower", k, 2.0 * HS[k], top(k), tol_eig, [f"hbar_star:{k}"]))
        else:
            out.append(_skip("star_dual_lower", k, tol_eig, err))
        err = miss(k, (H, hp.skipped), (HB, dp.skipped))
        if err is None:
            w = [f"h:{k}", f"hbar:{k}"]
            out.append(_check("sum_upper", k, H[k] + HB[k], 1.0, tol_comb, w))
            out.append(_check("half_lower", k, 0.5 * (1.0 - H[k]), HB[k], tol_comb, w))
            if bip:
                out.append(_equal("bipartite_sum", k, H[k] + HB[k], 1.0, tol_eig, w))
        else:
            for name in ("sum_upper", "half_lower") + (("bipartite_sum",) if bip else ()):
                out.append(_skip(name, k, tol_comb, err))
        if k < kmax:
            err = miss(k, (H, hp.skipped)) or miss(k + 1, (H, hp.skipped))
            out.append(_check("h_monotone", k, H[k], H[k + 1], tol_comb) if err is None
                       else _skip("h_monotone", k, tol_comb, err))
            err = miss(k, (HB, dp.skipped)) or miss(k + 1, (HB, dp.skipped))
            out.append(_check("hbar_monotone", k, HB[k + 1], HB[k], tol_comb) if err is None
                       else _skip("hbar_monotone", k, tol_comb, err))
        if bip:
            out.append(_equal("bipartite_spectrum", k, lam[k - 1] + top(k), 2.0, tol_eig))
        F = top_embedding(es, k)
        out.append(_check("rayleigh_top", k, dual_rayleigh(g, F.columns), 2.0 - top(k), tol_eig))
        if seed is not None and 2 * k <= n:
            out.extend(_pipeline_checks(g, k, seed, es, HB.get(k), tol_eig, tol_comb))
    return out


def _pipeline_checks(g, k, seed, es, hbar, tol_eig, tol_comb):
    try:
        sb, cert = extract_sub_bipartition(g, k, seed=seed, eigen=es)
    except PipelineError as exc:
        return [_skip("pipeline_certificate", k, tol_eig, f"{exc} {exc.stats}", skipped=False)]
    out = [_check("pipeline_certificate", k, max(p.lhs for p in cert.pairs), cert.bound, tol_eig,
                  [f"cluster:{k}"])]
    if hbar is not None:
        out.append(_check("pipeline_feasible", k, min(p.phibar for p in cert.pairs), hbar, tol_comb,
                          [f"cluster:{k}", f"hbar:{k}"]))
    return out


def cycle_closed_forms(N: int):
    """Closed-form ``lambda``, ``h`` and ``hbar`` of the unweighted cycle, indexed from 1."""
    lam = {k: 1.0 - math.cos(2.0 * math.pi * (k // 2) / N) for k in range(1, N + 1)}
    h = {k: (0.0 if k == 1 else 1.0 / (N // k)) for k in range(1, N + 1)}
    hb = {k: 1.0 - h[k] for k in range(2, N + 1)}
    hb[1] = (N - 1) / N if N % 2 else 1.0
    return lam, h, hb


def _c1(k):
    return 1.0 if k % 2 == 0 else math.pi / 9.0


def _c2(N, k):
    return math.pi / 9.0 if (N - k + 1) % 2 == 0 else 1.0


def _c3(N, k):
    j = N - k + 1
    return 0.5 if (j % 2 == 1 or j in (N - 1, N)) else 1.0 / 48.0


def cycle_suite(Nmax_brute=10, Nmax_spectral=64, tol_eig=TOL_EIG, tol_comb=TOL_COMB,
                budget=DEFAULT_BUDGET, Nmin=3) -> list:
    """Closed forms and the two-sided cycle inequalities with their stated constants.

    Exact constants come from the search for ``N <= Nmax_brute`` and from
    the closed forms beyond; eigenvalues always come from the eigensolver.
    """
    out = []
    half_pi2 = math.pi ** 2 / 2.0
    for N in range(Nmin, Nmax_spectral + 1):
        g = generate("cycle", (N,))
        lam = eigensystem(g).values
        lam_c, h_c, hb_c = cycle_closed_forms(N)
        brute = N <= Nmax_brute
        if brute:
            h = cheeger_profile(g, N, budget).values
            hb = dual_cheeger_profile(g, N, budget, star=False).values
        else:
            h, hb = h_c, hb_c
        tag = f"C{N}"
        for k in range(1, N + 1):
            out.append(_equal("cycle_eigenvalue", k, lam[k - 1], lam_c[k], tol_eig, [tag]))
            if brute:
                out.append(_equal("cycle_h_closed_form", k, h[k], h_c[k], tol_comb, [tag]))
                out.append(_equal("cycle_hbar_closed_form", k, hb[k], hb_c[k], tol_comb, [tag]))
                if N % 2 == 1 and k >= 2:
                    out.append(_equal("odd_cycle_sum", k, h[k] + hb[k], 1.0, tol_comb, [tag]))
            top = 2.0 - lam[N - k]
            gap = (1.0 - hb[k]) ** 2
            out.append(_check("cycle_hci_lower", k, _c1(k) * h[k] ** 2, lam[k - 1], tol_eig, [tag]))
            out.append(_check("cycle_hci_upper", k, lam[k - 1], half_pi2 * h[k] ** 2, tol_eig, [tag]))
            out.append(_check("cycle_dual_lower", k, _c2(N, k) * gap, top, tol_eig, [tag]))
            out.append(_check("cycle_dual_upper", k, top, half_pi2 * gap, tol_eig, [tag]))
            if brute:
                prev = hb[max(k - 1, 1)]
                out.append(_check("cycle_shifted_dual", k, _c3(N, k) * (1.0 - prev) ** 2, top, tol_eig, [tag]))
    return out


def interlacing_check(N: int, tol=TOL_EIG) -> CheckResult:
    """Contracting one edge of ``C_N`` does not lower any of the first ``N-1`` eigenvalues."""
    if N < 4:
        raise DomainError("interlacing check needs N >= 4")
    g = generate("cycle", (N,))
    lam = eigensystem(g).values
    lam2 = eigensystem(contract_edge(g, 0, 1)).values
    worst = float(np.max(lam[: N - 1] - lam2))
    return _check("contraction_interlacing", None, worst, 0.0, tol, [f"C{N}", f"C{N - 1}"])
