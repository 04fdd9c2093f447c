"""The eight acceptance criteria, each at its stated tolerance and time limit.

Every test records a one-line PASS/FAIL verdict in ``RESULTS``; the verdicts
are printed in the pytest terminal summary, or directly when this file is
run as a script.
"""
import math
import time

import numpy as np
import pytest

from dualcheeger.exact import cheeger_profile, dual_cheeger_profile, h_exact, hbar_exact
from dualcheeger.exceptions import BudgetError
from dualcheeger.graph import generate
from dualcheeger.markov import check_markov_hci, from_graph, markov_profiles, metropolis
from dualcheeger.projective import (
    DIM_CONSTANT,
    PipelineParams,
    ProjectiveSpace,
    cutoff_localize,
    extract_sub_bipartition,
    spreading_bound_check,
)
from dualcheeger.spectral import dual_rayleigh, eigensystem, rayleigh, top_embedding
from dualcheeger.sweep import cheeger_sweep, dual_sweep, sweep_bound
from dualcheeger.verify import cycle_suite, default_corpus, interlacing_check, run_suite, summarize

RESULTS = {}


def record(n, title, failures, elapsed, limit=None, detail=""):
    ok = not failures and (limit is None or elapsed < limit)
    timing = f"{elapsed:.1f}s" + (f" (limit {limit:.0f}s)" if limit else "")
    msg = f"criterion {n} {'PASS' if ok else 'FAIL'}: {title}; {len(failures)} violations; {timing}"
    if detail:
        msg += f"; {detail}"
    RESULTS[n] = msg
    print(msg)
    assert not failures, failures[:5]
    assert limit is None or elapsed < limit, f"took {elapsed:.1f}s"


@pytest.fixture(scope="module")
def corpus():
    return [(e.name, e.graph()) for e in default_corpus()]


def test_criterion_1_cycle_spectra():
    t0 = time.perf_counter()
    bad = []
    for N in range(3, 65):
        lam = eigensystem(generate("cycle", (N,))).values
        for k in range(1, N + 1):
            want = 1.0 - math.cos(2.0 * math.pi * (k // 2) / N)
            if not abs(lam[k - 1] - want) <= 1e-9:
                bad.append((N, k, lam[k - 1], want))
    record(1, "cycle spectra N=3..64 within 1e-9", bad, time.perf_counter() - t0, 10)


def test_criterion_2_cycle_constants():
    t0 = time.perf_counter()
    bad = []
    for N in range(3, 11):
        g = generate("cycle", (N,))
        h = cheeger_profile(g, N).values
        hb = dual_cheeger_profile(g, N, star=False).values
        for k in range(2, N + 1):
            if not abs(h[k] - 1.0 / (N // k)) <= 1e-12:
                bad.append(("h", N, k, h[k]))
            if not abs(hb[k] - (1.0 - 1.0 / (N // k))) <= 1e-12:
                bad.append(("hbar", N, k, hb[k]))
        want = (N - 1) / N if N % 2 else 1.0
        if not abs(hb[1] - want) <= 1e-12:
            bad.append(("hbar", N, 1, hb[1]))
    record(2, "cycle h(k), hbar(k) closed forms N=3..10 within 1e-12", bad, time.perf_counter() - t0, 120)


def test_criterion_3_complete_graphs():
    t0 = time.perf_counter()
    bad = []
    for n in (2, 3):
        g = generate("complete", (2 * n,))
        h, hb = h_exact(g, n)[0], hbar_exact(g, n)[0]
        if not abs(h - (2 * n - 2) / (2 * n - 1)) <= 1e-12:
            bad.append(("h", 2 * n, h))
        if not abs(hb - 1 / (2 * n - 1)) <= 1e-12:
            bad.append(("hbar", 2 * n, hb))
    record(3, "K4 and K6 h(n), hbar(n) within 1e-12", bad, time.perf_counter() - t0)


def test_criterion_4_universal_inequalities(corpus):
    t0 = time.perf_counter()
    bad, total, skipped = [], 0, 0
    for name, g in corpus:
        checks = run_suite(g)
        s = summarize(checks)
        total += s["total"]
        skipped += s["skipped"]
        bad += [(name, c.name, c.k, c.lhs, c.rhs) for c in checks if c.failed]
        # the top-k quotient bound (f) is part of run_suite as rayleigh_top
        assert any(c.name == "rayleigh_top" for c in checks)
    record(4, "universal inequality suite over the default corpus", bad, time.perf_counter() - t0, 600,
           f"{total} checks, {skipped} skipped for budget")


def test_criterion_5_cycle_suite():
    t0 = time.perf_counter()
    checks = cycle_suite(Nmax_brute=10, Nmax_spectral=64)
    checks += [interlacing_check(N) for N in range(4, 33)]
    bad = [(c.name, c.k, c.witness, c.lhs, c.rhs) for c in checks if not c.passed]
    record(5, "cycle inequalities with stated constants and contraction interlacing", bad,
           time.perf_counter() - t0, detail=f"{len(checks)} checks")


def test_criterion_6_pipeline_certification(corpus):
    t0 = time.perf_counter()
    bad, runs, hard = [], 0, 0
    factor = 2.0 * (768.0 * 4.0 * (math.log2(math.pi) - 0.5)) ** 2
    for name, g in corpus:
        es = eigensystem(g)
        lam = es.values
        dp = dual_cheeger_profile(g, g.n // 2, star=False)
        for k in range(1, g.n // 2 + 1):
            F = top_embedding(es, k).columns
            rbar = dual_rayleigh(g, F)
            bound = rbar if k == 1 else factor * k ** 6 * rbar
            for seed in range(10):
                runs += 1
                try:
                    sb, cert = extract_sub_bipartition(g, k, seed=seed, max_partition_attempts=1000, eigen=es)
                except Exception as exc:  # noqa: BLE001 - any failure counts against the criterion
                    hard += 1
                    bad.append((name, k, seed, repr(exc)))
                    continue
                sb.labels()  # raises unless the pairs are disjoint
                if sb.k != k or not cert.passed:
                    bad.append((name, k, seed, "invalid output"))
                for (a, b), p in zip(sb.pairs, cert.pairs):
                    lhs = 1.0 - math.sqrt(max(0.0, 1.0 - (1.0 - p.phibar) ** 2))
                    if not (a | b) or not lhs <= bound + 1e-9:
                        bad.append((name, k, seed, lhs, bound))
                if k in dp.values and not min(p.phibar for p in cert.pairs) <= dp.values[k] + 1e-12:
                    bad.append((name, k, seed, "above hbar"))
            if k == 1 and not abs(rbar - (2.0 - lam[-1])) <= 1e-9:
                bad.append((name, "rbar", rbar))
    record(6, "pipeline certificates, feasibility and zero retry exhaustion", bad, time.perf_counter() - t0,
           detail=f"{runs} runs, {hard} hard failures")


def _draw(corpus, seed, nmin=1):
    rng = np.random.default_rng(seed)
    pool = [(name, g) for name, g in corpus if g.n >= nmin]
    name, g = pool[int(rng.integers(len(pool)))]
    return rng, name, g


def test_criterion_7_property_suites(corpus):
    t0 = time.perf_counter()
    bad = []
    trials = 200
    spreading_applied = 0
    for t in range(trials):
        # threshold sweep
        rng, name, g = _draw(corpus, [7, 1, t])
        h = np.abs(rng.normal(size=g.n)) * (rng.random(g.n) > 0.3)
        h[int(rng.integers(g.n))] = 1.0
        _, phi = cheeger_sweep(g, h)
        R = rayleigh(g, h)
        if R <= 1 and not phi <= sweep_bound(R) + 1e-9:
            bad.append(("sweep", name, t))

        # dual sweep
        rng, name, g = _draw(corpus, [7, 2, t])
        f = rng.normal(size=g.n) * (rng.random(g.n) > 0.2)
        f[int(rng.integers(g.n))] = 1.0
        _, _, phibar = dual_sweep(g, f)
        Rb = dual_rayleigh(g, f)
        if Rb <= 1 and not 1.0 - phibar <= sweep_bound(Rb) + 1e-9:
            bad.append(("dual_sweep", name, t))

        # spreading: a ball of radius r/2 has diameter at most r
        rng, name, g = _draw(corpus, [7, 3, t])
        k = int(rng.integers(1, g.n + 1))
        Fm = top_embedding(eigensystem(g), k)
        sp = ProjectiveSpace(Fm, g.degrees)
        r = float(rng.uniform(0.05, 0.95))
        c = int(rng.integers(sp.m))
        S = sp.points[sp.rows(c)[0] <= r / 2]
        rep = spreading_bound_check(g, Fm, S, r)
        spreading_applied += rep.applies
        if not rep.applies or not rep.passed:
            bad.append(("spreading", name, t, rep))

        # per-edge localization
        rng, name, g = _draw(corpus, [7, 4, t])
        k = int(rng.integers(1, g.n + 1))
        Fm = top_embedding(eigensystem(g), k)
        sp = ProjectiveSpace(Fm, g.degrees)
        T = sp.points[rng.random(sp.m) < 0.4]
        if len(T) == 0:
            T = sp.points[:1]
        eps = float(rng.uniform(0.01, 1.99))
        psi = cutoff_localize(Fm, T, eps, sp)
        cols = np.asarray(Fm.columns)
        for u, v, _ in g.edges:
            if not np.linalg.norm(psi[u] + psi[v]) <= (1 + 2 / eps) * np.linalg.norm(cols[u] + cols[v]) + 1e-12:
                bad.append(("localization", name, t, u, v))

        # rough metric: triangle inequality and diameter
        rng, name, g = _draw(corpus, [7, 5, t])
        k = int(rng.integers(1, g.n + 1))
        sp = ProjectiveSpace(top_embedding(eigensystem(g), k), g.degrees)
        D = sp.matrix
        i, j, l = rng.integers(sp.m, size=(3, 1000))
        if np.any(D[i, l] > D[i, j] + D[j, l] + 1e-12):
            bad.append(("triangle", name, t))
        if D.max() > math.sqrt(2) + 1e-12:
            bad.append(("diameter", name, t))

        # cluster mass and separation
        rng, name, g = _draw(corpus, [7, 6, t], nmin=4)
        k = int(rng.integers(2, g.n // 2 + 1))
        es = eigensystem(g)
        _, cert = extract_sub_bipartition(g, k, seed=t, eigen=es)
        sp = ProjectiveSpace(top_embedding(es, k), g.degrees)
        sep = 2.0 * PipelineParams.for_k(k).pad_radius
        for a in range(k):
            Ta = cert.clusters[a]
            if not Ta or not sp.mass(Ta) >= sp.total_mass / (2 * k) - 1e-12:
                bad.append(("mass", name, t, a))
            d = sp.distance_to_set(Ta)
            for b in range(a + 1, k):
                Tb = [sp.index[v] for v in cert.clusters[b]]
                if not d[Tb].min() >= sep - 1e-12:
                    bad.append(("separation", name, t, a, b, float(d[Tb].min()), sep))
    record(7, "property suites (sweep, dual sweep, spreading, localization, metric, clusters)", bad,
           time.perf_counter() - t0, detail=f"{trials} trials per suite")


def _markov_kmax(op, kmax):
    while kmax >= 1:
        try:
            return markov_profiles(op, kmax), kmax
        except BudgetError:
            kmax -= 1
    raise AssertionError("no k within budget")


def test_criterion_8_markov(corpus):
    t0 = time.perf_counter()
    bad = []
    for name, g in corpus:
        prof, kmax = _markov_kmax(from_graph(g), min(g.n, 8))
        dp = dual_cheeger_profile(g, kmax, star=False)
        lam = eigensystem(g).values
        for k in range(1, kmax + 1):
            if k in dp.values and not abs(prof.hbar_values[k] - dp.values[k]) <= 1e-12:
                bad.append(("hbar_P", name, k))
            if not abs(prof.lambda_bar[k - 1] - (2.0 - lam[g.n - k])) <= 1e-9:
                bad.append(("lambda_bar", name, k))
    for seed in range(10):
        n = 3 + seed % 6
        op = metropolis(generate("random_connected_weighted", (n,), seed), seed=seed)
        if not (op.balance_residual() <= 1e-12 and op.stochastic_residual() <= 1e-12):
            bad.append(("balance", seed))
        prof = markov_profiles(op)
        for k in range(1, n + 1):
            if not prof.h_values[k] + prof.hbar_values[k] <= 1.0 + 1e-12:
                bad.append(("sum", seed, k))
        rep = check_markov_hci(op, tol=1e-9)
        if not rep.passed:
            bad.append(("upper", seed, rep.upper))
    record(8, "Markov correspondence, detailed balance, sum bound and upper bound", bad,
           time.perf_counter() - t0, 120)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
