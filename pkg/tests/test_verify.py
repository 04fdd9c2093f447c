import math

import pytest

from dualcheeger.exceptions import DomainError
from dualcheeger.graph import generate
from dualcheeger.verify import (
    CheckResult,
    cycle_closed_forms,
    cycle_suite,
    default_corpus,
    interlacing_check,
    run_suite,
    summarize,
)


def test_check_result():
    c = CheckResult("x", 1, 1.0, 2.0, 1e-9)
    assert c.slack == 1.0 and c.passed and not c.failed
    bad = CheckResult("x", 1, 2.0, 1.0, 1e-9)
    assert bad.failed and bad.to_dict()["pass"] is False
    skip = CheckResult("x", 1, math.nan, math.nan, 1e-9, error="budget", skipped=True)
    assert not skip.passed and not skip.failed
    assert summarize([c, bad, skip]) == {"total": 3, "passed": 1, "failed": 1, "skipped": 1}


def test_corpus_shape():
    corpus = default_corpus()
    names = [e.name for e in corpus]
    assert len(names) == len(set(names)) == 8 + 9 + 5 + 2 + 20 + 5
    assert all(e.graph().n <= 10 for e in corpus)
    assert all(e.graph().is_connected() for e in corpus)
    assert corpus[0].manifest() == {"name": "C3", "kind": "cycle", "params": [3], "seed": 0}
    # regenerating from the manifest is deterministic
    assert all(e.graph() == e.graph() for e in corpus)


@pytest.mark.parametrize("name", ["C7", "K2,3", "Q3", "rand4"])
def test_run_suite_passes(corpus, name):
    g = dict(corpus)[name]
    checks = run_suite(g, seed=0)
    assert checks and all(c.passed for c in checks)
    names = {c.name for c in checks}
    assert {"dual_cheeger_upper", "star_dual_lower", "sum_upper", "half_lower", "rayleigh_top",
            "pipeline_certificate", "pipeline_feasible"} <= names
    assert ("bipartite_sum" in names) == g.is_bipartite()


def test_run_suite_budget_skips():
    checks = run_suite(generate("cycle", (16,)), kmax=3, budget=1e6)
    s = summarize(checks)
    assert s["failed"] == 0 and s["skipped"] > 0


def test_closed_forms():
    lam, h, hb = cycle_closed_forms(6)
    assert lam[6] == pytest.approx(2.0) and h[2] == pytest.approx(1 / 3) and hb[1] == 1.0
    assert cycle_closed_forms(5)[2][1] == pytest.approx(0.8)


def test_cycle_suite_small():
    checks = cycle_suite(Nmax_brute=7, Nmax_spectral=12)
    assert summarize(checks)["failed"] == 0
    assert {"cycle_eigenvalue", "cycle_shifted_dual", "odd_cycle_sum"} <= {c.name for c in checks}


def test_interlacing():
    assert all(interlacing_check(N).passed for N in range(4, 12))
    with pytest.raises(DomainError):
        interlacing_check(3)
