"""Command-line interface.

Exit codes: 0 all checks pass, 1 some inequality or certificate failed,
2 bad input, 3 a search exceeded its budget.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys

from . import __version__
from .exact import DEFAULT_BUDGET, cheeger_profile, dual_cheeger_profile
from .exceptions import BudgetError, DomainError, ParseError, PipelineError
from .graph import GENERATOR_KINDS, generate
from .io import dumps_report, format_edge_list, format_weight, read_edge_list
from .markov import FiniteMarkovOperator, check_markov_hci, from_graph, markov_profiles, metropolis
from .projective import extract_sub_bipartition
from .spectral import eigensystem
from .verify import (
    TOL_COMB,
    TOL_EIG,
    cycle_suite,
    default_corpus,
    interlacing_check,
    run_suite,
    summarize,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _seed(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--kmax", type=_positive_int, default=None, help="largest k (default min(N, 8))")
    common.add_argument("--budget", type=float, default=DEFAULT_BUDGET)
    common.add_argument("--tol-eig", type=float, default=TOL_EIG)
    common.add_argument("--tol-comb", type=float, default=TOL_COMB)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("-o", "--out", default=None, help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="dualcheeger", description="Multi-way (dual) Cheeger analysis of small graphs.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a generated graph as an edge list")
    g.add_argument("kind", choices=GENERATOR_KINDS)
    g.add_argument("params", nargs="*")

    for name, text in (("spectrum", "normalized Laplacian spectrum"),
                       ("cheeger", "exact multi-way Cheeger constants"),
                       ("dual-cheeger", "exact multi-way dual Cheeger constants")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("input")

    c = sub.add_parser("cluster", parents=[common], help="certified k-sub-bipartition")
    c.add_argument("input")
    c.add_argument("-k", type=_positive_int, default=1)
    c.add_argument("--max-attempts", type=_positive_int, default=1000)

    v = sub.add_parser("verify", parents=[common], help="run every inequality check")
    v.add_argument("input", nargs="?")
    v.add_argument("--corpus", action="store_true", help="use the built-in corpus")
    v.add_argument("--cycles", action="store_true", help="add the cycle suite and interlacing checks")

    m = sub.add_parser("markov", parents=[common], help="reversible chain constants and spectrum")
    m.add_argument("input", nargs="?", help="edge list defining the chain")
    m.add_argument("--walk", choices=("simple", "metropolis"), default="simple")
    m.add_argument("--chain", default=None, help="JSON file with 'mu' and 'kernel'")
    return p


# ------------------------------------------------------------------ helpers


def _kmax(args, n):
    return min(n, 8) if args.kmax is None else min(args.kmax, n)


def _tolerances(args):
    return {"eig": args.tol_eig, "comb": args.tol_comb}


def _graph_info(g, path=None):
    return {"n": g.n, "edges": g.num_edges, "source": path}


def _lists(sets):
    return [sorted(int(v) for v in s) for s in sets]


def _pairs(sb):
    return [[sorted(a), sorted(b)] for a, b in sb.pairs]


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format_weight(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _text(rows):
    return "".join(" ".join(str(x) for x in r) + "\n" for r in rows)


def _output(args, doc, header, rows):
    if args.format == "json":
        _emit(args, dumps_report(doc))
    elif args.format == "csv":
        _emit(args, _csv(header, rows))
    else:
        _emit(args, _text([header] + list(rows)))


def _exit_for(checks, budget_hit=False):
    s = summarize(checks)
    if s["failed"]:
        return EXIT_VIOLATION
    if s["skipped"] or budget_hit:
        return EXIT_BUDGET
    return EXIT_OK


# ----------------------------------------------------------------- commands


def cmd_gen(args):
    g = generate(args.kind, args.params, args.seed)
    header = f"{args.kind} {' '.join(args.params)} seed={args.seed}".replace("  ", " ")
    _emit(args, format_edge_list(g, [f"generated: {header}"]))
    return EXIT_OK


def cmd_spectrum(args):
    g = read_edge_list(args.input)
    lam = eigensystem(g).values
    doc = {"graph": _graph_info(g, args.input), "spectrum": lam, "seed": args.seed, "tolerances": _tolerances(args)}
    _output(args, doc, ["index", "lambda"], [(i + 1, float(x)) for i, x in enumerate(lam)])
    return EXIT_OK


def _budget_notes(skipped):
    return {str(k): str(e) for k, e in sorted(skipped.items())}


def cmd_cheeger(args):
    g = read_edge_list(args.input)
    prof = cheeger_profile(g, _kmax(args, g.n), args.budget)
    profiles = {k: {"h": v, "h_witness": _lists(prof.witnesses[k].parts)} for k, v in prof.values.items()}
    doc = {"graph": _graph_info(g, args.input), "profiles": profiles, "budget_exceeded": _budget_notes(prof.skipped),
           "seed": args.seed, "tolerances": _tolerances(args)}
    _output(args, doc, ["k", "h"], [(k, v) for k, v in prof.values.items()])
    for e in prof.skipped.values():
        print(f"budget: {e}", file=sys.stderr)
    return EXIT_BUDGET if prof.skipped else EXIT_OK


def cmd_dual_cheeger(args):
    g = read_edge_list(args.input)
    prof = dual_cheeger_profile(g, _kmax(args, g.n), args.budget, star=True)
    profiles = {}
    for k in sorted(set(prof.values) | set(prof.star_values)):
        entry = {}
        if k in prof.values:
            entry["hbar"] = prof.values[k]
            entry["hbar_witness"] = _pairs(prof.witnesses[k])
        if k in prof.star_values:
            entry["hbar_star"] = prof.star_values[k]
            entry["hbar_star_witness"] = _pairs(prof.star_witnesses[k])
        profiles[k] = entry
    skipped = {**{f"hbar({k})": e for k, e in prof.skipped.items()},
               **{f"hbar_star({k})": e for k, e in prof.star_skipped.items()}}
    doc = {"graph": _graph_info(g, args.input), "profiles": profiles,
           "budget_exceeded": {k: str(e) for k, e in sorted(skipped.items())},
           "seed": args.seed, "tolerances": _tolerances(args)}
    rows = [(k, e.get("hbar", ""), e.get("hbar_star", "")) for k, e in profiles.items()]
    _output(args, doc, ["k", "hbar", "hbar_star"], rows)
    for e in skipped.values():
        print(f"budget: {e}", file=sys.stderr)
    return EXIT_BUDGET if skipped else EXIT_OK


def _certificate_doc(sb, cert):
    return {
        "k": cert.k,
        "pairs": _pairs(sb),
        "phibar": [p.phibar for p in cert.pairs],
        "lhs": [p.lhs for p in cert.pairs],
        "rbar_localized": [p.rbar_psi for p in cert.pairs],
        "rbar_coordinate": [p.rbar_coordinate for p in cert.pairs],
        "coordinate": [p.coordinate for p in cert.pairs],
        "rbar_embedding": cert.rbar_F,
        "bound": cert.bound,
        "attempts": cert.attempts,
        "passed": cert.passed,
    }


def cmd_cluster(args):
    g = read_edge_list(args.input)
    if not 1 <= args.k <= g.n:
        raise DomainError(f"k must lie in 1..{g.n}")
    try:
        sb, cert = extract_sub_bipartition(g, args.k, seed=args.seed, max_partition_attempts=args.max_attempts)
    except PipelineError as exc:
        print(f"pipeline failed: {exc} {json.dumps(exc.stats, sort_keys=True, default=str)}", file=sys.stderr)
        return EXIT_VIOLATION
    doc = {"graph": _graph_info(g, args.input), "certificates": [_certificate_doc(sb, cert)], "seed": args.seed,
           "tolerances": _tolerances(args)}
    rows = [(i + 1, " ".join(map(str, a)), " ".join(map(str, b)), p.phibar)
            for i, ((a, b), p) in enumerate(zip(_pairs(sb), cert.pairs))]
    _output(args, doc, ["pair", "v1", "v2", "phibar"], rows)
    return EXIT_OK if cert.passed else EXIT_VIOLATION


def _graph_report(g, args, name, manifest=None):
    kmax = _kmax(args, g.n)
    es = eigensystem(g)
    hp = cheeger_profile(g, kmax, args.budget)
    dp = dual_cheeger_profile(g, kmax, args.budget, star=True)
    checks = run_suite(g, kmax, args.budget, args.tol_eig, args.tol_comb, seed=args.seed, eigen=es,
                       profiles=(hp, dp))
    profiles = {}
    for k in range(1, kmax + 1):
        e = {}
        if k in hp.values:
            e["h"], e["h_witness"] = hp.values[k], _lists(hp.witnesses[k].parts)
        if k in dp.values:
            e["hbar"], e["hbar_witness"] = dp.values[k], _pairs(dp.witnesses[k])
        if k in dp.star_values:
            e["hbar_star"], e["hbar_star_witness"] = dp.star_values[k], _pairs(dp.star_witnesses[k])
        profiles[k] = e
    certs = []
    for k in range(1, g.n // 2 + 1):
        if k > kmax:
            break
        try:
            certs.append(_certificate_doc(*extract_sub_bipartition(g, k, seed=args.seed, eigen=es)))
        except PipelineError as exc:
            certs.append({"k": k, "error": str(exc), "stats": exc.stats})
    graph = _graph_info(g, name)
    if manifest is not None:
        graph["manifest"] = manifest
    doc = {"graph": graph, "spectrum": es.values, "profiles": profiles,
           "checks": [c.to_dict() for c in checks], "certificates": certs}
    return doc, checks


def cmd_verify(args):
    if args.corpus == (args.input is not None):
        raise DomainError("give exactly one of an input file or --corpus")
    checks, graphs = [], []
    if args.corpus:
        for entry in default_corpus():
            doc, cs = _graph_report(entry.graph(), args, entry.name, entry.manifest())
            graphs.append(doc)
            checks.extend((entry.name, c) for c in cs)
    else:
        g = read_edge_list(args.input)
        doc, cs = _graph_report(g, args, args.input)
        graphs.append(doc)
        checks.extend((args.input, c) for c in cs)
    extra = []
    if args.cycles:
        extra = cycle_suite(tol_eig=args.tol_eig, tol_comb=args.tol_comb, budget=args.budget)
        extra += [interlacing_check(N, args.tol_eig) for N in range(4, 33)]
        checks.extend(("cycles", c) for c in extra)
    all_checks = [c for _, c in checks]
    doc = {"graphs": graphs, "cycle_checks": [c.to_dict() for c in extra], "summary": summarize(all_checks),
           "seed": args.seed, "tolerances": _tolerances(args)}
    rows = [(name, c.name, "" if c.k is None else c.k, c.lhs, c.rhs, c.slack, c.passed) for name, c in checks]
    _output(args, doc, ["graph", "check", "k", "lhs", "rhs", "slack", "pass"], rows)
    for name, c in checks:
        if c.failed:
            print(f"violation: {name} {c.name} k={c.k} lhs={c.lhs!r} rhs={c.rhs!r} {c.error or ''}", file=sys.stderr)
    return _exit_for(all_checks)


def _load_chain(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return FiniteMarkovOperator(data["mu"], data["kernel"])
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: chain file needs 'mu' and 'kernel': {exc}") from exc


def cmd_markov(args):
    if (args.chain is None) == (args.input is None):
        raise DomainError("give exactly one of an input edge list or --chain")
    if args.chain is not None:
        op, source = _load_chain(args.chain), args.chain
    else:
        g = read_edge_list(args.input)
        op = from_graph(g) if args.walk == "simple" else metropolis(g, seed=args.seed)
        source = args.input
    kmax = _kmax(args, op.n)
    try:
        prof = markov_profiles(op, kmax, args.budget)
        rep = check_markov_hci(op, kmax, args.budget, args.tol_eig)
    except BudgetError as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    profiles = {k: {"h_P": prof.h_values[k], "h_P_witness": _lists(prof.h_witnesses[k].parts),
                    "hbar_P": prof.hbar_values[k], "hbar_P_witness": _pairs(prof.hbar_witnesses[k]),
                    "lambda_bar": float(prof.lambda_bar[k - 1]),
                    "upper_slack": rep.upper[k], "lower_slack": rep.lower_slack[k]}
                for k in range(1, kmax + 1)}
    doc = {"chain": {"n": op.n, "source": source, "walk": args.walk if args.chain is None else "file",
                     "balance_residual": op.balance_residual()},
           "lambda_bar": prof.lambda_bar, "profiles": profiles, "passed": rep.passed,
           "seed": args.seed, "tolerances": _tolerances(args)}
    rows = [(k, e["lambda_bar"], e["h_P"], e["hbar_P"]) for k, e in profiles.items()]
    _output(args, doc, ["k", "lambda_bar", "h_P", "hbar_P"], rows)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


COMMANDS = {
    "gen": cmd_gen,
    "spectrum": cmd_spectrum,
    "cheeger": cmd_cheeger,
    "dual-cheeger": cmd_dual_cheeger,
    "cluster": cmd_cluster,
    "verify": cmd_verify,
    "markov": cmd_markov,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
