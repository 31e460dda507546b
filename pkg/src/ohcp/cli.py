"""Command-line front end: ``ohcp homology|solve|tu|neutralization|fixtures``.

Every subcommand prints (or writes with ``--out``) one JSON report.  Reports
contain no clocks, hostnames or absolute paths unless ``--timing`` is given,
so repeated runs over the same files are byte-identical.

Exit codes: 0 success, 2 unreadable or malformed input, 3 a search budget
ran out, 4 an internal consistency check failed.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__, fixtures
from .complex import Chain, boundary_matrix
from .linalg import homology
from .lp import formulate
from .neutral import (DEFAULT_BUDGET, DEFAULT_RADIUS, decide_by_definition, decide_by_projection,
                      h1_trivial_shortcut)
from .report import (certificate_json, digest, dumps, homology_json, neutralization_json, rational,
                     solution_json)
from .simplex import DEFAULT_VERTEX_LIMIT, brute_force_optimum, enumerate_optimal_vertices, solve
from .textio import ParseError, parse_chain, parse_complex, parse_weights, read_text
from .tu import SearchBudgetExceeded, brute_force_mntus, search_mntus

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4
ORACLE_MAX_COLUMNS = 20  # the support enumeration grows like C(columns, rows)


class BudgetExhausted(RuntimeError):
    """Raised after a report has been emitted for a run that hit its budget."""


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative_rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"weight must be nonnegative, got {text}")
    return value


def _load(path: str) -> str:
    try:
        return read_text(path)
    except OSError as exc:
        raise ParseError(path, 0, path, f"cannot read file: {exc.strerror}") from None


def _complex(path: str):
    text = _load(path)
    return text, parse_complex(text, source=path)


def _dimension(K, value: Optional[int], name: str, default: int, low: int) -> int:
    d = default if value is None else value
    if not low <= d <= K.dimension:
        raise ParseError(name, 0, str(d), f"dimension must lie in [{low}, {K.dimension}]")
    return d


def _header(args, texts: list[str]) -> dict:
    return {"tool": "ohcp", "version": __version__, "command": args.command,
            "input_digest": digest(*texts)}


def _emit(args, report: dict, started: float) -> None:
    if getattr(args, "timing", False):
        report["timing_seconds"] = round(time.perf_counter() - started, 6)
    text = dumps(report)
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# Subcommands


def cmd_homology(args) -> dict:
    text, K = _complex(args.complex)
    dims = [args.p] if args.p is not None else list(range(K.dimension + 1))
    for p in dims:
        _dimension(K, p, "--p", 0, 0)
    report = _header(args, [text])
    report["f_vector"] = list(K.f_vector())
    report["homology"] = {str(p): homology_json(homology(K, p)) for p in dims}
    return report


def _weights(args, K, p) -> tuple[list[Fraction], str]:
    if args.weights:
        text = _load(args.weights)
        return parse_weights(text, K, p, source=args.weights), text
    uniform = args.uniform_weight if args.uniform_weight is not None else Fraction(1)
    return [uniform] * K.count(p), f"uniform {uniform}"


def cmd_solve(args) -> dict:
    text, K = _complex(args.complex)
    ctext = _load(args.chain)
    p = _dimension(K, args.p, "--p", 1 if K.dimension >= 2 else 0, 0)
    if p + 1 > K.dimension:
        raise ParseError("--p", 0, str(p), f"no {p + 1}-simplices to fill with")
    chain = parse_chain(ctext, K, p, source=args.chain)
    w, wtext = _weights(args, K, p)
    inst = formulate(K, p, chain, w)
    res = solve(inst)
    census = enumerate_optimal_vertices(inst, args.budget)
    report = _header(args, [text, ctext, wtext])
    report.update({
        "p": p,
        "objective": rational(res.objective),
        "optimal": solution_json(K, p, res.solution),
        "census": {
            "vertices": len(census.vertices),
            "integral": sum(1 for z in census.vertices if z.is_integral()),
            "limit": args.budget,
            "limit_hit": census.limit_hit,
            "chains": [solution_json(K, p, z)["chain"] for z in census.vertices],
        },
    })
    if args.oracle and inst.size > ORACLE_MAX_COLUMNS:
        report["oracle"] = {"skipped": f"more than {ORACLE_MAX_COLUMNS} LP columns"}
    elif args.oracle:
        best = brute_force_optimum(inst)
        if best != res.objective:
            raise AssertionError(f"oracle optimum {best} differs from solver optimum {res.objective}")
        report["oracle"] = {"objective": rational(best), "agrees": True}
    if census.limit_hit:
        _emit(args, report, args.started)
        raise BudgetExhausted("optimal vertex census hit its limit")
    return report


def cmd_tu(args) -> dict:
    text, K = _complex(args.complex)
    q = _dimension(K, args.q, "--q", min(2, K.dimension), 1)
    B = boundary_matrix(K, q).dense()
    report = _header(args, [text])
    search = search_mntus(B, args.budget, raise_on_budget=False)
    certs = search.certificates
    report.update({
        "q": q,
        "rows": len(B),
        "columns": len(B[0]) if B else 0,
        "complete": search.complete,
        "totally_unimodular": (not certs) if search.complete else None,
        "mntus": [certificate_json(K, q, c, B) for c in certs],
    })
    if args.oracle:
        brute = sorted(brute_force_mntus(B))
        mine = sorted((c.rows, c.cols) for c in certs)
        if brute != mine:
            raise AssertionError("circuit search and determinant scan disagree on the MNTU list")
        report["oracle"] = {"mntus": len(brute), "agrees": True}
    if not search.complete:
        _emit(args, report, args.started)
        raise BudgetExhausted("MNTU search budget exhausted")
    return report


def cmd_neutralization(args) -> dict:
    text, K = _complex(args.complex)
    q = _dimension(K, args.q, "--q", min(2, K.dimension), 1)
    B = boundary_matrix(K, q).dense()
    report = _header(args, [text])
    report["q"] = q
    verdicts = {}
    if args.procedure in ("projection", "both"):
        rep = decide_by_projection(K, q, args.budget)
        report["projection"] = neutralization_json(K, rep, B)
        verdicts["projection"] = rep.verdict
    if args.procedure in ("definition", "both"):
        rep = decide_by_definition(K, q, args.radius, args.budget)
        report["definition"] = neutralization_json(K, rep, B)
        verdicts["definition"] = rep.verdict
    if q == 2 and K.dimension == 2:
        shortcut = h1_trivial_shortcut(K)
        report["h1_shortcut"] = shortcut
        if shortcut is not None:
            verdicts["h1_shortcut"] = "yes"
    definite = {v if v != "yes (vacuous)" else "yes" for v in verdicts.values() if v != "unknown"}
    if len(definite) > 1:
        raise AssertionError(f"contradictory verdicts: {verdicts}")
    report["verdict"] = (next(iter(definite)) if definite else "unknown")
    if "yes (vacuous)" in verdicts.values():
        report["verdict"] = "yes (vacuous)"
    if report["verdict"] == "unknown" and verdicts.get("projection") == "unknown":
        _emit(args, report, args.started)
        raise BudgetExhausted("no definite verdict within the budget")
    return report


def cmd_fixtures(args) -> dict:
    out = Path(args.output_dir)
    manifest = fixtures.write_corpus(out)
    report = {"tool": "ohcp", "version": __version__, "command": "fixtures",
              "written": sorted(f["file"] for f in manifest["fixtures"])}
    if args.check:
        results = fixtures.verify_corpus(out, budget=args.budget, radius=args.radius)
        report["check"] = results
        failed = [r["name"] for r in results if not r["ok"]]
        if failed:
            raise AssertionError(f"fixture expectations failed: {', '.join(failed)}")
    return report


# --------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ohcp", description="Optimal homologous chains and NTU neutralization.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write the JSON report here instead of stdout")
    common.add_argument("--timing", action="store_true",
                        help="add wall-clock timing (makes the report run-dependent)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed recorded for randomized runs (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[common], help="integral homology via Smith normal form")
    p.add_argument("complex")
    p.add_argument("--p", type=int, help="dimension (default: all)")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("solve", parents=[common], help="solve the OHCP linear program")
    p.add_argument("complex")
    p.add_argument("chain")
    p.add_argument("--p", type=int, help="chain dimension (default 1)")
    weights = p.add_mutually_exclusive_group()
    weights.add_argument("--weights", metavar="FILE")
    weights.add_argument("--uniform-weight", type=_nonnegative_rational, metavar="R")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_VERTEX_LIMIT,
                   help="optimal-vertex census limit")
    p.add_argument("--oracle", action="store_true", help="cross-check with brute-force enumeration")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("tu", parents=[common], help="total unimodularity and MNTU submatrices")
    p.add_argument("complex")
    p.add_argument("--q", type=int, help="boundary dimension (default 2)")
    p.add_argument("--budget", type=_positive_int, default=2_000_000)
    p.add_argument("--oracle", action="store_true", help="cross-check with a determinant scan")
    p.set_defaults(func=cmd_tu)

    p = sub.add_parser("neutralization", parents=[common], help="decide NTU neutralization")
    p.add_argument("complex")
    p.add_argument("--q", type=int, help="boundary dimension (default 2)")
    p.add_argument("--radius", type=_positive_int, default=DEFAULT_RADIUS)
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    p.add_argument("--procedure", choices=("projection", "definition", "both"), default="both")
    p.set_defaults(func=cmd_neutralization)

    p = sub.add_parser("fixtures", parents=[common], help="write the built-in fixture corpus")
    p.add_argument("output_dir")
    p.add_argument("--check", action="store_true", help="re-verify every manifest expectation")
    p.add_argument("--radius", type=_positive_int, default=DEFAULT_RADIUS)
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.started = time.perf_counter()
    try:
        report = args.func(args)
    except ParseError as exc:
        print(f"ohcp: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BudgetExhausted, SearchBudgetExceeded) as exc:
        print(f"ohcp: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except AssertionError as exc:
        print(f"ohcp: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"ohcp: invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    _emit(args, report, args.started)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
