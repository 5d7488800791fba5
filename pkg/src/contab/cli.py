"""Command line front end: prove one file, benchmark a corpus, check a proof.

Exit codes: 0 proved (or proof accepted), 1 not proved (or proof rejected),
2 bad input.  The prove subcommand prints one SZS-style status line; proof
output and machine-readable statistics are opt-in flags so the default mode
stays one-line quiet.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys
import time
from typing import Optional

from . import __version__
from .bench import (format_summary, run_problem, run_suite, summarize,
                    write_csv)
from .clausify import PreprocessOptions, problem_to_matrix
from .errors import InputError, ProverInternalError
from .figures import save_report_figures
from .proof import check, parse_machine, proof_digest, render_machine, \
    render_text
from .search import (LIMIT_REACHED, NO_PROOF_POSSIBLE, PROVED, STRATEGIES,
                     SearchOptions, prove)
from .tptp import parse_problem_file

EXIT_PROVED = 0
EXIT_NOT_PROVED = 1
EXIT_INPUT_ERROR = 2

ALL_STRATEGIES = tuple(STRATEGIES)


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--start", choices=("conjecture", "positive", "all"),
                   default="conjecture",
                   help="start clause selection rule (default: conjecture, "
                        "falling back to positive clauses when the problem "
                        "has no conjecture)")
    p.add_argument("--eq-axioms", action="store_true",
                   help="accept '=' and add equality axioms "
                        "(reflexivity, symmetry, transitivity, congruence)")
    p.add_argument("--include-root", metavar="DIR", default=None,
                   help="directory against which include() paths resolve "
                        "(default: the including file's directory)")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="contab",
        description="connection tableaux prover with backtracking cuts")
    ap.add_argument("--version", action="version",
                    version="contab %s" % __version__)
    sub = ap.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("prove", help="prove one TPTP FOF file")
    pp.add_argument("file", help="TPTP problem file")
    pp.add_argument("--cuts", choices=ALL_STRATEGIES, default="rex",
                    help="backtracking cut strategy (default: rex)")
    pp.add_argument("--timeout", type=float, default=10.0, metavar="SECONDS",
                    help="wall clock budget, 0 disables (default: 10)")
    pp.add_argument("--proof", choices=("none", "text", "machine"),
                    default="none", help="print the proof after the status "
                                         "line (default: none)")
    pp.add_argument("--stats", metavar="FILE", default=None,
                    help="write run statistics as JSON ('-' for stdout)")
    pp.add_argument("--max-path-limit", type=int, default=None, metavar="N",
                    help="stop deepening beyond this path limit")
    _add_input_flags(pp)

    bp = sub.add_parser("bench", help="run strategies over a corpus")
    bp.add_argument("corpus", help="directory of .p files, or one .p file")
    bp.add_argument("--cuts", default=",".join(ALL_STRATEGIES),
                    metavar="LIST",
                    help="comma separated strategies (default: all six)")
    bp.add_argument("--timeout", type=float, default=10.0, metavar="SECONDS",
                    help="per-run wall clock budget, 0 disables "
                         "(default: 10)")
    bp.add_argument("--jobs", type=int, default=1, metavar="N",
                    help="worker processes (default: 1)")
    bp.add_argument("--out-dir", default="bench_out", metavar="DIR",
                    help="where results.csv and figures go "
                         "(default: bench_out)")
    bp.add_argument("--no-figures", action="store_true",
                    help="skip figure rendering")
    bp.add_argument("--max-path-limit", type=int, default=None, metavar="N",
                    help="stop deepening beyond this path limit")
    _add_input_flags(bp)

    cp = sub.add_parser("check", help="check a machine-format proof")
    cp.add_argument("file", help="TPTP problem file the proof is for")
    cp.add_argument("proof", help="proof file in machine format")
    _add_input_flags(cp)
    return ap


def _szs(status: str, path: str) -> str:
    return "% SZS status " + status + " for " + os.path.basename(path)


def _load_matrix(args: argparse.Namespace):
    problem = parse_problem_file(args.file, include_root=args.include_root)
    return problem_to_matrix(problem, PreprocessOptions(
        equality_axioms=args.eq_axioms, start_clause_rule=args.start))


def _cmd_prove(args: argparse.Namespace) -> int:
    began = time.perf_counter()
    matrix = _load_matrix(args)
    opts = SearchOptions(max_path_limit=args.max_path_limit)
    if args.timeout and args.timeout > 0:
        opts.deadline = time.monotonic() + args.timeout
    outcome = prove(matrix, STRATEGIES[args.cuts], opts)
    wall = time.perf_counter() - began

    if outcome.status == PROVED:
        szs = "Theorem"
    elif outcome.status == NO_PROOF_POSSIBLE:
        szs = "CounterSatisfiable"
    elif outcome.status == LIMIT_REACHED and outcome.reason == "deadline":
        szs = "Timeout"
    else:
        szs = "GaveUp"
    print(_szs(szs, args.file))

    if outcome.proof is not None and args.proof != "none":
        if args.proof == "text":
            print(render_text(outcome.proof, matrix), end="")
        else:
            print(render_machine(outcome.proof), end="")

    if args.stats is not None:
        stats = {
            "problem": os.path.basename(args.file),
            "strategy": args.cuts,
            "szs": szs,
            "status": outcome.status,
            "reason": outcome.reason,
            "wall_s": round(wall, 6),
            "inferences": outcome.inferences,
            "path_limit": outcome.path_limit,
            "regularity_rejections": outcome.regularity_rejections,
            "proof_steps":
                len(outcome.proof) if outcome.proof is not None else -1,
            "proof_hash":
                proof_digest(outcome.proof)
                if outcome.proof is not None else "",
        }
        blob = json.dumps(stats, indent=2, sort_keys=True) + "\n"
        if args.stats == "-":
            sys.stdout.write(blob)
        else:
            with open(args.stats, "w") as fh:
                fh.write(blob)

    return EXIT_PROVED if szs == "Theorem" else EXIT_NOT_PROVED


def _cmd_bench(args: argparse.Namespace) -> int:
    strategies = [s.strip() for s in args.cuts.split(",") if s.strip()]
    for s in strategies:
        if s not in STRATEGIES:
            raise InputError("unknown strategy: %s" % s)
    if os.path.isdir(args.corpus):
        paths = sorted(glob.glob(os.path.join(args.corpus, "*.p")))
    elif os.path.isfile(args.corpus):
        paths = [args.corpus]
    else:
        raise InputError("corpus not found: %s" % args.corpus)
    reports = run_suite(paths, strategies, timeout=args.timeout,
                        jobs=args.jobs, start_rule=args.start,
                        eq_axioms=args.eq_axioms,
                        include_root=args.include_root,
                        max_path_limit=args.max_path_limit)
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "results.csv")
    write_csv(reports, csv_path)
    print("wrote %s (%d rows)" % (csv_path, len(reports)))
    if not args.no_figures and reports:
        for p in save_report_figures(reports, strategies, args.out_dir):
            print("wrote %s" % p)
    print()
    print(format_summary(summarize(reports, strategies)))
    return EXIT_PROVED


def _cmd_check(args: argparse.Namespace) -> int:
    matrix = _load_matrix(args)
    with open(args.proof) as fh:
        proof = parse_machine(fh.read())
    result = check(matrix, proof)
    if result.ok:
        print("proof ok: %d steps" % len(proof))
        return EXIT_PROVED
    print("proof rejected at step %d (%s): %s"
          % (result.step_index, result.kind, result.message))
    return EXIT_NOT_PROVED


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "prove":
            return _cmd_prove(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_check(args)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ProverInternalError as exc:
        print("internal error: %s" % exc, file=sys.stderr)
        raise


if __name__ == "__main__":
    sys.exit(main())
