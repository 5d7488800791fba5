"""Benchmark harness: run cut strategies over a problem corpus and compare.

A run of one (problem, strategy) pair produces a RunReport row.  Suites fan
the pairs out over worker processes; each worker enforces its own deadline
inside the search loop, so results do not depend on scheduling.  Reports
round-trip through a small CSV format (comment header line, then ordinary
csv) consumed by the figure renderer and the summary printer.

Strategy comparison follows a two-part protocol against a baseline: the
share of the baseline's proved problems for which a strategy found the very
same proof (proof hashes are canonical, so equal hash means equal
derivation), and the ratio of inference counts summed over exactly those
identical-proof problems.  Restricting the ratio to identical proofs makes
it measure search effort saved, not proof-length luck.
"""

from __future__ import annotations

import csv
import os
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .clausify import PreprocessOptions, problem_to_matrix
from .errors import ContabError, InputError, ProverInternalError
from .proof import proof_digest
from .search import (LIMIT_REACHED, NO_PROOF_POSSIBLE, PROVED, STRATEGIES,
                     SearchOptions, prove)
from .tptp import parse_problem_file

CSV_HEADER_COMMENT = "# contab-bench csv v1"
CSV_COLUMNS = ("problem", "strategy", "status", "wall_s", "inferences",
               "path_limit", "proof_steps", "proof_hash", "unstable", "error")

THEOREM = "Theorem"
NOPROOF = "NoProofPossible"
LIMIT = "LimitReached"
TIMEOUT = "Timeout"
ERROR = "Error"

# wall time above this fraction of the budget marks the row unstable: the
# verdict could flip between runs on a loaded machine
UNSTABLE_FRACTION = 0.9


@dataclass
class RunReport:
    problem: str
    strategy: str
    status: str
    wall_s: float
    inferences: int
    path_limit: int
    proof_steps: int = -1
    proof_hash: str = ""
    unstable: bool = False
    error: str = ""

    @property
    def solved(self) -> bool:
        return self.status == THEOREM


def run_problem(path: str, strategy: str, timeout: float = 10.0,
                start_rule: str = "conjecture", eq_axioms: bool = False,
                include_root: Optional[str] = None,
                max_path_limit: Optional[int] = None) -> RunReport:
    """Parse, clausify and prove one file under one strategy; never raises
    for input or search trouble, the report row carries the Error status."""
    name = os.path.splitext(os.path.basename(path))[0]
    if strategy not in STRATEGIES:
        raise InputError("unknown strategy: %s" % strategy)
    cfg = STRATEGIES[strategy]
    began = time.perf_counter()
    try:
        problem = parse_problem_file(path, include_root=include_root)
        matrix = problem_to_matrix(problem, PreprocessOptions(
            equality_axioms=eq_axioms, start_clause_rule=start_rule))
        opts = SearchOptions(max_path_limit=max_path_limit)
        if timeout and timeout > 0:
            opts.deadline = time.monotonic() + timeout
        outcome = prove(matrix, cfg, opts)
    except ContabError as exc:
        wall = time.perf_counter() - began
        return RunReport(name, strategy, ERROR, wall, 0, 0,
                         error=str(exc).replace("\n", " "))
    wall = time.perf_counter() - began
    if outcome.status == PROVED:
        status = THEOREM
        steps = len(outcome.proof)
        digest = proof_digest(outcome.proof)
    else:
        steps = -1
        digest = ""
        if outcome.status == NO_PROOF_POSSIBLE:
            status = NOPROOF
        elif outcome.status == LIMIT_REACHED and outcome.reason == "deadline":
            status = TIMEOUT
        else:
            status = LIMIT
    unstable = status == TIMEOUT or \
        bool(timeout and timeout > 0 and wall > UNSTABLE_FRACTION * timeout)
    return RunReport(name, strategy, status, wall, outcome.inferences,
                     outcome.path_limit, steps, digest, unstable)


def _run_one(args: tuple) -> RunReport:
    return run_problem(*args)


def run_suite(paths: Sequence[str], strategies: Sequence[str],
              timeout: float = 10.0, jobs: int = 1,
              start_rule: str = "conjecture", eq_axioms: bool = False,
              include_root: Optional[str] = None,
              max_path_limit: Optional[int] = None) -> list[RunReport]:
    """Every strategy on every problem.  Row order is deterministic:
    problems in the given order, strategies in the given order within."""
    for s in strategies:
        if s not in STRATEGIES:
            raise InputError("unknown strategy: %s" % s)
    tasks = [(p, s, timeout, start_rule, eq_axioms, include_root,
              max_path_limit) for p in paths for s in strategies]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, tasks))
    return [_run_one(t) for t in tasks]


def hardware_metadata() -> dict:
    """Recorded alongside reports; absolute timings and counts are only
    comparable within one machine, so the context rides with the data."""
    return {
        "platform": platform.platform(),
        "machine": platform.machine(),
        "python": platform.python_version(),
        "cpus": str(os.cpu_count() or "unknown"),
    }


def write_csv(reports: Sequence[RunReport], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER_COMMENT + "\n")
        for key, value in hardware_metadata().items():
            fh.write("# %s: %s\n" % (key, value))
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in reports:
            w.writerow([r.problem, r.strategy, r.status, "%.6f" % r.wall_s,
                        r.inferences, r.path_limit, r.proof_steps,
                        r.proof_hash, int(r.unstable), r.error])


def read_csv(path: str) -> list[RunReport]:
    with open(path, newline="") as fh:
        first = fh.readline().rstrip("\n")
        if first != CSV_HEADER_COMMENT:
            raise InputError(
                "%s: not a contab benchmark csv (missing %r header)"
                % (path, CSV_HEADER_COMMENT))
        body = [ln for ln in fh if not ln.startswith("#")]
        rows = csv.reader(body)
        header = next(rows, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise InputError("%s: unexpected csv column header" % path)
        out = []
        for row in rows:
            if not row:
                continue
            if len(row) != len(CSV_COLUMNS):
                raise InputError("%s: malformed csv row: %r" % (path, row))
            out.append(RunReport(row[0], row[1], row[2], float(row[3]),
                                 int(row[4]), int(row[5]), int(row[6]),
                                 row[7], bool(int(row[8])), row[9]))
        return out


def compare_strategies(reports: Sequence[RunReport], base: str,
                       other: str) -> dict:
    """Compare `other` against the baseline `base` on proved problems."""
    by_key = {(r.problem, r.strategy): r for r in reports}
    problems = sorted({r.problem for r in reports})
    base_solved = [p for p in problems
                   if (rb := by_key.get((p, base))) and rb.solved]
    both = [p for p in base_solved
            if (ro := by_key.get((p, other))) and ro.solved]
    identical = [p for p in both
                 if by_key[(p, base)].proof_hash ==
                 by_key[(p, other)].proof_hash]
    identical_pct = None
    if base_solved:
        identical_pct = 100.0 * len(identical) / len(base_solved)
    ratio = None
    if identical:
        base_inf = sum(by_key[(p, base)].inferences for p in identical)
        other_inf = sum(by_key[(p, other)].inferences for p in identical)
        if other_inf:
            ratio = base_inf / other_inf
    return {
        "base": base,
        "other": other,
        "base_solved": len(base_solved),
        "other_solved": sum(
            1 for p in problems
            if (ro := by_key.get((p, other))) and ro.solved),
        "both_solved": len(both),
        "identical": len(identical),
        "identical_proof_pct": identical_pct,
        "inference_ratio": ratio,
    }


def summarize(reports: Sequence[RunReport],
              strategies: Optional[Sequence[str]] = None,
              base: Optional[str] = None) -> dict:
    if strategies is None:
        seen: list[str] = []
        for r in reports:
            if r.strategy not in seen:
                seen.append(r.strategy)
        strategies = seen
    per = {}
    for s in strategies:
        rows = [r for r in reports if r.strategy == s]
        per[s] = {
            "solved": sum(1 for r in rows if r.status == THEOREM),
            "no_proof": sum(1 for r in rows if r.status == NOPROOF),
            "limit": sum(1 for r in rows if r.status == LIMIT),
            "timeout": sum(1 for r in rows if r.status == TIMEOUT),
            "error": sum(1 for r in rows if r.status == ERROR),
            "unstable": sum(1 for r in rows if r.unstable),
            "wall_s": sum(r.wall_s for r in rows),
            "inferences": sum(r.inferences for r in rows),
        }
    solved_sets = {
        s: {r.problem for r in reports if r.strategy == s and r.solved}
        for s in strategies}
    union = {a: {b: len(solved_sets[a] | solved_sets[b]) for b in strategies}
             for a in strategies}
    if base is None:
        base = "none" if "none" in strategies else \
            (strategies[0] if strategies else None)
    comparisons = {}
    if base is not None:
        for s in strategies:
            if s != base:
                comparisons[s] = compare_strategies(reports, base, s)
    return {
        "strategies": list(strategies),
        "base": base,
        "per_strategy": per,
        "solved_union": union,
        "comparisons": comparisons,
    }


def format_summary(summary: dict) -> str:
    """Human-readable table block for terminals; pure string, no printing."""
    lines = []
    strategies = summary["strategies"]
    lines.append("strategy   solved  no-proof  limit  timeout  error"
                 "   wall(s)  inferences")
    for s in strategies:
        p = summary["per_strategy"][s]
        lines.append("%-9s %7d %9d %6d %8d %6d %9.2f %11d"
                     % (s, p["solved"], p["no_proof"], p["limit"],
                        p["timeout"], p["error"], p["wall_s"],
                        p["inferences"]))
    base = summary["base"]
    if summary["comparisons"]:
        lines.append("")
        lines.append("versus baseline %r (on its proved problems):" % base)
        lines.append("strategy   identical%   inference-ratio")
        for s, c in summary["comparisons"].items():
            pct = "-" if c["identical_proof_pct"] is None \
                else "%.1f" % c["identical_proof_pct"]
            rat = "-" if c["inference_ratio"] is None \
                else "%.3f" % c["inference_ratio"]
            lines.append("%-9s %11s %17s" % (s, pct, rat))
    lines.append("")
    lines.append("pairwise union of proved problems:")
    head = "          " + "".join("%8s" % s for s in strategies)
    lines.append(head)
    for a in strategies:
        row = "%-9s " % a
        row += "".join("%8d" % summary["solved_union"][a][b]
                       for b in strategies)
        lines.append(row)
    return "\n".join(lines)
