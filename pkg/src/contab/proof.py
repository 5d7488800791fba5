"""Proof objects, an independent replay checker, and proof serialization.

A proof is the surviving step sequence of a successful search: one start step
followed by reduction/extension/lemma steps in depth-first scheduling order
(an extension's new subgoals are fully proven before its parent clause's next
literal).  The checker replays that schedule with its own substitution and
fresh-variable machinery and never trusts search state.

Goal literals in steps are stored as canonical text: the final substitution
is applied and variables are renumbered by first occurrence (_0, _1, ...).
That makes proof identity independent of the variable-counter history of the
search that produced the proof, so two searches that find the same derivation
serialize identically.

Machine format (version 1), one step per line after the header::

    cproof v1
    s <clause>
    e <clause> <literal> <goal>
    r <path-index> <goal>
    l <lemma-index> <goal>

Indices are 0-based; path and lemma indices count from the most recent entry.
The goal is the rest of the line (quoted symbol names may contain spaces).
Lines starting with '%' are comments.  render -> parse -> render is a
fixpoint.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional, Union

from .errors import InputError
from .logic import (Clause, Matrix, Substitution, clause_var_count,
                    fresh_copy, lit_deref_eq, render_clause, render_literal,
                    unify_complement)

MACHINE_FORMAT_HEADER = "cproof v1"


@dataclass(frozen=True)
class StartStep:
    clause: int


@dataclass(frozen=True)
class ExtensionStep:
    goal: str
    clause: int
    lit: int


@dataclass(frozen=True)
class ReductionStep:
    goal: str
    path_index: int


@dataclass(frozen=True)
class LemmaStep:
    goal: str
    lemma_index: int


ProofStep = Union[StartStep, ExtensionStep, ReductionStep, LemmaStep]


@dataclass(frozen=True)
class Proof:
    steps: tuple = ()

    def __len__(self) -> int:
        return len(self.steps)


def finalize_proof(trace: list, sub: Substitution, symbols) -> Proof:
    """Turn the engine's internal trace into a Proof with canonical goals.

    Trace entries: ("start", ci) | ("ext", ci, li, goal_literal)
    | ("red", path_index, goal_literal) | ("lem", lemma_index, goal_literal).
    """
    var_names: dict[int, str] = {}
    steps: list[ProofStep] = []
    for entry in trace:
        kind = entry[0]
        if kind == "start":
            steps.append(StartStep(entry[1]))
        elif kind == "ext":
            goal = render_literal(entry[3], symbols, sub, var_names)
            steps.append(ExtensionStep(goal, entry[1], entry[2]))
        elif kind == "red":
            goal = render_literal(entry[2], symbols, sub, var_names)
            steps.append(ReductionStep(goal, entry[1]))
        elif kind == "lem":
            goal = render_literal(entry[2], symbols, sub, var_names)
            steps.append(LemmaStep(goal, entry[1]))
        else:
            raise ValueError("unknown trace entry %r" % (entry,))
    return Proof(tuple(steps))


# --------------------------------------------------------------------------
# Checking

@dataclass(frozen=True)
class CheckResult:
    ok: bool
    step_index: int = -1
    kind: str = ""  # "structural" or "logical" when not ok
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(i: int, kind: str, message: str) -> CheckResult:
    return CheckResult(False, i, kind, message)


def _cons_nth(node: tuple, n: int):
    """n-th element of a cons list (0 = most recently added), or None."""
    i = 0
    while node:
        if i == n:
            return node[0]
        node = node[1]
        i += 1
    return None


def check(matrix: Matrix, proof: Proof) -> CheckResult:
    """Replay a proof against a matrix with independent state.

    Structural failures are malformed proofs (bad indices, steps left over,
    open goals at the end); logical failures are replays where a required
    unification or lemma identity does not hold.  Start flags, regularity and
    path limits are search policy, not soundness, and are not enforced here.
    """
    steps = proof.steps
    if not steps:
        return _fail(-1, "structural", "empty proof")
    first = steps[0]
    if not isinstance(first, StartStep):
        return _fail(0, "structural", "proof must begin with a start step")
    if not 0 <= first.clause < len(matrix.clauses):
        return _fail(0, "structural",
                     "start clause index %d out of range" % first.clause)

    sub = Substitution()
    next_var = 0

    def freshen(c: Clause) -> Clause:
        nonlocal next_var
        count = clause_var_count(c)
        copy = fresh_copy(c, next_var) if count else c
        next_var += count
        return copy

    start_copy = freshen(matrix.clauses[first.clause])
    # frame: [remaining-literals list, path cons, lemma cons]
    frames: list[list] = [[list(start_copy.lits), (), ()]]

    for i, st in enumerate(steps[1:], start=1):
        while frames and not frames[-1][0]:
            frames.pop()
        if not frames:
            return _fail(i, "structural",
                         "step after the proof is already closed")
        frame = frames[-1]
        goal = frame[0][0]
        if isinstance(st, StartStep):
            return _fail(i, "structural", "start step not at proof head")
        if isinstance(st, ReductionStep):
            plit = _cons_nth(frame[1], st.path_index)
            if plit is None:
                return _fail(i, "structural",
                             "path index %d out of range" % st.path_index)
            if not unify_complement(sub, goal, plit):
                return _fail(i, "logical",
                             "reduction does not unify with the path literal")
            child = None
        elif isinstance(st, LemmaStep):
            lem = _cons_nth(frame[2], st.lemma_index)
            if lem is None:
                return _fail(i, "structural",
                             "lemma index %d out of range" % st.lemma_index)
            if not lit_deref_eq(sub, goal, lem):
                return _fail(i, "logical",
                             "goal is not identical to the lemma literal")
            child = None
        elif isinstance(st, ExtensionStep):
            if not 0 <= st.clause < len(matrix.clauses):
                return _fail(i, "structural",
                             "clause index %d out of range" % st.clause)
            clause = matrix.clauses[st.clause]
            if not 0 <= st.lit < len(clause.lits):
                return _fail(i, "structural",
                             "literal index %d out of range in clause %d"
                             % (st.lit, st.clause))
            copy = freshen(clause)
            if not unify_complement(sub, goal, copy.lits[st.lit]):
                return _fail(i, "logical",
                             "extension does not unify with clause %d literal"
                             " %d" % (st.clause, st.lit))
            child = list(copy.lits[:st.lit] + copy.lits[st.lit + 1:])
        else:
            return _fail(i, "structural", "unknown step %r" % (st,))

        old_lems = frame[2]
        frame[0] = frame[0][1:]
        frame[2] = (goal, old_lems)
        if child:
            frames.append([child, (goal, frame[1]), old_lems])

    while frames and not frames[-1][0]:
        frames.pop()
    if frames:
        open_goals = sum(len(f[0]) for f in frames)
        return _fail(len(steps), "structural",
                     "proof ends with %d open goal(s)" % open_goals)
    return CheckResult(True)


# --------------------------------------------------------------------------
# Rendering and parsing

def render_machine(proof: Proof) -> str:
    lines = [MACHINE_FORMAT_HEADER]
    for st in proof.steps:
        if isinstance(st, StartStep):
            lines.append("s %d" % st.clause)
        elif isinstance(st, ExtensionStep):
            lines.append("e %d %d %s" % (st.clause, st.lit, st.goal))
        elif isinstance(st, ReductionStep):
            lines.append("r %d %s" % (st.path_index, st.goal))
        elif isinstance(st, LemmaStep):
            lines.append("l %d %s" % (st.lemma_index, st.goal))
        else:
            raise ValueError("unknown step %r" % (st,))
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> Proof:
    lines = [ln.strip() for ln in text.splitlines()]
    # '%' lines are comments, so prover status output can be piped through
    lines = [ln for ln in lines if ln and not ln.startswith("%")]
    if not lines or lines[0] != MACHINE_FORMAT_HEADER:
        raise InputError("not a machine proof: missing '%s' header"
                         % MACHINE_FORMAT_HEADER)
    steps: list[ProofStep] = []
    for ln in lines[1:]:
        kind = ln.split(None, 1)[0]
        try:
            if kind == "s":
                parts = ln.split()
                if len(parts) != 2:
                    raise ValueError
                steps.append(StartStep(int(parts[1])))
            elif kind == "e":
                # goal text is the line remainder; it may contain spaces
                # when the problem used quoted symbol names
                parts = ln.split(None, 3)
                if len(parts) != 4:
                    raise ValueError
                steps.append(ExtensionStep(parts[3], int(parts[1]),
                                           int(parts[2])))
            elif kind == "r":
                parts = ln.split(None, 2)
                if len(parts) != 3:
                    raise ValueError
                steps.append(ReductionStep(parts[2], int(parts[1])))
            elif kind == "l":
                parts = ln.split(None, 2)
                if len(parts) != 3:
                    raise ValueError
                steps.append(LemmaStep(parts[2], int(parts[1])))
            else:
                raise ValueError
        except ValueError:
            raise InputError("malformed proof line: %r" % ln)
    return Proof(tuple(steps))


def render_text(proof: Proof, matrix: Optional[Matrix] = None) -> str:
    """Human-readable listing; clause displays need the matrix."""
    out = ["Proof with %d step(s)" % len(proof.steps)]

    def clause_str(ci: int) -> str:
        if matrix is None or not 0 <= ci < len(matrix.clauses):
            return "clause %d" % ci
        names: dict[int, str] = {}
        return "clause %d: %s" % (
            ci, render_clause(matrix.clauses[ci], matrix.symbols,
                              var_names=names))

    for i, st in enumerate(proof.steps, start=1):
        if isinstance(st, StartStep):
            out.append("%3d. start with %s" % (i, clause_str(st.clause)))
        elif isinstance(st, ExtensionStep):
            out.append("%3d. extend %s against literal %d of %s"
                       % (i, st.goal, st.lit, clause_str(st.clause)))
        elif isinstance(st, ReductionStep):
            out.append("%3d. reduce %s with path literal %d"
                       % (i, st.goal, st.path_index))
        elif isinstance(st, LemmaStep):
            out.append("%3d. close %s by lemma %d"
                       % (i, st.goal, st.lemma_index))
    return "\n".join(out) + "\n"


def proof_digest(proof: Proof) -> str:
    """Stable identity of a proof: SHA-256 of its machine format."""
    return hashlib.sha256(render_machine(proof).encode()).hexdigest()
