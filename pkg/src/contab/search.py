"""Connection tableaux search with configurable backtracking cuts.

The engine is an explicit backtracking machine over three stacks:

* a stack of open clause frames.  Each frame holds the remaining literal
  obligations of one clause copy together with that clause's active path and
  visible lemma list (persistent cons lists, shared across frames).  Children
  of an extension inherit the parent goal's lemma list; right siblings
  additionally see the solved goal itself.  This threading makes a lemma's
  solve-time path always a sub-path of any later use site, which the lemma
  rule needs for soundness.
* an alternatives stack.  Every applied step pushes one entry recording the
  untried candidates for its goal plus a snapshot (frame-stack tuple, trail
  mark, trace length) of the state just before the step.  Restoring an entry
  reproduces that state exactly; frames are immutable so the snapshot is a
  shallow tuple.
* the substitution trail inside the shared Substitution.

Cut semantics: when a literal is solved by the step whose alternatives entry
sits at stack position n (1-based), the stack is truncated to length n for an
exclusive cut (the step may still be retried later) or to n-1 for an
inclusive cut (the whole subtree including the step's own alternatives is
committed).  Reduction and lemma steps solve their literal immediately; an
extension's literal is solved once every literal of its clause copy is.  An
exclusive cut on reductions or lemmas would be a no-op (their entry is on
top of the stack when they solve), so those cuts are plain booleans.

Iterative deepening bounds the active-path length at extension steps, except
extensions into ground clauses, which are exempt (regularity bounds those).
A round that exhausts without ever hitting the bound cannot change at higher
limits, so deepening stops: verdict "no proof possible" for the cut-free
configuration, "limit reached" otherwise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .errors import ProverInternalError
from .logic import (Clause, Literal, Matrix, Substitution, clause_is_ground,
                    clause_var_count, fresh_copy, lit_deref_eq,
                    unify_complement)
from .proof import Proof, StartStep, check, finalize_proof


class ExtCut(Enum):
    NONE = "none"
    INCLUSIVE = "inclusive"
    EXCLUSIVE = "exclusive"


@dataclass(frozen=True)
class CutConfig:
    """Which backtracking cuts are active.

    reduction_cut: inclusive cut once a literal is solved by a reduction.
    extension_cut: cut once a literal is solved by an extension.
    lemma_cut: inclusive cut once a literal is solved by a lemma step; on by
    default since lemma steps never extend the substitution, so dropping the
    alternatives loses no proofs.
    """

    reduction_cut: bool = False
    extension_cut: ExtCut = ExtCut.NONE
    lemma_cut: bool = True

    @property
    def complete(self) -> bool:
        return not self.reduction_cut and self.extension_cut is ExtCut.NONE


STRATEGIES: dict[str, CutConfig] = {
    "none": CutConfig(False, ExtCut.NONE),
    "r": CutConfig(True, ExtCut.NONE),
    "ei": CutConfig(False, ExtCut.INCLUSIVE),
    "ex": CutConfig(False, ExtCut.EXCLUSIVE),
    "rei": CutConfig(True, ExtCut.INCLUSIVE),
    "rex": CutConfig(True, ExtCut.EXCLUSIVE),
}


@dataclass
class SearchOptions:
    max_path_limit: Optional[int] = None
    deadline: Optional[float] = None  # absolute time.monotonic() value
    check_every: int = 2048           # deadline poll interval, in loop turns
    record_events: bool = False       # solved-literal events with stack sizes
    keep_step_log: bool = False       # append-only log of applied steps
    record_prefixes: bool = False     # set of visited trace prefixes
    paranoid: bool = False            # verify snapshot restoration exactly


PROVED = "proved"
NO_PROOF_POSSIBLE = "no_proof_possible"
LIMIT_REACHED = "limit_reached"


@dataclass
class RoundResult:
    proof: Optional[Proof]
    depth_bound_hit: bool
    timed_out: bool
    inferences: int
    regularity_rejections: int
    events: list = field(default_factory=list)
    step_log: list = field(default_factory=list)
    prefixes: set = field(default_factory=set)
    no_start_clause: bool = False


@dataclass
class Outcome:
    status: str
    proof: Optional[Proof]
    inferences: int
    path_limit: int
    reason: str = ""  # "", "deadline", "max_path_limit", "exhausted"
    regularity_rejections: int = 0
    events: list = field(default_factory=list)
    step_log: list = field(default_factory=list)
    prefixes: set = field(default_factory=set)


class _Frame(NamedTuple):
    lits: tuple        # remaining literal obligations; lits[0] is current
    path: tuple        # cons list, most recent first
    path_len: int
    lems: tuple        # cons list of visible lemmas, most recent first
    principal: Optional[Literal]  # solved when this frame empties
    alt_pos: int       # 1-based alternatives position of the creating step


class _Alt:
    __slots__ = ("cands", "cursor", "frames", "mark", "proof_len", "debug")

    def __init__(self, cands, cursor, frames, mark, proof_len, debug=None):
        self.cands = cands
        self.cursor = cursor
        self.frames = frames
        self.mark = mark
        self.proof_len = proof_len
        self.debug = debug


class MatrixInfo:
    """Per-matrix precomputation shared across deepening rounds: a
    (predicate, polarity) index over clause literals, ground flags, and
    variable counts.  Plain predicate lookup, no term indexing."""

    def __init__(self, matrix: Matrix):
        self.matrix = matrix
        self.ground = [clause_is_ground(c) for c in matrix.clauses]
        self.var_counts = [clause_var_count(c) for c in matrix.clauses]
        index: dict = {}
        for ci, c in enumerate(matrix.clauses):
            for li, lit in enumerate(c.lits):
                index.setdefault((lit.pred, lit.pol), []).append((ci, li))
        self.index = index


class _Round:
    def __init__(self, info: MatrixInfo, cfg: CutConfig, limit: int,
                 opts: SearchOptions):
        self.info = info
        self.m = info.matrix
        self.cfg = cfg
        self.limit = limit
        self.opts = opts
        self.sub = Substitution()
        self.next_var = 0
        self.frames: list[_Frame] = []
        self.alts: list[_Alt] = []
        self.trace: list = []
        self.inferences = 0
        self.depth_hit = False
        self.reg_rejects = 0
        self.timed_out = False
        self._tick = 0
        self.no_start = False
        self.events: Optional[list] = [] if opts.record_events else None
        self.step_log: Optional[list] = [] if opts.keep_step_log else None
        self.prefixes: Optional[set] = set() if opts.record_prefixes else None
        self._sids: list = []  # structural ids parallel to trace

    # -- state plumbing -------------------------------------------------

    def _snapshot(self) -> tuple:
        debug = None
        if self.opts.paranoid:
            debug = (dict(self.sub.bindings), tuple(self.trace))
        return (tuple(self.frames), self.sub.mark(), len(self.trace), debug)

    def _freshen(self, ci: int) -> Clause:
        count = self.info.var_counts[ci]
        clause = self.m.clauses[ci]
        if not count:
            return clause
        copy = fresh_copy(clause, self.next_var)
        self.next_var += count
        return copy

    def _record(self, entry: tuple, sid: tuple) -> None:
        self.trace.append(entry)
        self.inferences += 1
        if self.step_log is not None:
            self.step_log.append(sid)
        if self.prefixes is not None:
            self._sids.append(sid)
            self.prefixes.add(tuple(self._sids))

    def _advance_top(self, goal: Literal) -> None:
        f = self.frames[-1]
        self.frames[-1] = _Frame(f.lits[1:], f.path, f.path_len,
                                 (goal, f.lems), f.principal, f.alt_pos)

    def _push_alt(self, cands: list, i: int, snapshot: tuple) -> int:
        self.alts.append(_Alt(cands, i + 1, snapshot[0], snapshot[1],
                              snapshot[2], snapshot[3]))
        return len(self.alts)

    def _restore(self, alt: _Alt) -> None:
        self.frames = list(alt.frames)
        self.sub.undo_to(alt.mark)
        del self.trace[alt.proof_len:]
        if self.prefixes is not None:
            del self._sids[alt.proof_len:]
        if alt.debug is not None:
            if self.sub.bindings != alt.debug[0] or \
                    tuple(self.trace) != alt.debug[1]:
                raise ProverInternalError(
                    "alternative restore did not reproduce the saved state")

    # -- cuts -----------------------------------------------------------

    def _solved(self, lit: Literal, n: int, kind: str) -> None:
        before = len(self.alts)
        if n > before:
            raise ProverInternalError("solving step's alternative is gone")
        target = None
        if kind == "ext":
            if self.cfg.extension_cut is ExtCut.EXCLUSIVE:
                target = n
            elif self.cfg.extension_cut is ExtCut.INCLUSIVE:
                target = n - 1
        elif kind == "red":
            if self.cfg.reduction_cut:
                target = n - 1
        elif kind == "lem":
            if self.cfg.lemma_cut:
                target = n - 1
        if target is not None and before > target:
            del self.alts[target:]
        if self.events is not None:
            self.events.append((kind, n, before, len(self.alts)))

    # -- candidates -----------------------------------------------------

    def _candidates(self, goal: Literal, frame: _Frame) -> list:
        out = []
        pos = 0
        node = frame.lems
        while node:
            lit = node[0]
            if lit.pred == goal.pred and lit.pol == goal.pol:
                out.append(("lem", pos, lit))
            pos += 1
            node = node[1]
        pos = 0
        node = frame.path
        while node:
            plit = node[0]
            if plit.pred == goal.pred and plit.pol != goal.pol:
                out.append(("red", pos, plit))
            pos += 1
            node = node[1]
        for ci, li in self.info.index.get((goal.pred, not goal.pol), ()):
            out.append(("ext", ci, li))
        return out

    def _on_path(self, lit: Literal, node: tuple) -> bool:
        while node:
            if lit_deref_eq(self.sub, lit, node[0]):
                return True
            node = node[1]
        return False

    # -- step application ----------------------------------------------

    def _attempt(self, cand: tuple, cands: list, i: int,
                 snapshot: tuple) -> bool:
        kind = cand[0]
        if kind == "start":
            ci = cand[1]
            copy = self._freshen(ci)
            self._push_alt(cands, i, snapshot)
            self.frames = [_Frame(copy.lits, (), 0, (), None, 0)]
            self._record(("start", ci), ("start", ci))
            return True

        frame = self.frames[-1]
        goal = frame.lits[0]
        if kind == "lem":
            _, pos, lit = cand
            if not lit_deref_eq(self.sub, goal, lit):
                return False
            n = self._push_alt(cands, i, snapshot)
            self._advance_top(goal)
            self._record(("lem", pos, goal), ("lem", pos))
            self._solved(goal, n, "lem")
            return True
        if kind == "red":
            _, pos, plit = cand
            if not unify_complement(self.sub, goal, plit):
                return False
            n = self._push_alt(cands, i, snapshot)
            self._advance_top(goal)
            self._record(("red", pos, goal), ("red", pos))
            self._solved(goal, n, "red")
            return True
        # extension
        _, ci, li = cand
        if not self.info.ground[ci] and frame.path_len >= self.limit:
            self.depth_hit = True
            return False
        mark = self.sub.mark()
        copy = self._freshen(ci)
        if not unify_complement(self.sub, goal, copy.lits[li]):
            return False
        rest = copy.lits[:li] + copy.lits[li + 1:]
        for lit in rest:
            if lit_deref_eq(self.sub, lit, goal) or \
                    self._on_path(lit, frame.path):
                self.sub.undo_to(mark)
                self.reg_rejects += 1
                return False
        n = self._push_alt(cands, i, snapshot)
        old_path, old_plen, old_lems = frame.path, frame.path_len, frame.lems
        self._advance_top(goal)
        self._record(("ext", ci, li, goal), ("ext", ci, li))
        if rest:
            self.frames.append(_Frame(rest, (goal, old_path), old_plen + 1,
                                      old_lems, goal, n))
        else:
            self._solved(goal, n, "ext")
        return True

    def _apply_first(self, cands: list, cursor: int, snapshot: tuple) -> bool:
        i = cursor
        while i < len(cands):
            if self._attempt(cands[i], cands, i, snapshot):
                return True
            i += 1
        return False

    def _backtrack(self) -> bool:
        while self.alts:
            alt = self.alts.pop()
            self._restore(alt)
            snapshot = (alt.frames, alt.mark, alt.proof_len, alt.debug)
            if self._apply_first(alt.cands, alt.cursor, snapshot):
                return True
        return False

    def _settle(self) -> bool:
        """Pop completed frames, firing solved events; True when the start
        frame itself completed (proof found)."""
        frames = self.frames
        while frames and not frames[-1].lits:
            f = frames.pop()
            if f.principal is None:
                return True
            self._solved(f.principal, f.alt_pos, "ext")
        return False

    def run(self) -> Optional[list]:
        start_cands = [("start", ci) for ci in self.m.start_indices()]
        if not start_cands:
            self.no_start = True
            return None
        if not self._apply_first(start_cands, 0, self._snapshot()):
            return None
        while True:
            self._tick += 1
            if self._tick >= self.opts.check_every:
                self._tick = 0
                if self.opts.deadline is not None and \
                        time.monotonic() >= self.opts.deadline:
                    self.timed_out = True
                    return None
            if self._settle():
                return self.trace
            frame = self.frames[-1]
            cands = self._candidates(frame.lits[0], frame)
            if not self._apply_first(cands, 0, self._snapshot()):
                if not self._backtrack():
                    return None


def search_at_limit(matrix: Matrix, cfg: CutConfig, path_limit: int,
                    options: Optional[SearchOptions] = None,
                    info: Optional[MatrixInfo] = None) -> RoundResult:
    """One bounded search round at a fixed path limit."""
    opts = options or SearchOptions()
    info = info or MatrixInfo(matrix)
    rnd = _Round(info, cfg, path_limit, opts)
    got = rnd.run()
    proof = None
    if got is not None:
        proof = finalize_proof(got, rnd.sub, matrix.symbols)
    return RoundResult(proof, rnd.depth_hit, rnd.timed_out, rnd.inferences,
                       rnd.reg_rejects,
                       rnd.events if rnd.events is not None else [],
                       rnd.step_log if rnd.step_log is not None else [],
                       rnd.prefixes if rnd.prefixes is not None else set(),
                       rnd.no_start)


def prove(matrix: Matrix, cfg: CutConfig,
          options: Optional[SearchOptions] = None) -> Outcome:
    """Iterative-deepening proof search: path limit 1, 2, 3, ...

    Returns no_proof_possible only when a round exhausted all alternatives
    without ever hitting the depth bound and the configuration is complete;
    an incomplete configuration in the same situation gives limit_reached
    (reason "exhausted"), since deeper rounds would replay the same tree.
    Every returned proof has passed the independent checker.
    """
    opts = options or SearchOptions()

    for i, c in enumerate(matrix.clauses):
        if not c.lits:
            proof = Proof((StartStep(i),))
            _gate(matrix, proof)
            return Outcome(PROVED, proof, 1, 0)

    info = MatrixInfo(matrix)
    total_inf = 0
    total_reg = 0
    events: list = []
    step_log: list = []
    prefixes: set = set()
    limit = 0
    while True:
        limit += 1
        if opts.max_path_limit is not None and limit > opts.max_path_limit:
            return Outcome(LIMIT_REACHED, None, total_inf, limit - 1,
                           "max_path_limit", total_reg, events, step_log,
                           prefixes)
        # rounds can each stay under the in-round poll interval, so the
        # deadline must also be consulted between rounds
        if opts.deadline is not None and time.monotonic() >= opts.deadline:
            return Outcome(LIMIT_REACHED, None, total_inf, limit - 1,
                           "deadline", total_reg, events, step_log, prefixes)
        r = search_at_limit(matrix, cfg, limit, opts, info)
        total_inf += r.inferences
        total_reg += r.regularity_rejections
        events.extend(r.events)
        step_log.extend(r.step_log)
        prefixes |= r.prefixes
        if r.no_start_clause:
            return Outcome(NO_PROOF_POSSIBLE, None, total_inf, limit,
                           "no_start_clause", total_reg, events, step_log,
                           prefixes)
        if r.timed_out:
            return Outcome(LIMIT_REACHED, None, total_inf, limit, "deadline",
                           total_reg, events, step_log, prefixes)
        if r.proof is not None:
            _gate(matrix, r.proof)
            return Outcome(PROVED, r.proof, total_inf, limit, "", total_reg,
                           events, step_log, prefixes)
        if not r.depth_bound_hit:
            if cfg.complete:
                return Outcome(NO_PROOF_POSSIBLE, None, total_inf, limit,
                               "exhausted", total_reg, events, step_log,
                               prefixes)
            return Outcome(LIMIT_REACHED, None, total_inf, limit, "exhausted",
                           total_reg, events, step_log, prefixes)


def _gate(matrix: Matrix, proof: Proof) -> None:
    result = check(matrix, proof)
    if not result.ok:
        raise ProverInternalError(
            "emitted proof failed the checker at step %d (%s): %s"
            % (result.step_index, result.kind, result.message))
