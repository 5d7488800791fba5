"""Core first-order machinery: terms, literals, clauses, substitutions.

Symbols are interned to integers at build time; variables are plain integer
ids so that clause copies can be produced by shifting every id by a fixed
offset.  The substitution is a single global binding store with an undo trail,
which is the shape the backtracking search needs: unification either succeeds
and leaves its bindings on the trail, or fails and leaves the store untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .errors import InputError, ProverInternalError


@dataclass(frozen=True, slots=True)
class Var:
    id: int

    def __str__(self) -> str:
        return "_%d" % self.id


@dataclass(frozen=True, slots=True)
class App:
    sym: int
    args: tuple = ()


Term = Union[Var, App]


@dataclass(frozen=True, slots=True)
class Literal:
    pol: bool
    pred: int
    args: tuple = ()

    def complement(self) -> "Literal":
        return Literal(not self.pol, self.pred, self.args)


@dataclass(frozen=True, slots=True)
class Clause:
    """A disjunction of literals.  origin = (formula name, formula role)."""

    lits: tuple = ()
    origin: tuple = ("", "")


class SymbolTable:
    """Two-namespace interner (function/constant symbols vs. predicates).

    Arity is fixed at first sight; re-interning the same name with a different
    argument count raises InputError.  Skolem symbols are allocated through
    fresh_fun_name, which skips any name already taken, so generated symbols
    can never collide with input symbols.
    """

    def __init__(self) -> None:
        self._fun_ids: dict[str, int] = {}
        self._funs: list[tuple[str, int]] = []
        self._pred_ids: dict[str, int] = {}
        self._preds: list[tuple[str, int]] = []
        self._skolem_counter = 0

    def intern_fun(self, name: str, arity: int) -> int:
        i = self._fun_ids.get(name)
        if i is None:
            i = len(self._funs)
            self._fun_ids[name] = i
            self._funs.append((name, arity))
            return i
        if self._funs[i][1] != arity:
            raise InputError(
                "function symbol '%s' used with arity %d and %d"
                % (name, self._funs[i][1], arity)
            )
        return i

    def intern_pred(self, name: str, arity: int) -> int:
        i = self._pred_ids.get(name)
        if i is None:
            i = len(self._preds)
            self._pred_ids[name] = i
            self._preds.append((name, arity))
            return i
        if self._preds[i][1] != arity:
            raise InputError(
                "predicate symbol '%s' used with arity %d and %d"
                % (name, self._preds[i][1], arity)
            )
        return i

    def fresh_fun_name(self, base: str = "sk") -> str:
        while True:
            self._skolem_counter += 1
            name = "%s%d" % (base, self._skolem_counter)
            if name not in self._fun_ids:
                return name

    def fun_name(self, i: int) -> str:
        return self._funs[i][0]

    def fun_arity(self, i: int) -> int:
        return self._funs[i][1]

    def pred_name(self, i: int) -> str:
        return self._preds[i][0]

    def pred_arity(self, i: int) -> int:
        return self._preds[i][1]

    def has_pred(self, name: str) -> bool:
        return name in self._pred_ids

    def pred_id(self, name: str) -> int:
        return self._pred_ids[name]

    def iter_funs(self) -> Iterator[tuple[int, str, int]]:
        for i, (name, arity) in enumerate(self._funs):
            yield i, name, arity

    def iter_preds(self) -> Iterator[tuple[int, str, int]]:
        for i, (name, arity) in enumerate(self._preds):
            yield i, name, arity


# Reserved predicate name for equality atoms.  '=' can never be parsed as an
# ordinary TPTP symbol, so the namespace is safe by construction.
EQ_PRED_NAME = "="


@dataclass
class Matrix:
    """A clause set plus start-clause flags and the symbol table it was built
    against.  Clause order is meaningful: the search enumerates extension
    candidates in (clause index, literal index) order."""

    clauses: list = field(default_factory=list)
    start_flags: list = field(default_factory=list)
    symbols: SymbolTable = field(default_factory=SymbolTable)

    def start_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.start_flags) if f]


class Substitution:
    """Global binding store with an undo trail.

    bind() records each bound variable on the trail; undo_to(mark) removes all
    bindings made after mark() was taken, in LIFO order.
    """

    __slots__ = ("bindings", "trail")

    def __init__(self) -> None:
        self.bindings: dict[int, Term] = {}
        self.trail: list[int] = []

    def mark(self) -> int:
        return len(self.trail)

    def undo_to(self, mark: int) -> None:
        trail = self.trail
        bindings = self.bindings
        while len(trail) > mark:
            del bindings[trail.pop()]

    def bind(self, vid: int, term: Term) -> None:
        if vid in self.bindings:
            raise ProverInternalError("variable _%d bound twice" % vid)
        self.bindings[vid] = term
        self.trail.append(vid)

    def deref(self, t: Term) -> Term:
        bindings = self.bindings
        while type(t) is Var:
            nxt = bindings.get(t.id)
            if nxt is None:
                return t
            t = nxt
        return t

    def resolve(self, t: Term) -> Term:
        """Fully apply the substitution, producing a new term."""
        t = self.deref(t)
        if type(t) is Var:
            return t
        if not t.args:
            return t
        return App(t.sym, tuple(self.resolve(a) for a in t.args))


def occurs(sub: Substitution, vid: int, t: Term) -> bool:
    """True when variable vid occurs in t under the current bindings."""
    stack = [t]
    while stack:
        u = sub.deref(stack.pop())
        if type(u) is Var:
            if u.id == vid:
                return True
        else:
            stack.extend(u.args)
    return False


def unify(sub: Substitution, t1: Term, t2: Term) -> bool:
    """Unify two terms with occurs check.

    On success the bindings stay in sub (trailed); on failure sub is restored
    to its state at entry.
    """
    mark = sub.mark()
    todo = [(t1, t2)]
    while todo:
        a, b = todo.pop()
        a = sub.deref(a)
        b = sub.deref(b)
        if a is b:
            continue
        ta, tb = type(a) is Var, type(b) is Var
        if ta and tb:
            if a.id != b.id:
                sub.bind(a.id, b)
            continue
        if ta:
            if occurs(sub, a.id, b):
                sub.undo_to(mark)
                return False
            sub.bind(a.id, b)
            continue
        if tb:
            if occurs(sub, b.id, a):
                sub.undo_to(mark)
                return False
            sub.bind(b.id, a)
            continue
        if a.sym != b.sym or len(a.args) != len(b.args):
            sub.undo_to(mark)
            return False
        for pair in zip(a.args, b.args):
            todo.append(pair)
    return True


def unify_complement(sub: Substitution, l1: Literal, l2: Literal) -> bool:
    """Unify l1 with the complement of l2 (same predicate, opposite sign).

    Same success/failure contract as unify."""
    if l1.pred != l2.pred or l1.pol == l2.pol:
        return False
    mark = sub.mark()
    for a, b in zip(l1.args, l2.args):
        if not unify(sub, a, b):
            sub.undo_to(mark)
            return False
    return True


def term_deref_eq(sub: Substitution, t1: Term, t2: Term) -> bool:
    """Syntactic equality of two terms after dereferencing."""
    todo = [(t1, t2)]
    while todo:
        a, b = todo.pop()
        a = sub.deref(a)
        b = sub.deref(b)
        if a is b:
            continue
        if type(a) is Var or type(b) is Var:
            if type(a) is Var and type(b) is Var and a.id == b.id:
                continue
            return False
        if a.sym != b.sym or len(a.args) != len(b.args):
            return False
        todo.extend(zip(a.args, b.args))
    return True


def lit_deref_eq(sub: Substitution, l1: Literal, l2: Literal) -> bool:
    if l1.pol != l2.pol or l1.pred != l2.pred:
        return False
    return all(term_deref_eq(sub, a, b) for a, b in zip(l1.args, l2.args))


def _shift_term(t: Term, offset: int) -> Term:
    if type(t) is Var:
        return Var(t.id + offset)
    if not t.args:
        return t
    return App(t.sym, tuple(_shift_term(a, offset) for a in t.args))


def clause_var_count(c: Clause) -> int:
    """Number of variable slots a copy of c consumes (max id + 1, or 0)."""
    high = -1
    stack = []
    for lit in c.lits:
        stack.extend(lit.args)
    while stack:
        t = stack.pop()
        if type(t) is Var:
            if t.id > high:
                high = t.id
        else:
            stack.extend(t.args)
    return high + 1


def clause_is_ground(c: Clause) -> bool:
    return clause_var_count(c) == 0


def fresh_copy(c: Clause, offset: int) -> Clause:
    """Copy c with every variable id shifted by offset.

    The caller must pick an offset strictly greater than every variable id
    currently live, so the copy shares no variables with anything else."""
    lits = tuple(
        Literal(l.pol, l.pred, tuple(_shift_term(a, offset) for a in l.args))
        for l in c.lits
    )
    return Clause(lits, c.origin)


def render_term(t: Term, symbols: SymbolTable,
                sub: Optional[Substitution] = None,
                var_names: Optional[dict[int, str]] = None) -> str:
    if sub is not None:
        t = sub.deref(t)
    if type(t) is Var:
        if var_names is not None:
            return var_names.setdefault(t.id, "_%d" % len(var_names))
        return "_%d" % t.id
    name = symbols.fun_name(t.sym)
    if not t.args:
        return name
    inner = ",".join(render_term(a, symbols, sub, var_names) for a in t.args)
    return "%s(%s)" % (name, inner)


def render_literal(l: Literal, symbols: SymbolTable,
                   sub: Optional[Substitution] = None,
                   var_names: Optional[dict[int, str]] = None) -> str:
    name = symbols.pred_name(l.pred)
    if l.args:
        inner = ",".join(render_term(a, symbols, sub, var_names) for a in l.args)
        body = "%s(%s)" % (name, inner)
    else:
        body = name
    return body if l.pol else "~" + body


def render_clause(c: Clause, symbols: SymbolTable,
                  sub: Optional[Substitution] = None,
                  var_names: Optional[dict[int, str]] = None) -> str:
    if not c.lits:
        return "[]"
    return " | ".join(render_literal(l, symbols, sub, var_names) for l in c.lits)
