"""Preprocessing: formula list -> clause matrix.

Pipeline per formula: universal closure of free variables, rename-apart,
negation normal form (with polarity-correct <=> expansion), Skolemization of
existentials over the universals in scope, then full distributive CNF.  No
definitional clausification: an <=> under many quantifiers can blow up
exponentially, which is accepted here.

The conjecture (all conjecture-role formulas conjoined) is negated before
clausification; clauses descended from it drive the start rule by default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import UnsupportedInputError
from .logic import (App, Clause, EQ_PRED_NAME, Literal, Matrix, SymbolTable,
                    Var)
from .tptp import (And, AnnotatedFormula, Atom, Exists, FFun, Forall, FTerm,
                   FVar, Formula, Iff, Implies, Neg, Or, rename_apart,
                   universal_closure)


@dataclass(frozen=True)
class PreprocessOptions:
    """equality_axioms: append reflexivity/symmetry/transitivity/congruence
    when '=' occurs (without it, '=' in the input is an error).
    start_clause_rule: 'conjecture' flags conjecture-descended clauses and
    falls back to positive clauses when there is no conjecture; 'positive'
    always flags all-positive clauses; 'all' flags everything."""

    equality_axioms: bool = False
    start_clause_rule: str = "conjecture"


# --------------------------------------------------------------------------
# Negation normal form

def nnf(f: Formula, positive: bool = True) -> Formula:
    """Push negations to atoms; expand => and <=> by polarity."""
    if isinstance(f, Atom):
        return f if positive else Neg(f)
    if isinstance(f, Neg):
        return nnf(f.f, not positive)
    if isinstance(f, And):
        l, r = nnf(f.left, positive), nnf(f.right, positive)
        return And(l, r) if positive else Or(l, r)
    if isinstance(f, Or):
        l, r = nnf(f.left, positive), nnf(f.right, positive)
        return Or(l, r) if positive else And(l, r)
    if isinstance(f, Implies):
        if positive:
            return Or(nnf(f.left, False), nnf(f.right, True))
        return And(nnf(f.left, True), nnf(f.right, False))
    if isinstance(f, Iff):
        lp, ln = nnf(f.left, True), nnf(f.left, False)
        rp, rn = nnf(f.right, True), nnf(f.right, False)
        if positive:
            return Or(And(lp, rp), And(ln, rn))
        return Or(And(lp, rn), And(ln, rp))
    if isinstance(f, Forall):
        body = nnf(f.body, positive)
        return Forall(f.var, body) if positive else Exists(f.var, body)
    if isinstance(f, Exists):
        body = nnf(f.body, positive)
        return Exists(f.var, body) if positive else Forall(f.var, body)
    raise TypeError("not a formula: %r" % (f,))


# --------------------------------------------------------------------------
# Skolemization (input must be in NNF with bound variables renamed apart)

def skolemize(f: Formula, symbols: SymbolTable) -> Formula:
    """Replace each existential variable by a fresh Skolem function applied
    to the universal variables in scope; all quantifiers are dropped, leaving
    a quantifier-free formula whose variables are implicitly universal.

    Skolem names come from the symbol table's reserved namespace, so they
    cannot collide with input symbols (pre-intern the problem's symbols
    first; problem_to_matrix does)."""

    def term(t: FTerm, env: dict) -> FTerm:
        if isinstance(t, FVar):
            return env.get(t.name, t)
        if not t.args:
            return t
        return FFun(t.name, tuple(term(a, env) for a in t.args))

    def walk(g: Formula, env: dict, univ: tuple) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(term(a, env) for a in g.args))
        if isinstance(g, Neg):
            return Neg(walk(g.f, env, univ))
        if isinstance(g, (And, Or)):
            return type(g)(walk(g.left, env, univ), walk(g.right, env, univ))
        if isinstance(g, Forall):
            return walk(g.body, env, univ + (FVar(g.var),))
        if isinstance(g, Exists):
            name = symbols.fresh_fun_name()
            symbols.intern_fun(name, len(univ))
            env2 = dict(env)
            env2[g.var] = FFun(name, univ)
            return walk(g.body, env2, univ)
        raise TypeError("skolemize expects an NNF formula, got %r" % (g,))

    return walk(f, {}, ())


# --------------------------------------------------------------------------
# Distribution to CNF and clause interning

def _intern_term(t: FTerm, symbols: SymbolTable, varmap: dict):
    if isinstance(t, FVar):
        vid = varmap.get(t.name)
        if vid is None:
            vid = len(varmap)
            varmap[t.name] = vid
        return Var(vid)
    sym = symbols.intern_fun(t.name, len(t.args))
    return App(sym, tuple(_intern_term(a, symbols, varmap) for a in t.args))


def cnf_distribute(f: Formula, symbols: SymbolTable,
                   origin: tuple = ("", "")) -> list[Clause]:
    """Distribute a quantifier-free NNF formula into clauses.

    Clause order follows the formula left to right; literal order within a
    clause likewise.  Duplicate literals are removed (first kept) and clauses
    containing a literal and its syntactic complement are dropped."""

    def gather(g: Formula) -> list[list]:
        if isinstance(g, And):
            return gather(g.left) + gather(g.right)
        if isinstance(g, Or):
            left, right = gather(g.left), gather(g.right)
            return [cl + cr for cl in left for cr in right]
        if isinstance(g, Atom):
            return [[(True, g)]]
        if isinstance(g, Neg) and isinstance(g.f, Atom):
            return [[(False, g.f)]]
        raise TypeError("cnf_distribute expects quantifier-free NNF, got %r"
                        % (g,))

    clauses: list[Clause] = []
    for raw in gather(f):
        varmap: dict = {}
        lits: list[Literal] = []
        seen: set = set()
        tautology = False
        for pol, atom in raw:
            pred = symbols.intern_pred(atom.pred, len(atom.args))
            lit = Literal(pol, pred,
                          tuple(_intern_term(a, symbols, varmap)
                                for a in atom.args))
            if lit in seen:
                continue
            if lit.complement() in seen:
                tautology = True
                break
            seen.add(lit)
            lits.append(lit)
        if not tautology:
            clauses.append(Clause(tuple(lits), origin))
    return clauses


def clausify_formula(f: Formula, symbols: SymbolTable,
                     origin: tuple = ("", "")) -> list[Clause]:
    """Full single-formula pipeline (closure, rename, NNF, Skolem, CNF)."""
    g = rename_apart(universal_closure(f))
    return cnf_distribute(skolemize(nnf(g), symbols), symbols, origin)


# --------------------------------------------------------------------------
# Equality axioms

def add_equality_axioms(m: Matrix) -> Matrix:
    """Append reflexivity, symmetry, transitivity and congruence clauses for
    every function and predicate symbol.  A matrix whose symbol table has no
    '=' predicate is returned unchanged.  New clauses get start flag False;
    callers with a start-clause policy should recompute flags."""
    symbols = m.symbols
    if not symbols.has_pred(EQ_PRED_NAME):
        return m
    eq = symbols.intern_pred(EQ_PRED_NAME, 2)
    origin = ("equality", "axiom")

    def pos(a, b):
        return Literal(True, eq, (a, b))

    def neg(a, b):
        return Literal(False, eq, (a, b))

    v = [Var(i) for i in range(3)]
    new: list[Clause] = [
        Clause((pos(v[0], v[0]),), origin),
        Clause((neg(v[0], v[1]), pos(v[1], v[0])), origin),
        Clause((neg(v[0], v[1]), neg(v[1], v[2]), pos(v[0], v[2])), origin),
    ]
    for i, _name, arity in symbols.iter_funs():
        if arity == 0:
            continue
        xs = [Var(k) for k in range(arity)]
        ys = [Var(arity + k) for k in range(arity)]
        lits = [neg(x, y) for x, y in zip(xs, ys)]
        lits.append(pos(App(i, tuple(xs)), App(i, tuple(ys))))
        new.append(Clause(tuple(lits), origin))
    for i, name, arity in symbols.iter_preds():
        if arity == 0 or name == EQ_PRED_NAME:
            continue
        xs = [Var(k) for k in range(arity)]
        ys = [Var(arity + k) for k in range(arity)]
        lits = [neg(x, y) for x, y in zip(xs, ys)]
        lits.append(Literal(False, i, tuple(xs)))
        lits.append(Literal(True, i, tuple(ys)))
        new.append(Clause(tuple(lits), origin))

    return Matrix(list(m.clauses) + new,
                  list(m.start_flags) + [False] * len(new), symbols)


# --------------------------------------------------------------------------
# Problem assembly

def _pre_intern(f: Formula, symbols: SymbolTable) -> bool:
    """Intern every symbol in f (catching arity clashes early); returns True
    when an equality atom occurs."""
    eq_seen = False

    def term(t: FTerm):
        if isinstance(t, FVar):
            return
        symbols.intern_fun(t.name, len(t.args))
        for a in t.args:
            term(a)

    def walk(g: Formula):
        nonlocal eq_seen
        if isinstance(g, Atom):
            if g.pred == EQ_PRED_NAME:
                eq_seen = True
            symbols.intern_pred(g.pred, len(g.args))
            for a in g.args:
                term(a)
        elif isinstance(g, Neg):
            walk(g.f)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(f)
    return eq_seen


def _all_positive(c: Clause) -> bool:
    return all(l.pol for l in c.lits)


def problem_to_matrix(formulas: list[AnnotatedFormula],
                      opts: Optional[PreprocessOptions] = None,
                      symbols: Optional[SymbolTable] = None) -> Matrix:
    """Clausify an annotated-formula list into a search-ready Matrix.

    Clause order is input formula order, then generation order within each
    formula.  All conjecture-role formulas are conjoined and negated at the
    position of the first one; negated_conjecture formulas are used as-is but
    still count as conjecture-descended for the start rule."""
    opts = opts or PreprocessOptions()
    symbols = symbols or SymbolTable()

    eq_used = False
    for a in formulas:
        if _pre_intern(a.formula, symbols):
            eq_used = True
    if eq_used and not opts.equality_axioms:
        raise UnsupportedInputError(
            "the input uses '='; enable equality axioms to handle it")

    conjectures = [a for a in formulas if a.role == "conjecture"]
    clauses: list[Clause] = []
    conj_derived: list[bool] = []
    conjecture_done = False
    for a in formulas:
        if a.role == "conjecture":
            if conjecture_done:
                continue
            conjecture_done = True
            combined: Formula = universal_closure(conjectures[0].formula)
            for extra in conjectures[1:]:
                combined = And(combined, universal_closure(extra.formula))
            part = clausify_formula(Neg(combined), symbols,
                                    (conjectures[0].name, "conjecture"))
            from_conjecture = True
        else:
            part = clausify_formula(a.formula, symbols, (a.name, a.role))
            from_conjecture = a.role == "negated_conjecture"
        clauses.extend(part)
        conj_derived.extend([from_conjecture] * len(part))

    m = Matrix(clauses, [False] * len(clauses), symbols)
    if opts.equality_axioms and eq_used:
        grown = add_equality_axioms(m)
        conj_derived.extend([False] * (len(grown.clauses) - len(m.clauses)))
        m = grown

    rule = opts.start_clause_rule
    if rule == "conjecture":
        if any(conj_derived):
            flags = list(conj_derived)
        else:
            flags = [_all_positive(c) for c in m.clauses]
    elif rule == "positive":
        flags = [_all_positive(c) for c in m.clauses]
    elif rule == "all":
        flags = [True] * len(m.clauses)
    else:
        raise UnsupportedInputError(
            "unknown start clause rule '%s'" % rule)
    m.start_flags = flags
    return m
