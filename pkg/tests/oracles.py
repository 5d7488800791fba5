"""Independent reference implementations the tests judge the package by.

Nothing here imports from the prover's search or clausification internals
beyond public constructors, so agreement between the two sides is evidence,
not circularity.  Propositional satisfiability is decided by a small DPLL
over integer clauses; formulas are evaluated by direct recursion over a
tuple AST.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from contab.logic import Clause, Literal, Matrix, SymbolTable


# ---------------------------------------------------------------------------
# propositional satisfiability (integer literals: +-(var+1))

def _simplify(clauses: list[frozenset[int]],
              lit: int) -> Optional[list[frozenset[int]]]:
    out = []
    for c in clauses:
        if lit in c:
            continue
        if -lit in c:
            c = c - {-lit}
            if not c:
                return None
        out.append(c)
    return out


def dpll_satisfiable(clauses: Sequence[Sequence[int]]) -> bool:
    work = [frozenset(c) for c in clauses]
    if any(not c for c in work):
        return False

    def solve(cls: list[frozenset[int]]) -> bool:
        while True:
            if not cls:
                return True
            unit = next((next(iter(c)) for c in cls if len(c) == 1), None)
            if unit is None:
                break
            cls = _simplify(cls, unit)
            if cls is None:
                return False
        lit = next(iter(cls[0]))
        left = _simplify(cls, lit)
        if left is not None and solve(left):
            return True
        right = _simplify(cls, -lit)
        return right is not None and solve(right)

    return solve(work)


def brute_force_satisfiable(clauses: Sequence[Sequence[int]]) -> bool:
    """Truth-table cross-check for dpll_satisfiable on small inputs."""
    vars_ = sorted({abs(l) for c in clauses for l in c})
    for bits in range(1 << len(vars_)):
        value = {v: bool(bits >> i & 1) for i, v in enumerate(vars_)}
        if all(any(value[abs(l)] == (l > 0) for l in c) for c in clauses):
            return True
    return not clauses


# ---------------------------------------------------------------------------
# ground matrices for the engine, from the same integer clauses

def int_clauses_to_matrix(clauses: Sequence[Sequence[int]]) -> Matrix:
    """Variables become arity-0 predicates v1..vk; start flags mark the
    all-positive clauses, matching the prover's positive start rule."""
    symbols = SymbolTable()
    n = max((abs(l) for c in clauses for l in c), default=0)
    pred = {v: symbols.intern_pred("v%d" % v, 0) for v in range(1, n + 1)}
    out = []
    flags = []
    for i, c in enumerate(clauses):
        lits = tuple(Literal(l > 0, pred[abs(l)], ()) for l in c)
        out.append(Clause(lits, ("rand%d" % i, "axiom")))
        flags.append(all(l > 0 for l in c))
    return Matrix(tuple(out), tuple(flags), symbols)


def named_ground_matrix(clause_names: Sequence[Sequence[str]]) -> Matrix:
    """Build a ground matrix from literal names like "q" / "~q"."""
    symbols = SymbolTable()
    out = []
    flags = []
    for i, names in enumerate(clause_names):
        lits = []
        for name in names:
            pol = not name.startswith("~")
            lits.append(Literal(pol, symbols.intern_pred(
                name.lstrip("~"), 0), ()))
        out.append(Clause(tuple(lits), ("c%d" % i, "axiom")))
        flags.append(all(l.pol for l in lits))
    return Matrix(tuple(out), tuple(flags), symbols)


def random_int_clauses(rng: random.Random, n_vars: int, n_clauses: int,
                       max_len: int) -> list[list[int]]:
    out = []
    for _ in range(n_clauses):
        size = rng.randint(1, max_len)
        c = []
        for _ in range(size):
            v = rng.randint(1, n_vars)
            c.append(v if rng.random() < 0.5 else -v)
        out.append(c)
    return out


# ---------------------------------------------------------------------------
# random ground formulas (tuple AST) and their TPTP rendering

_ATOMS = ("a", "b", "c", "d")


def random_formula(rng: random.Random, depth: int,
                   atoms: Sequence[str] = _ATOMS) -> tuple:
    if depth <= 0 or rng.random() < 0.25:
        return ("atom", rng.choice(atoms))
    kind = rng.choice(("not", "and", "or", "imp", "iff"))
    if kind == "not":
        return ("not", random_formula(rng, depth - 1, atoms))
    return (kind, random_formula(rng, depth - 1, atoms),
            random_formula(rng, depth - 1, atoms))


def formula_to_tptp(f: tuple) -> str:
    kind = f[0]
    if kind == "atom":
        return f[1]
    if kind == "not":
        return "~ (%s)" % formula_to_tptp(f[1])
    op = {"and": "&", "or": "|", "imp": "=>", "iff": "<=>"}[kind]
    return "(%s) %s (%s)" % (formula_to_tptp(f[1]), op, formula_to_tptp(f[2]))


def eval_formula(f: tuple, value: dict[str, bool]) -> bool:
    kind = f[0]
    if kind == "atom":
        return value[f[1]]
    if kind == "not":
        return not eval_formula(f[1], value)
    left = eval_formula(f[1], value)
    right = eval_formula(f[2], value)
    if kind == "and":
        return left and right
    if kind == "or":
        return left or right
    if kind == "imp":
        return (not left) or right
    return left == right


def formula_atoms(f: tuple) -> set[str]:
    if f[0] == "atom":
        return {f[1]}
    return set().union(*(formula_atoms(x) for x in f[1:]))


def formula_satisfiable(f: tuple) -> bool:
    atoms = sorted(formula_atoms(f))
    for bits in range(1 << len(atoms)):
        value = {a: bool(bits >> i & 1) for i, a in enumerate(atoms)}
        if eval_formula(f, value):
            return True
    return False


def matrix_satisfiable(m: Matrix) -> bool:
    """Ground matrices only: map each (pred, ()) atom to an integer."""
    ids: dict[int, int] = {}
    clauses = []
    for c in m.clauses:
        ic = []
        for l in c.lits:
            if l.args:
                raise ValueError("matrix_satisfiable needs a ground "
                                 "arity-0 matrix")
            v = ids.setdefault(l.pred, len(ids) + 1)
            ic.append(v if l.pol else -v)
        clauses.append(ic)
    return dpll_satisfiable(clauses)
