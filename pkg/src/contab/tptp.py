"""TPTP FOF reader for the supported first-order subset.

Handles fof() statements and include() directives.  Connectives: ~ & | => <=>
with quantifiers ! and ?; = and != are accepted as the reserved equality
predicate and its negation.  Everything else in the TPTP zoo (cnf/thf/tff,
<=, <~>, ~|, ~&, numbers, defined terms) is rejected with an explicit
unsupported-construct error rather than misparsed.

=> and <=> are non-associative, and & / | chains may not mix with other
binary connectives without parentheses, following the TPTP grammar.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Union

from .errors import TptpSyntaxError, UnsupportedInputError


# --------------------------------------------------------------------------
# Formula AST.  Terms and formulas carry symbol *names*; interning to integer
# symbols happens during clausification.

@dataclass(frozen=True)
class FVar:
    name: str


@dataclass(frozen=True)
class FFun:
    name: str
    args: tuple = ()


FTerm = Union[FVar, FFun]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Neg:
    f: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Atom, Neg, And, Or, Implies, Iff, Forall, Exists]


ROLES = (
    "axiom",
    "hypothesis",
    "definition",
    "lemma",
    "theorem",
    "conjecture",
    "negated_conjecture",
)


@dataclass(frozen=True)
class AnnotatedFormula:
    name: str
    role: str
    formula: Formula


EQ = "="


# --------------------------------------------------------------------------
# Tokenizer

_PUNCT = set("()[],.:")

# Multi-character operator prefixes that are valid TPTP but outside the
# supported subset; reporting them by name beats a generic syntax error.
_UNSUPPORTED_OPS = {"<=": "reversed implication", "<~>": "xor",
                    "~|": "nor", "~&": "nand"}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind  # lower | upper | squote | punct | op | eof
        self.text = text
        self.line = line
        self.col = col


def _tokenize(src: str, path: str = "") -> list[_Token]:
    toks: list[_Token] = []
    i, n = 0, len(src)
    line, col = 1, 1

    def err(msg: str, l: int, c: int):
        raise TptpSyntaxError(msg, l, c, path)

    def unsupported(msg: str, l: int, c: int):
        where = path if path else "<input>"
        raise UnsupportedInputError("%s:%d:%d: %s" % (where, l, c, msg))

    def advance(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if src[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = src[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if ch == "%":
            while i < n and src[i] != "\n":
                advance(1)
            continue
        if src.startswith("/*", i):
            l0, c0 = line, col
            advance(2)
            while i < n and not src.startswith("*/", i):
                advance(1)
            if i >= n:
                err("unterminated block comment", l0, c0)
            advance(2)
            continue
        l0, c0 = line, col
        if ch.islower():
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(_Token("lower", src[i:j], l0, c0))
            advance(j - i)
            continue
        if ch.isupper() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(_Token("upper", src[i:j], l0, c0))
            advance(j - i)
            continue
        if ch.isdigit():
            unsupported("numeric terms are not supported", l0, c0)
        if ch == "$":
            j = i + 1
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(_Token("lower", src[i:j], l0, c0))
            advance(j - i)
            continue
        if ch == "'":
            j = i + 1
            buf = []
            while j < n and src[j] != "'":
                if src[j] == "\\" and j + 1 < n:
                    buf.append(src[j + 1])
                    j += 2
                else:
                    buf.append(src[j])
                    j += 1
            if j >= n:
                err("unterminated quoted name", l0, c0)
            toks.append(_Token("squote", "".join(buf), l0, c0))
            advance(j + 1 - i)
            continue
        if ch in _PUNCT:
            toks.append(_Token("punct", ch, l0, c0))
            advance(1)
            continue
        for op, what in _UNSUPPORTED_OPS.items():
            if src.startswith(op, i):
                # '<=' must not shadow '<=>'
                if op == "<=" and src.startswith("<=>", i):
                    break
                unsupported("the %s connective '%s' is not supported" % (what, op),
                            l0, c0)
        for op in ("<=>", "=>", "!=", "~", "&", "|", "!", "?", "="):
            if src.startswith(op, i):
                toks.append(_Token("op", op, l0, c0))
                advance(len(op))
                break
        else:
            err("unexpected character %r" % ch, l0, c0)
    toks.append(_Token("eof", "", line, col))
    return toks


# --------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, toks: list[_Token], path: str = ""):
        self.toks = toks
        self.pos = 0
        self.path = path

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def err(self, msg: str, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        raise TptpSyntaxError(msg, tok.line, tok.col, self.path)

    def unsupported(self, msg: str, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        where = self.path if self.path else "<input>"
        raise UnsupportedInputError(
            "%s:%d:%d: %s" % (where, tok.line, tok.col, msg))

    def expect(self, kind: str, text: Optional[str] = None) -> _Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            got = t.text if t.text else t.kind
            self.err("expected '%s', found '%s'" % (want, got))
        return self.next()

    # -- terms ----------------------------------------------------------

    def parse_term(self) -> FTerm:
        t = self.peek()
        if t.kind == "upper":
            self.next()
            return FVar(t.text)
        if t.kind in ("lower", "squote"):
            if t.text.startswith("$"):
                self.unsupported("defined symbol '%s' is not supported"
                                 % t.text, t)
            self.next()
            name = t.text
            args: tuple = ()
            if self.peek().kind == "punct" and self.peek().text == "(":
                self.next()
                found = [self.parse_term()]
                while self.peek().kind == "punct" and self.peek().text == ",":
                    self.next()
                    found.append(self.parse_term())
                self.expect("punct", ")")
                args = tuple(found)
            return FFun(name, args)
        if t.kind == "op" and t.text == "=":
            self.err("term expected before '='")
        self.err("term expected, found '%s'" % (t.text or t.kind))

    # -- formulas -------------------------------------------------------

    def parse_formula(self) -> Formula:
        left = self.parse_unitary()
        t = self.peek()
        if t.kind != "op" or t.text not in ("&", "|", "=>", "<=>"):
            return left
        op = t.text
        if op in ("&", "|"):
            node = left
            while self.peek().kind == "op" and self.peek().text == op:
                self.next()
                rhs = self.parse_unitary()
                node = And(node, rhs) if op == "&" else Or(node, rhs)
            t2 = self.peek()
            if t2.kind == "op" and t2.text in ("&", "|", "=>", "<=>"):
                self.err("'%s' may not be mixed with '%s' without parentheses"
                         % (op, t2.text), t2)
            return node
        # => and <=> are non-associative: exactly one occurrence allowed
        self.next()
        right = self.parse_unitary()
        t2 = self.peek()
        if t2.kind == "op" and t2.text in ("&", "|", "=>", "<=>"):
            if t2.text == op:
                self.err("'%s' is non-associative; use parentheses" % op, t2)
            self.err("'%s' may not be mixed with '%s' without parentheses"
                     % (op, t2.text), t2)
        return Implies(left, right) if op == "=>" else Iff(left, right)

    def parse_unitary(self) -> Formula:
        t = self.peek()
        if t.kind == "op" and t.text == "~":
            self.next()
            return Neg(self.parse_unitary())
        if t.kind == "op" and t.text in ("!", "?"):
            self.next()
            self.expect("punct", "[")
            names = [self.expect("upper").text]
            while self.peek().kind == "punct" and self.peek().text == ",":
                self.next()
                names.append(self.expect("upper").text)
            self.expect("punct", "]")
            self.expect("punct", ":")
            body = self.parse_unitary()
            ctor = Forall if t.text == "!" else Exists
            for name in reversed(names):
                body = ctor(name, body)
            return body
        if t.kind == "punct" and t.text == "(":
            self.next()
            f = self.parse_formula()
            self.expect("punct", ")")
            return f
        if t.kind == "lower" and t.text in ("$true", "$false"):
            self.unsupported("defined formula '%s' is not supported" % t.text)
        if t.kind in ("lower", "upper", "squote"):
            term = self.parse_term()
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "=":
                self.next()
                rhs = self.parse_term()
                return Atom(EQ, (term, rhs))
            if nxt.kind == "op" and nxt.text == "!=":
                self.next()
                rhs = self.parse_term()
                return Neg(Atom(EQ, (term, rhs)))
            if isinstance(term, FVar):
                self.err("a variable is not a formula (missing '='?)", t)
            return Atom(term.name, term.args)
        self.err("formula expected, found '%s'" % (t.text or t.kind), t)

    # -- statements -----------------------------------------------------

    def parse_name(self) -> str:
        t = self.peek()
        if t.kind in ("lower", "squote"):
            return self.next().text
        self.err("formula name expected")

    def parse_statements(self) -> list:
        """Returns a list of AnnotatedFormula and ('include', path, token)
        markers, in source order."""
        out: list = []
        while True:
            t = self.peek()
            if t.kind == "eof":
                return out
            if t.kind != "lower":
                self.err("'fof' or 'include' expected")
            if t.text in ("cnf", "thf", "tff", "tcf", "tpi"):
                self.unsupported("'%s' statements are not supported; "
                                 "only 'fof' is accepted" % t.text)
            if t.text == "include":
                self.next()
                self.expect("punct", "(")
                ftok = self.peek()
                if ftok.kind != "squote":
                    self.err("quoted file name expected in include()")
                self.next()
                if self.peek().kind == "punct" and self.peek().text == ",":
                    self.unsupported("include() with a selection list "
                                     "is not supported")
                self.expect("punct", ")")
                self.expect("punct", ".")
                out.append(("include", ftok.text, ftok))
                continue
            if t.text != "fof":
                self.err("'fof' or 'include' expected, found '%s'" % t.text)
            self.next()
            self.expect("punct", "(")
            name = self.parse_name()
            self.expect("punct", ",")
            role_tok = self.peek()
            role = self.expect("lower").text
            if role not in ROLES:
                self.unsupported("formula role '%s' is not supported" % role,
                                 role_tok)
            self.expect("punct", ",")
            formula = self.parse_formula()
            self.expect("punct", ")")
            self.expect("punct", ".")
            out.append(AnnotatedFormula(name, role, formula))


# --------------------------------------------------------------------------
# Variable hygiene: implicit universal closure of free variables, then a
# rename-apart pass so every quantifier binds a distinct name.

def free_vars(f: Formula) -> list[str]:
    """Free variable names in first-occurrence order."""
    seen: list[str] = []

    def term(t: FTerm, bound: frozenset):
        if isinstance(t, FVar):
            if t.name not in bound and t.name not in seen:
                seen.append(t.name)
        else:
            for a in t.args:
                term(a, bound)

    def walk(g: Formula, bound: frozenset):
        if isinstance(g, Atom):
            for a in g.args:
                term(a, bound)
        elif isinstance(g, Neg):
            walk(g.f, bound)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left, bound)
            walk(g.right, bound)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body, bound | {g.var})

    walk(f, frozenset())
    return seen


def universal_closure(f: Formula) -> Formula:
    for name in reversed(free_vars(f)):
        f = Forall(name, f)
    return f


def rename_apart(f: Formula) -> Formula:
    """Rename bound variables so no two quantifiers share a name."""
    used: set[str] = set(free_vars(f))

    def fresh(name: str) -> str:
        if name not in used:
            used.add(name)
            return name
        k = 2
        while "%s_%d" % (name, k) in used:
            k += 1
        new = "%s_%d" % (name, k)
        used.add(new)
        return new

    def term(t: FTerm, env: dict) -> FTerm:
        if isinstance(t, FVar):
            return FVar(env.get(t.name, t.name))
        if not t.args:
            return t
        return FFun(t.name, tuple(term(a, env) for a in t.args))

    def walk(g: Formula, env: dict) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(term(a, env) for a in g.args))
        if isinstance(g, Neg):
            return Neg(walk(g.f, env))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(walk(g.left, env), walk(g.right, env))
        if isinstance(g, (Forall, Exists)):
            new = fresh(g.var)
            env2 = dict(env)
            env2[g.var] = new
            return type(g)(new, walk(g.body, env2))
        raise TypeError(type(g))

    return walk(f, {})


# --------------------------------------------------------------------------
# Public entry points

def parse_formula(text: str, path: str = "") -> Formula:
    """Parse a single formula (no closure or renaming applied)."""
    p = _Parser(_tokenize(text, path), path)
    f = p.parse_formula()
    if p.peek().kind != "eof":
        p.err("trailing input after formula")
    return f


def _load(path: str, include_root: Optional[str], active: tuple) -> list:
    real = os.path.realpath(path)
    if real in active:
        raise UnsupportedInputError("include cycle through '%s'" % path)
    try:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as e:
        raise UnsupportedInputError("cannot read '%s': %s" % (path, e))
    except UnicodeDecodeError as e:
        raise UnsupportedInputError("'%s' is not ASCII: %s" % (path, e))
    p = _Parser(_tokenize(text, path), path)
    out: list[AnnotatedFormula] = []
    root = include_root if include_root is not None else os.path.dirname(path)
    for item in p.parse_statements():
        if isinstance(item, AnnotatedFormula):
            out.append(item)
            continue
        _, rel, tok = item
        inc = rel if os.path.isabs(rel) else os.path.join(root, rel)
        if not os.path.exists(inc):
            raise UnsupportedInputError(
                "%s:%d:%d: included file '%s' not found (resolved to '%s')"
                % (path, tok.line, tok.col, rel, inc))
        out.extend(_load(inc, include_root, active + (real,)))
    return out


def parse_problem_file(path: str,
                       include_root: Optional[str] = None) -> list[AnnotatedFormula]:
    """Parse a problem file, resolving include() directives.

    Includes resolve against include_root when given, else against the
    directory of the including file.  Every returned formula is universally
    closed over its free variables and renamed apart."""
    raw = _load(path, include_root, ())
    return [AnnotatedFormula(a.name, a.role,
                             rename_apart(universal_closure(a.formula)))
            for a in raw]


def parse_problem(text: str, path: str = "<input>") -> list[AnnotatedFormula]:
    """Parse problem text directly (include() directives are rejected)."""
    p = _Parser(_tokenize(text, path), path)
    out = []
    for item in p.parse_statements():
        if not isinstance(item, AnnotatedFormula):
            raise UnsupportedInputError(
                "include() is only available when parsing from a file")
        out.append(AnnotatedFormula(item.name, item.role,
                                    rename_apart(universal_closure(item.formula))))
    return out


# --------------------------------------------------------------------------
# Rendering (used by tests for the parse/render round trip)

def render_term_ast(t: FTerm) -> str:
    if isinstance(t, FVar):
        return t.name
    if not t.args:
        return t.name
    return "%s(%s)" % (t.name, ",".join(render_term_ast(a) for a in t.args))


def render_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        if f.pred == EQ:
            return "%s = %s" % (render_term_ast(f.args[0]),
                                render_term_ast(f.args[1]))
        if not f.args:
            return f.pred
        return "%s(%s)" % (f.pred, ",".join(render_term_ast(a) for a in f.args))
    if isinstance(f, Neg):
        return "~ %s" % _render_unit(f.f)
    if isinstance(f, And):
        return "(%s & %s)" % (render_formula(f.left), render_formula(f.right))
    if isinstance(f, Or):
        return "(%s | %s)" % (render_formula(f.left), render_formula(f.right))
    if isinstance(f, Implies):
        return "(%s => %s)" % (render_formula(f.left), render_formula(f.right))
    if isinstance(f, Iff):
        return "(%s <=> %s)" % (render_formula(f.left), render_formula(f.right))
    if isinstance(f, Forall):
        return "! [%s] : %s" % (f.var, _render_unit(f.body))
    if isinstance(f, Exists):
        return "? [%s] : %s" % (f.var, _render_unit(f.body))
    raise TypeError(type(f))


def _render_unit(f: Formula) -> str:
    s = render_formula(f)
    if isinstance(f, (Atom, Neg, Forall, Exists)) and not (
            isinstance(f, Atom) and f.pred == EQ):
        return s
    return "(%s)" % s
