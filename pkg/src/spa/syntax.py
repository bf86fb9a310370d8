"""First-order syntax: terms, formulas, ASCII parser and pretty-printer.

The concrete grammar is plain ASCII.  Connectives, tightest first:
``~``, ``/\\``, ``\\/``, ``==>``, ``<=>``; all binary connectives are
right-associative and quantifier bodies (``forall x y. ...``,
``exists x. ...``) extend maximally to the right.  Equality is the infix
atom ``s = t``.  A bare identifier in term position is a variable;
constants are written as nullary applications, e.g. ``c()``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

__all__ = [
    "Term", "Var", "Fn",
    "Formula", "Falsity", "Truth", "Atom", "Not", "And", "Or", "Imp", "Iff",
    "Forall", "Exists",
    "ParseError", "ArityError",
    "parse_formula", "parse_term", "print_formula", "print_term",
    "free_vars", "free_vars_term", "all_vars_term", "all_names", "subst", "subst_term",
    "fresh_variant", "Signature", "signature_of", "check_arities",
    "subterms", "mk_eq", "is_eq",
]


# ---------------------------------------------------------------------------
# Abstract syntax


def _memo_hash(cls):
    """Cache the structural hash; syntax trees are hashed constantly."""
    base_hash = cls.__hash__

    def __hash__(self):
        try:
            return object.__getattribute__(self, "_hash")
        except AttributeError:
            h = base_hash(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


@_memo_hash
@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@_memo_hash
@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple["Term", ...]

    def __repr__(self) -> str:
        return f"Fn({self.name!r}, {list(self.args)!r})"


Term = Union[Var, Fn]


@_memo_hash
@dataclass(frozen=True)
class Falsity:
    pass


@_memo_hash
@dataclass(frozen=True)
class Truth:
    pass


@_memo_hash
@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...]

    def __repr__(self) -> str:
        return f"Atom({self.pred!r}, {list(self.args)!r})"


@_memo_hash
@dataclass(frozen=True)
class Not:
    body: "Formula"


@_memo_hash
@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@_memo_hash
@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@_memo_hash
@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@_memo_hash
@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@_memo_hash
@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@_memo_hash
@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Falsity, Truth, Atom, Not, And, Or, Imp, Iff, Forall, Exists]


def mk_eq(s: Term, t: Term) -> Atom:
    return Atom("=", (s, t))


def is_eq(f: Formula) -> bool:
    return isinstance(f, Atom) and f.pred == "=" and len(f.args) == 2


# ---------------------------------------------------------------------------
# Errors


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ArityError(ParseError):
    """A function or predicate symbol is used with two different arities."""


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
    | (?P<iff><=>)
    | (?P<imp>==>)
    | (?P<and>/\\)
    | (?P<or>\\/)
    | (?P<sym>[~().,=])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"forall", "exists", "true", "false"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident", "kw", "op", "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str, line0: int = 1, col0: int = 1) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = line0, col0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        if m.lastgroup == "ws":
            for ch in lexeme:
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
        elif m.lastgroup == "ident":
            kind = "kw" if lexeme in _KEYWORDS else "ident"
            tokens.append(_Token(kind, lexeme, line, col))
            col += len(lexeme)
        else:
            tokens.append(_Token("op", lexeme, line, col))
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser (recursive descent, one routine per precedence level)


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.column)

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            got = tok.text if tok.kind != "eof" else "end of input"
            raise self.fail(f"expected {text!r}, found {got!r}")
        return self.next()

    # formula := iff
    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek().text == "<=>":
            self.next()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek().text == "==>":
            self.next()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        if self.peek().text == "\\/":
            self.next()
            return Or(left, self.disj())
        return left

    def conj(self) -> Formula:
        left = self.neg()
        if self.peek().text == "/\\":
            self.next()
            return And(left, self.conj())
        return left

    def neg(self) -> Formula:
        if self.peek().text == "~":
            self.next()
            return Not(self.neg())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok.text == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if tok.text in ("forall", "exists"):
            return self.quantified()
        if tok.text == "true":
            self.next()
            return Truth()
        if tok.text == "false":
            self.next()
            return Falsity()
        if tok.kind == "ident":
            return self.atom_or_equation()
        got = tok.text if tok.kind != "eof" else "end of input"
        raise self.fail(f"expected a formula, found {got!r}")

    def quantified(self) -> Formula:
        quant = self.next().text
        names: list[str] = []
        while self.peek().kind == "ident":
            names.append(self.next().text)
        if not names:
            raise self.fail(f"expected at least one variable after {quant!r}")
        self.expect(".")
        body = self.formula()
        ctor = Forall if quant == "forall" else Exists
        for name in reversed(names):
            body = ctor(name, body)
        return body

    def atom_or_equation(self) -> Formula:
        name = self.next().text
        args: Optional[tuple[Term, ...]] = None
        if self.peek().text == "(":
            args = self.term_args()
        if self.peek().text == "=":
            self.next()
            lhs: Term = Var(name) if args is None else Fn(name, args)
            return mk_eq(lhs, self.term())
        return Atom(name, args if args is not None else ())

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind != "ident":
            got = tok.text if tok.kind != "eof" else "end of input"
            raise self.fail(f"expected a term, found {got!r}")
        name = self.next().text
        if self.peek().text == "(":
            return Fn(name, self.term_args())
        return Var(name)

    def term_args(self) -> tuple[Term, ...]:
        self.expect("(")
        if self.peek().text == ")":
            self.next()
            return ()
        args = [self.term()]
        while self.peek().text == ",":
            self.next()
            args.append(self.term())
        self.expect(")")
        return tuple(args)


def parse_formula(text: str, *, line: int = 1, column: int = 1,
                  arities: Optional["Signature"] = None) -> Formula:
    """Parse an ASCII formula; raise ParseError/ArityError on bad input.

    ``line``/``column`` offset error positions for formulas embedded in a
    larger file.  When ``arities`` is given, symbol arities are checked and
    accumulated across calls (one table per checked unit).
    """
    parser = _Parser(_tokenize(text, line, column))
    f = parser.formula()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line, tok.column)
    check_arities(f, arities, line=line, column=column)
    return f


def parse_term(text: str, *, line: int = 1, column: int = 1) -> Term:
    parser = _Parser(_tokenize(text, line, column))
    t = parser.term()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line, tok.column)
    return t


# ---------------------------------------------------------------------------
# Arity checking / signatures


class Signature:
    """Arities of the function and predicate symbols seen so far."""

    def __init__(self) -> None:
        self.functions: dict[str, int] = {}
        self.predicates: dict[str, int] = {}

    def note(self, kind: str, name: str, arity: int, line: int, column: int) -> None:
        table = self.functions if kind == "function" else self.predicates
        old = table.setdefault(name, arity)
        if old != arity:
            raise ArityError(
                f"{kind} symbol {name!r} used with arity {arity} but previously {old}",
                line, column,
            )

    def items(self) -> set[tuple[str, int, str]]:
        return {(n, a, "function") for n, a in self.functions.items()} | {
            (n, a, "predicate") for n, a in self.predicates.items()
        }


def check_arities(f: Formula, sig: Optional[Signature] = None, *,
                  line: int = 1, column: int = 1) -> Signature:
    """Check arity consistency within ``f`` (and across ``sig`` if given)."""
    sig = sig if sig is not None else Signature()

    def walk_term(t: Term) -> None:
        if isinstance(t, Fn):
            sig.note("function", t.name, len(t.args), line, column)
            for a in t.args:
                walk_term(a)

    def walk(g: Formula) -> None:
        match g:
            case Atom(pred, args):
                if pred != "=":
                    sig.note("predicate", pred, len(args), line, column)
                for a in args:
                    walk_term(a)
            case Not(body):
                walk(body)
            case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
                walk(l)
                walk(r)
            case Forall(_, body) | Exists(_, body):
                walk(body)
            case _:
                pass

    walk(f)
    return sig


def signature_of(f: Formula) -> tuple[frozenset[tuple[str, int]], frozenset[tuple[str, int]]]:
    """Return (functions, predicates) of ``f`` as (name, arity) sets.

    Equality is built in and not part of the signature.
    """
    funcs: set[tuple[str, int]] = set()
    preds: set[tuple[str, int]] = set()

    def walk_term(t: Term) -> None:
        if isinstance(t, Fn):
            funcs.add((t.name, len(t.args)))
            for a in t.args:
                walk_term(a)

    def walk(g: Formula) -> None:
        match g:
            case Atom(pred, args):
                if pred != "=":
                    preds.add((pred, len(args)))
                for a in args:
                    walk_term(a)
            case Not(body):
                walk(body)
            case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
                walk(l)
                walk(r)
            case Forall(_, body) | Exists(_, body):
                walk(body)
            case _:
                pass

    walk(f)
    return frozenset(funcs), frozenset(preds)


# ---------------------------------------------------------------------------
# Pretty-printing

# Binding levels, loosest to tightest: quantifiers bind their whole body, so
# they print without parentheses only in rightmost position.
_LEVEL_IFF = 1
_LEVEL_IMP = 2
_LEVEL_OR = 3
_LEVEL_AND = 4
_LEVEL_NOT = 5


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    return f"{t.name}({', '.join(print_term(a) for a in t.args)})"


def print_formula(f: Formula) -> str:
    """Minimal-parentheses rendering; ``parse_formula`` inverts it."""
    return _pp(f, 0, True)


def _pp(f: Formula, ctx: int, rightmost: bool) -> str:
    match f:
        case Falsity():
            return "false"
        case Truth():
            return "true"
        case Atom("=", (s, t)):
            return f"{print_term(s)} = {print_term(t)}"
        case Atom(pred, ()):
            return pred
        case Atom(pred, args):
            return f"{pred}({', '.join(print_term(a) for a in args)})"
        case Not(body):
            return "~" + _pp(body, _LEVEL_NOT, rightmost)
        case And(l, r):
            return _pp_bin(f, l, r, "/\\", _LEVEL_AND, ctx, rightmost)
        case Or(l, r):
            return _pp_bin(f, l, r, "\\/", _LEVEL_OR, ctx, rightmost)
        case Imp(l, r):
            return _pp_bin(f, l, r, "==>", _LEVEL_IMP, ctx, rightmost)
        case Iff(l, r):
            return _pp_bin(f, l, r, "<=>", _LEVEL_IFF, ctx, rightmost)
        case Forall(_, _) | Exists(_, _):
            quant = "forall" if isinstance(f, Forall) else "exists"
            names = []
            body: Formula = f
            while isinstance(body, type(f)):
                names.append(body.var)
                body = body.body
            inner = f"{quant} {' '.join(names)}. {_pp(body, 0, True)}"
            return inner if rightmost else f"({inner})"
    raise TypeError(f"not a formula: {f!r}")


def _pp_bin(f: Formula, l: Formula, r: Formula, op: str, level: int,
            ctx: int, rightmost: bool) -> str:
    paren = level < ctx
    inner_rightmost = True if paren else rightmost
    s = f"{_pp(l, level + 1, False)} {op} {_pp(r, level, inner_rightmost)}"
    return f"({s})" if paren else s


# ---------------------------------------------------------------------------
# Free variables and substitution


def free_vars_term(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out: set[str] = set()
    for a in t.args:
        out |= free_vars_term(a)
    return frozenset(out)


def all_vars_term(t: Term) -> frozenset[str]:
    # Terms have no binders, so every variable occurrence is free.
    return free_vars_term(t)


@lru_cache(maxsize=65536)
def free_vars(f: Formula) -> frozenset[str]:
    match f:
        case Atom(_, args):
            out: set[str] = set()
            for a in args:
                out |= free_vars_term(a)
            return frozenset(out)
        case Not(body):
            return free_vars(body)
        case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
            return free_vars(l) | free_vars(r)
        case Forall(var, body) | Exists(var, body):
            return free_vars(body) - {var}
        case _:
            return frozenset()


def subst_term(t: Term, var: str, replacement: Term) -> Term:
    if isinstance(t, Var):
        return replacement if t.name == var else t
    return Fn(t.name, tuple(subst_term(a, var, replacement) for a in t.args))


def all_names(f: Formula) -> frozenset[str]:
    """Every variable name in f: free and bound occurrences and binder names."""
    out: set[str] = set()

    def walk_term(t: Term) -> None:
        if isinstance(t, Var):
            out.add(t.name)
        else:
            for a in t.args:
                walk_term(a)

    def walk(g: Formula) -> None:
        match g:
            case Atom(_, args):
                for a in args:
                    walk_term(a)
            case Not(body):
                walk(body)
            case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
                walk(l)
                walk(r)
            case Forall(v, body) | Exists(v, body):
                out.add(v)
                walk(body)
            case _:
                pass

    walk(f)
    return frozenset(out)


def fresh_variant(name: str, avoid: frozenset[str] | set[str]) -> str:
    """First of name', name'', ... not in ``avoid``."""
    candidate = name + "'"
    while candidate in avoid:
        candidate += "'"
    return candidate


def subst(f: Formula, var: str, replacement: Term) -> Formula:
    """Capture-avoiding substitution of ``replacement`` for free ``var``.

    Bound variables are renamed with primes only when a capture would
    actually occur.
    """
    match f:
        case Atom(pred, args):
            return Atom(pred, tuple(subst_term(a, var, replacement) for a in args))
        case Not(body):
            return Not(subst(body, var, replacement))
        case And(l, r):
            return And(subst(l, var, replacement), subst(r, var, replacement))
        case Or(l, r):
            return Or(subst(l, var, replacement), subst(r, var, replacement))
        case Imp(l, r):
            return Imp(subst(l, var, replacement), subst(r, var, replacement))
        case Iff(l, r):
            return Iff(subst(l, var, replacement), subst(r, var, replacement))
        case Forall(bound, body) | Exists(bound, body):
            ctor = Forall if isinstance(f, Forall) else Exists
            if bound == var or var not in free_vars(body):
                return f
            if bound in free_vars_term(replacement):
                # Freshen against every name in sight so that renamings are
                # exactly invertible (the derived-rule layer relies on it).
                fresh = fresh_variant(
                    bound,
                    all_names(body) | free_vars_term(replacement) | {var},
                )
                body = subst(body, bound, Var(fresh))
                bound = fresh
            return ctor(bound, subst(body, var, replacement))
        case _:
            return f


@lru_cache(maxsize=8192)
def subterms(f: Formula) -> frozenset[Term]:
    """Every term (including subterms) occurring in ``f``."""
    out: set[Term] = set()

    def walk_term(t: Term) -> None:
        out.add(t)
        if isinstance(t, Fn):
            for a in t.args:
                walk_term(a)

    def walk(g: Formula) -> None:
        match g:
            case Atom(_, args):
                for a in args:
                    walk_term(a)
            case Not(body):
                walk(body)
            case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
                walk(l)
                walk(r)
            case Forall(_, body) | Exists(_, body):
                walk(body)
            case _:
                pass

    walk(f)
    return frozenset(out)
