"""The sealed kernel: the only producer of Theorem values.

Trust story: a ``Theorem`` can be obtained exclusively through the four
operations below — instantiating a schema from the fixed axiom table,
modus ponens, and generalization (plus reading a conclusion back).  The
construction token is module-private; everything else in this package
derives its results through these entry points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .syntax import (
    And, Atom, Exists, Falsity, Fn, Forall, Formula, Iff, Imp, Not, Or,
    Term, Truth, Var, free_vars, free_vars_term, mk_eq, print_formula,
)

__all__ = [
    "KernelError", "Theorem", "AxiomSchema",
    "AddImp", "DistribImp", "DoubleNeg", "AllImp", "ImpAll", "ExistsEq",
    "EqRefl", "FunCong", "PredCong", "IffImp1", "IffImp2", "ImpIff",
    "TrueDef", "NotDef", "AndDef", "OrDef", "ExistsDef",
    "instantiate_axiom", "modus_ponens", "generalize", "conclusion_of",
    "add_theorem_observer", "remove_theorem_observer",
]


class KernelError(Exception):
    pass


_CERT = object()  # module-private; the only capability that mints theorems

_observers: list[Callable[["Theorem"], None]] = []


def add_theorem_observer(fn: Callable[["Theorem"], None]) -> None:
    """Register a read-only tap on every theorem produced (used by tests)."""
    _observers.append(fn)


def remove_theorem_observer(fn: Callable[["Theorem"], None]) -> None:
    _observers.remove(fn)


class Theorem:
    """An opaque certificate that its conclusion is provable."""

    __slots__ = ("_conclusion",)

    def __init__(self, conclusion: Formula, token: object = None):
        if token is not _CERT:
            raise KernelError(
                "Theorem values can only be produced by the kernel inference rules"
            )
        self._conclusion = conclusion

    @property
    def conclusion(self) -> Formula:
        return self._conclusion

    def __repr__(self) -> str:
        return f"|- {print_formula(self._conclusion)}"


def _theorem(f: Formula) -> Theorem:
    th = Theorem(f, _CERT)
    for fn in _observers:
        fn(th)
    return th


def conclusion_of(th: Theorem) -> Formula:
    return th.conclusion


# ---------------------------------------------------------------------------
# Axiom schema table (closed; side conditions checked at instantiation)


@dataclass(frozen=True)
class AddImp:
    p: Formula
    q: Formula


@dataclass(frozen=True)
class DistribImp:
    p: Formula
    q: Formula
    r: Formula


@dataclass(frozen=True)
class DoubleNeg:
    p: Formula


@dataclass(frozen=True)
class AllImp:
    x: str
    p: Formula
    q: Formula


@dataclass(frozen=True)
class ImpAll:
    x: str
    p: Formula


@dataclass(frozen=True)
class ExistsEq:
    x: str
    t: Term


@dataclass(frozen=True)
class EqRefl:
    t: Term


@dataclass(frozen=True)
class FunCong:
    f: str
    lhs: tuple[Term, ...]
    rhs: tuple[Term, ...]


@dataclass(frozen=True)
class PredCong:
    pred: str
    lhs: tuple[Term, ...]
    rhs: tuple[Term, ...]


@dataclass(frozen=True)
class IffImp1:
    p: Formula
    q: Formula


@dataclass(frozen=True)
class IffImp2:
    p: Formula
    q: Formula


@dataclass(frozen=True)
class ImpIff:
    p: Formula
    q: Formula


@dataclass(frozen=True)
class TrueDef:
    pass


@dataclass(frozen=True)
class NotDef:
    p: Formula


@dataclass(frozen=True)
class AndDef:
    p: Formula
    q: Formula


@dataclass(frozen=True)
class OrDef:
    p: Formula
    q: Formula


@dataclass(frozen=True)
class ExistsDef:
    x: str
    p: Formula


AxiomSchema = Union[
    AddImp, DistribImp, DoubleNeg, AllImp, ImpAll, ExistsEq, EqRefl,
    FunCong, PredCong, IffImp1, IffImp2, ImpIff, TrueDef, NotDef, AndDef,
    OrDef, ExistsDef,
]


def _cong_chain(eqs: list[Formula], conclusion: Formula) -> Formula:
    f = conclusion
    for e in reversed(eqs):
        f = Imp(e, f)
    return f


def instantiate_axiom(schema: AxiomSchema) -> Theorem:
    """Produce the instance of one of the seventeen axiom schemas."""
    match schema:
        case AddImp(p, q):
            return _theorem(Imp(p, Imp(q, p)))
        case DistribImp(p, q, r):
            return _theorem(Imp(Imp(p, Imp(q, r)), Imp(Imp(p, q), Imp(p, r))))
        case DoubleNeg(p):
            return _theorem(Imp(Imp(Imp(p, Falsity()), Falsity()), p))
        case AllImp(x, p, q):
            return _theorem(Imp(Forall(x, Imp(p, q)), Imp(Forall(x, p), Forall(x, q))))
        case ImpAll(x, p):
            if x in free_vars(p):
                raise KernelError(
                    f"ImpAll: variable {x!r} must not be free in {print_formula(p)!r}"
                )
            return _theorem(Imp(p, Forall(x, p)))
        case ExistsEq(x, t):
            if x in free_vars_term(t):
                raise KernelError(f"ExistsEq: variable {x!r} must not occur in the term")
            return _theorem(Exists(x, mk_eq(Var(x), t)))
        case EqRefl(t):
            return _theorem(mk_eq(t, t))
        case FunCong(f, lhs, rhs):
            if len(lhs) != len(rhs) or not lhs:
                raise KernelError("FunCong: argument lists must be nonempty and equal-length")
            eqs = [mk_eq(s, t) for s, t in zip(lhs, rhs)]
            return _theorem(_cong_chain(eqs, mk_eq(Fn(f, tuple(lhs)), Fn(f, tuple(rhs)))))
        case PredCong(pred, lhs, rhs):
            if len(lhs) != len(rhs) or not lhs:
                raise KernelError("PredCong: argument lists must be nonempty and equal-length")
            eqs = [mk_eq(s, t) for s, t in zip(lhs, rhs)]
            return _theorem(
                _cong_chain(eqs, Imp(Atom(pred, tuple(lhs)), Atom(pred, tuple(rhs))))
            )
        case IffImp1(p, q):
            return _theorem(Imp(Iff(p, q), Imp(p, q)))
        case IffImp2(p, q):
            return _theorem(Imp(Iff(p, q), Imp(q, p)))
        case ImpIff(p, q):
            return _theorem(Imp(Imp(p, q), Imp(Imp(q, p), Iff(p, q))))
        case TrueDef():
            return _theorem(Iff(Truth(), Imp(Falsity(), Falsity())))
        case NotDef(p):
            return _theorem(Iff(Not(p), Imp(p, Falsity())))
        case AndDef(p, q):
            return _theorem(
                Iff(And(p, q), Imp(Imp(p, Imp(q, Falsity())), Falsity()))
            )
        case OrDef(p, q):
            return _theorem(Iff(Or(p, q), Not(And(Not(p), Not(q)))))
        case ExistsDef(x, p):
            return _theorem(Iff(Exists(x, p), Not(Forall(x, Not(p)))))
    raise KernelError(f"unknown axiom schema: {schema!r}")


def modus_ponens(imp: Theorem, ant: Theorem) -> Theorem:
    """From |- p ==> q and |- p conclude |- q."""
    c = imp.conclusion
    if not isinstance(c, Imp):
        raise KernelError(f"modus_ponens: not an implication: {imp!r}")
    if c.left != ant.conclusion:
        raise KernelError(
            "modus_ponens: antecedent mismatch:\n"
            f"  implication: {imp!r}\n  argument:    {ant!r}"
        )
    return _theorem(c.right)


def generalize(x: str, th: Theorem) -> Theorem:
    """From |- p conclude |- forall x. p."""
    return _theorem(Forall(x, th.conclusion))
