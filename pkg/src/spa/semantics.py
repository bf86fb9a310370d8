"""Finite-model semantics: Tarskian evaluation, exhaustive validity
checking on small domains, and seeded random interpretations.

Finite validity is a falsification oracle only: a countermodel refutes a
formula, but absence of countermodels up to a size bound proves nothing.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .syntax import (
    And, Atom, Exists, Falsity, Forall, Formula, Iff, Imp, Not, Or, Term,
    Truth, Var, free_vars, signature_of,
)

__all__ = [
    "Interpretation", "SemanticsError", "EnumerationBudgetError",
    "eval_term", "holds", "valid_up_to", "find_countermodel",
    "random_interpretation", "interpretations",
]

FuncTable = dict[tuple[int, ...], int]
PredTable = dict[tuple[int, ...], bool]


class SemanticsError(Exception):
    pass


class EnumerationBudgetError(SemanticsError):
    """The requested exhaustive enumeration is too large."""


@dataclass
class Interpretation:
    """A finite structure over the domain {0, ..., domain_size-1}.

    Equality is always interpreted as identity and never appears in the
    tables.
    """

    domain_size: int
    functions: dict[tuple[str, int], FuncTable] = field(default_factory=dict)
    predicates: dict[tuple[str, int], PredTable] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.domain_size < 1:
            raise SemanticsError("domain_size must be at least 1")

    def function(self, name: str, arity: int) -> FuncTable:
        try:
            return self.functions[(name, arity)]
        except KeyError:
            raise SemanticsError(f"no table for function symbol {name}/{arity}") from None

    def predicate(self, name: str, arity: int) -> PredTable:
        try:
            return self.predicates[(name, arity)]
        except KeyError:
            raise SemanticsError(f"no table for predicate symbol {name}/{arity}") from None


Valuation = dict[str, int]


def eval_term(m: Interpretation, v: Valuation, t: Term) -> int:
    if isinstance(t, Var):
        # Unmapped variables default to element 0, keeping evaluation total.
        return v.get(t.name, 0)
    args = tuple(eval_term(m, v, a) for a in t.args)
    return m.function(t.name, len(t.args))[args]


def holds(m: Interpretation, v: Valuation, f: Formula) -> bool:
    match f:
        case Truth():
            return True
        case Falsity():
            return False
        case Atom("=", (s, t)):
            return eval_term(m, v, s) == eval_term(m, v, t)
        case Atom(pred, args):
            vals = tuple(eval_term(m, v, a) for a in args)
            return m.predicate(pred, len(args))[vals]
        case Not(body):
            return not holds(m, v, body)
        case And(l, r):
            return holds(m, v, l) and holds(m, v, r)
        case Or(l, r):
            return holds(m, v, l) or holds(m, v, r)
        case Imp(l, r):
            return (not holds(m, v, l)) or holds(m, v, r)
        case Iff(l, r):
            return holds(m, v, l) == holds(m, v, r)
        case Forall(var, body) | Exists(var, body):
            saved = v.get(var)
            want_all = isinstance(f, Forall)
            result = want_all
            for d in range(m.domain_size):
                v[var] = d
                got = holds(m, v, body)
                if got != want_all:
                    result = not want_all
                    break
            if saved is None:
                v.pop(var, None)
            else:
                v[var] = saved
            return result
    raise TypeError(f"not a formula: {f!r}")


def _table_count(size: int, funcs: list[tuple[str, int]], preds: list[tuple[str, int]]) -> int:
    total = 1
    for _, arity in funcs:
        total *= size ** (size ** arity)
    for _, arity in preds:
        total *= 2 ** (size ** arity)
    return total


def interpretations(size: int, funcs: frozenset[tuple[str, int]],
                    preds: frozenset[tuple[str, int]]) -> Iterator[Interpretation]:
    """Enumerate every interpretation of the signature on a given domain."""
    funcs_l = sorted(funcs)
    preds_l = sorted(preds)
    domain = range(size)

    func_choices = []
    for name, arity in funcs_l:
        inputs = list(itertools.product(domain, repeat=arity))
        tables = [
            dict(zip(inputs, outputs))
            for outputs in itertools.product(domain, repeat=len(inputs))
        ]
        func_choices.append(((name, arity), tables))
    pred_choices = []
    for name, arity in preds_l:
        inputs = list(itertools.product(domain, repeat=arity))
        tables = [
            dict(zip(inputs, outputs))
            for outputs in itertools.product((False, True), repeat=len(inputs))
        ]
        pred_choices.append(((name, arity), tables))

    for f_tables in itertools.product(*(t for _, t in func_choices)):
        for p_tables in itertools.product(*(t for _, t in pred_choices)):
            yield Interpretation(
                size,
                {k: tab for (k, _), tab in zip(func_choices, f_tables)},
                {k: tab for (k, _), tab in zip(pred_choices, p_tables)},
            )


def find_countermodel(f: Formula, max_size: int, *,
                      budget: int = 2_000_000) -> Optional[tuple[Interpretation, Valuation]]:
    """Search all interpretations of size <= max_size for one falsifying f.

    Free variables are swept universally.  Raises EnumerationBudgetError when
    the signature is too rich for exhaustive search.
    """
    funcs, preds = signature_of(f)
    fvs = sorted(free_vars(f))
    total = 0
    for size in range(1, max_size + 1):
        total += _table_count(size, sorted(funcs), sorted(preds)) * size ** len(fvs)
    if total > budget:
        raise EnumerationBudgetError(
            f"enumeration of {total} cases exceeds the budget of {budget}"
        )
    for size in range(1, max_size + 1):
        for m in interpretations(size, funcs, preds):
            for values in itertools.product(range(size), repeat=len(fvs)):
                v = dict(zip(fvs, values))
                if not holds(m, v, f):
                    return m, v
    return None


def valid_up_to(f: Formula, max_size: int, *, budget: int = 2_000_000) -> bool:
    """True iff f holds in every interpretation of every size <= max_size."""
    return find_countermodel(f, max_size, budget=budget) is None


def random_interpretation(seed: int, size: int,
                          funcs: frozenset[tuple[str, int]],
                          preds: frozenset[tuple[str, int]]) -> Interpretation:
    """Deterministic function of (seed, size, signature)."""
    if size < 1:
        raise SemanticsError("size must be at least 1")
    key = f"{seed}|{size}|{sorted(funcs)}|{sorted(preds)}"
    rng = random.Random(key)
    functions: dict[tuple[str, int], FuncTable] = {}
    predicates: dict[tuple[str, int], PredTable] = {}
    for name, arity in sorted(funcs):
        functions[(name, arity)] = {
            inputs: rng.randrange(size)
            for inputs in itertools.product(range(size), repeat=arity)
        }
    for name, arity in sorted(preds):
        predicates[(name, arity)] = {
            inputs: rng.random() < 0.5
            for inputs in itertools.product(range(size), repeat=arity)
        }
    return Interpretation(size, functions, predicates)


def describe_countermodel(m: Interpretation, v: Valuation) -> str:
    lines = [f"domain: {{0..{m.domain_size - 1}}}"]
    for (name, arity), table in sorted(m.functions.items()):
        entries = ", ".join(
            f"{name}({', '.join(map(str, k))}) = {val}" for k, val in sorted(table.items())
        )
        lines.append(f"function {name}/{arity}: {entries}")
    for (name, arity), table in sorted(m.predicates.items()):
        true_rows = [k for k, val in sorted(table.items()) if val]
        shown = ", ".join("(" + ", ".join(map(str, k)) + ")" for k in true_rows)
        lines.append(f"predicate {name}/{arity} holds at: {{{shown}}}")
    if v:
        lines.append("valuation: " + ", ".join(f"{k} = {val}" for k, val in sorted(v.items())))
    return "\n".join(lines)
