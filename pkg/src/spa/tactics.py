"""Goal-stack engine: subgoals, justification functions, and tactics.

A ``GoalState`` is a list of subgoals plus a composition closure that turns
one discharging theorem per subgoal into the theorem of the original
statement.  A theorem *discharges* a subgoal when its conclusion is
``C ==> target`` for ``C`` the right-nested conjunction of the subgoal's
assumption formulas, or exactly ``target`` when there are none.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from . import rules
from .kernel import AllImp, ImpAll, Theorem, generalize, instantiate_axiom, modus_ponens
from .syntax import (
    And, Exists, Forall, Formula, Imp, Term, free_vars, print_formula, subst,
)

__all__ = [
    "TacticError", "JustificationError",
    "Subgoal", "GoalState", "Justification", "JustificationRegistry",
    "set_goal", "assumps", "conj_intro_tac", "assume_tac", "fix_tac",
    "take_tac", "have_tac", "show_tac", "by_mp", "register_justification",
    "extract_theorem", "default_registry", "first_subgoal",
    "fresh_anonymous_label",
    "BY_MP_UNAPPLICABLE", "BY_MP_WRONG_CONCLUSION",
]


class TacticError(Exception):
    pass


class JustificationError(Exception):
    pass


BY_MP_UNAPPLICABLE = "by_mp: unapplicable assumptions"
BY_MP_WRONG_CONCLUSION = "by_mp: wrong conclusion"


@dataclass(frozen=True)
class Subgoal:
    assumptions: tuple[tuple[str, Formula], ...]
    target: Formula

    def labels(self) -> list[str]:
        return [label for label, _ in self.assumptions]

    def formulas(self) -> list[Formula]:
        return [f for _, f in self.assumptions]

    def discharge_formula(self) -> Formula:
        if not self.assumptions:
            return self.target
        return Imp(rules.conj_of(self.formulas()), self.target)


@dataclass(frozen=True)
class GoalState:
    subgoals: tuple[Subgoal, ...]
    compose: Callable[[Sequence[Theorem]], Theorem]
    original: Formula


def check_discharges(th: Theorem, subgoal: Subgoal, context: str) -> None:
    want = subgoal.discharge_formula()
    if th.conclusion != want:
        raise TacticError(
            f"{context}: theorem does not discharge the subgoal:\n"
            f"  produced: {print_formula(th.conclusion)}\n"
            f"  required: {print_formula(want)}"
        )


def first_subgoal(state: GoalState, context: str) -> Subgoal:
    if not state.subgoals:
        raise TacticError(f"{context}: no subgoals remain")
    return state.subgoals[0]


def _replace_first(state: GoalState, new_subgoals: Sequence[Subgoal],
                   combine: Callable[[list[Theorem]], Theorem]) -> GoalState:
    rest = state.subgoals[1:]
    k = len(new_subgoals)
    old_compose = state.compose

    def compose(ths: Sequence[Theorem]) -> Theorem:
        ths = list(ths)
        if len(ths) != k + len(rest):
            raise TacticError(
                f"compose: expected {k + len(rest)} theorems, got {len(ths)}"
            )
        head = combine(ths[:k])
        return old_compose([head] + ths[k:])

    return GoalState(tuple(new_subgoals) + rest, compose, state.original)


# ---------------------------------------------------------------------------
# Entry and exit


def set_goal(f: Formula) -> GoalState:
    subgoal = Subgoal((), f)

    def compose(ths: Sequence[Theorem]) -> Theorem:
        (th,) = tuple(ths)
        check_discharges(th, subgoal, "set_goal")
        return th

    return GoalState((subgoal,), compose, f)


def extract_theorem(state: GoalState) -> Theorem:
    if state.subgoals:
        raise TacticError(f"qed: unproven subgoals remain ({len(state.subgoals)})")
    th = state.compose([])
    if th.conclusion != state.original:
        raise TacticError(
            "qed: conclusion mismatch:\n"
            f"  proved:    {print_formula(th.conclusion)}\n"
            f"  statement: {print_formula(state.original)}"
        )
    return th


# ---------------------------------------------------------------------------
# Assumption machinery


def assumps(asl: Sequence[tuple[str, Formula]]) -> list[tuple[str, Theorem]]:
    """Pair each label with |- C ==> a for C the conjunction of all of them."""
    asl = list(asl)
    if not asl:
        raise TacticError("assumps: empty assumption list")
    ths = rules.conj_projections([f for _, f in asl])
    return [(label, th) for (label, _), th in zip(asl, ths)]


# ---------------------------------------------------------------------------
# Structural tactics


def conj_intro_tac(state: GoalState) -> GoalState:
    sg = first_subgoal(state, "conj_intro_tac")
    if not isinstance(sg.target, And):
        raise TacticError("conj_intro_tac: goal is not a conjunction")
    p, q = sg.target.left, sg.target.right
    left = Subgoal(sg.assumptions, p)
    right = Subgoal(sg.assumptions, q)

    def combine(ths: list[Theorem]) -> Theorem:
        th_p, th_q = ths
        check_discharges(th_p, left, "conj_intro_tac")
        check_discharges(th_q, right, "conj_intro_tac")
        pair = rules.and_pair(p, q)
        if not sg.assumptions:
            return modus_ponens(modus_ponens(pair, th_p), th_q)
        return rules.right_mp(rules.imp_trans(th_p, pair), th_q)

    return _replace_first(state, [left, right], combine)


def assume_tac(label: str, p: Formula, state: GoalState) -> GoalState:
    sg = first_subgoal(state, "assume")
    if not isinstance(sg.target, Imp):
        raise TacticError(
            f"assume: goal is not an implication: {print_formula(sg.target)}"
        )
    if sg.target.left != p:
        raise TacticError(
            "assume: stated formula differs from the antecedent:\n"
            f"  stated:     {print_formula(p)}\n"
            f"  antecedent: {print_formula(sg.target.left)}"
        )
    if label in sg.labels():
        raise TacticError(f"assume: duplicate label {label!r}")
    q = sg.target.right
    child = Subgoal(sg.assumptions + ((label, p),), q)

    def combine(ths: list[Theorem]) -> Theorem:
        (th,) = ths
        check_discharges(th, child, "assume")
        if not sg.assumptions:
            return th
        if len(sg.assumptions) == 1:
            return rules.shunt(th)
        ext = rules.conj_extend(sg.formulas(), p)
        return rules.imp_trans(ext, rules.imp_add_assum(p, th))

    return _replace_first(state, [child], combine)


def fix_tac(x: str, state: GoalState) -> GoalState:
    sg = first_subgoal(state, "fix")
    if not isinstance(sg.target, Forall) or sg.target.var != x:
        raise TacticError(
            f"fix: goal is not universal in {x!r}: {print_formula(sg.target)}"
        )
    for label, f in sg.assumptions:
        if x in free_vars(f):
            raise TacticError(
                f"fix: variable {x!r} occurs free in assumption {label!r}"
            )
    p = sg.target.body
    child = Subgoal(sg.assumptions, p)

    def combine(ths: list[Theorem]) -> Theorem:
        (th,) = ths
        check_discharges(th, child, "fix")
        if not sg.assumptions:
            return generalize(x, th)
        c = rules.conj_of(sg.formulas())
        return rules.imp_trans(
            instantiate_axiom(ImpAll(x, c)),
            modus_ponens(instantiate_axiom(AllImp(x, c, p)), generalize(x, th)),
        )

    return _replace_first(state, [child], combine)


def take_tac(t: Term, state: GoalState) -> GoalState:
    sg = first_subgoal(state, "take")
    if not isinstance(sg.target, Exists):
        raise TacticError(f"take: goal is not existential: {print_formula(sg.target)}")
    x, body = sg.target.var, sg.target.body
    p = subst(body, x, t)
    child = Subgoal(sg.assumptions, p)

    def combine(ths: list[Theorem]) -> Theorem:
        (th,) = ths
        check_discharges(th, child, "take")
        intro = rules.exists_intro_th(t, x, body)
        if not sg.assumptions:
            return modus_ponens(intro, th)
        return rules.imp_trans(th, intro)

    return _replace_first(state, [child], combine)


# ---------------------------------------------------------------------------
# Justifications


@dataclass(frozen=True)
class Justification:
    name: str
    apply: Callable[[list[str], Formula, GoalState], Theorem]


class JustificationRegistry:
    def __init__(self, entries: Optional[dict[str, Justification]] = None):
        self._entries = dict(entries or {})

    def lookup(self, name: str) -> Justification:
        try:
            return self._entries[name]
        except KeyError:
            raise JustificationError(f"unknown justification {name!r}") from None

    def names(self) -> list[str]:
        return sorted(self._entries)


def register_justification(reg: JustificationRegistry, name: str,
                           fn: Callable[[list[str], Formula, GoalState], Theorem]
                           ) -> JustificationRegistry:
    """Return a registry extended with a new justification; duplicates are errors."""
    if name in reg._entries:
        raise JustificationError(f"justification {name!r} is already registered")
    return JustificationRegistry({**reg._entries, name: Justification(name, fn)})


def by_mp(args: Sequence[str], p: Formula, state: GoalState) -> Theorem:
    """Modus ponens between two ambient assumptions.

    ``args`` names the implication and its antecedent among the current
    assumptions; the result discharges the goal ``p`` while keeping every
    assumption available.
    """
    if len(args) != 2:
        raise JustificationError(BY_MP_UNAPPLICABLE)
    ab, a = args
    sg = first_subgoal(state, "by_mp")
    if not sg.assumptions:
        raise JustificationError(BY_MP_UNAPPLICABLE)
    table = dict(assumps(sg.assumptions))
    try:
        th = rules.right_mp(table[ab], table[a])
    except (KeyError, rules.RuleError):
        raise JustificationError(BY_MP_UNAPPLICABLE) from None
    conclusion = th.conclusion
    consequent = conclusion.right if isinstance(conclusion, Imp) else conclusion
    if consequent != p:
        raise JustificationError(BY_MP_WRONG_CONCLUSION)
    return th


def _mp_justification(args: list[str], target: Formula, state: GoalState) -> Theorem:
    return by_mp(args, target, state)


def default_registry(env: Optional[Mapping[str, Theorem]] = None,
                     budget=None) -> JustificationRegistry:
    """Registry preloaded with "at_once" and "mp".

    ``env`` supplies globally proven lemmas citable by name; the prover
    budget applies to every "at_once" call made through the registry.
    """
    from . import prover

    env = dict(env or {})
    budget = budget or prover.Budget()

    def at_once_justification(args: list[str], target: Formula,
                              state: GoalState) -> Theorem:
        sg = first_subgoal(state, "at once")
        amap = dict(sg.assumptions)
        facts: list[tuple[Optional[str], Formula, Optional[Theorem]]] = []
        for label in args:
            if label in amap:
                facts.append((label, amap[label], None))
            elif label in env:
                facts.append((None, env[label].conclusion, env[label]))
            else:
                raise JustificationError(f"unknown label {label!r} in justification")
        try:
            th = prover.at_once([f for _, f, _ in facts], target, budget)
        except prover.BudgetExceeded as e:
            raise JustificationError(f"at once: {e}") from None
        return prover.discharge_with_facts(th, sg, facts)

    reg = JustificationRegistry()
    reg = register_justification(reg, "at_once", at_once_justification)
    reg = register_justification(reg, "mp", _mp_justification)
    return reg


# ---------------------------------------------------------------------------
# Declarative steps


def fresh_anonymous_label(sg: Subgoal) -> str:
    n = 1
    labels = set(sg.labels())
    while f"#{n}" in labels:
        n += 1
    return f"#{n}"


def have_tac(label: Optional[str], p: Formula, just: Justification,
             args: Sequence[str], so_label: Optional[str],
             state: GoalState) -> GoalState:
    sg = first_subgoal(state, "have")
    if label is not None and label in sg.labels():
        raise TacticError(f"have: duplicate label {label!r}")
    full_args = ([so_label] if so_label else []) + list(args)
    th = just.apply(full_args, p, state)
    check_discharges(th, Subgoal(sg.assumptions, p), "have")
    actual = label if label is not None else fresh_anonymous_label(sg)
    child = Subgoal(sg.assumptions + ((actual, p),), sg.target)

    def combine(ths: list[Theorem]) -> Theorem:
        (th_c,) = ths
        check_discharges(th_c, child, "have")
        if not sg.assumptions:
            return modus_ponens(th_c, th)
        ext = rules.conj_extend(sg.formulas(), p)
        grown = rules.right_mp(ext, th)
        return rules.imp_trans(grown, th_c)

    return _replace_first(state, [child], combine)


def show_tac(p: Formula, just: Justification, args: Sequence[str],
             so_label: Optional[str], state: GoalState) -> GoalState:
    sg = first_subgoal(state, "show")
    if sg.target != p:
        raise TacticError(
            "show: stated formula differs from the goal:\n"
            f"  stated: {print_formula(p)}\n"
            f"  goal:   {print_formula(sg.target)}"
        )
    full_args = ([so_label] if so_label else []) + list(args)
    th = just.apply(full_args, p, state)
    check_discharges(th, sg, "show")
    old_compose = state.compose
    rest = state.subgoals[1:]

    def compose(ths: Sequence[Theorem]) -> Theorem:
        return old_compose([th] + list(ths))

    return GoalState(rest, compose, state.original)
