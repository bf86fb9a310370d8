"""The declarative proof-script language and its interpreter.

A script is a sequence of lemmas::

    lemma <name> : "<formula>"
    proof
      <steps>
    qed

Steps: ``assume [<label>:] "<f>"``, ``fix <v> ...``, ``take "<t>"``,
``split``, ``[so] have [<label>:] "<f>" <just>``, ``[so] show "<f>" <just>``
with justifications ``at once``, ``by <label>, ...``, ``by <name>(<args>)``
or a nested ``proof ... qed`` block.  ``so`` passes the immediately
preceding assume/have fact to the justification.

Checking never raises past a lemma: every step yields a report entry with
status ok, error or unchecked, plus a snapshot of the goals after it.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import tactics
from .kernel import Theorem
from .syntax import (
    Formula, ParseError, Signature, Term, free_vars, parse_formula,
    parse_term, print_formula,
)
from .tactics import (
    GoalState, JustificationError, Subgoal, TacticError, default_registry,
)

__all__ = [
    "ProofScript", "Lemma", "Step", "Report", "LemmaReport", "StepReport",
    "parse_script", "run_script", "check_text",
]


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class AtOnce:
    pass


@dataclass(frozen=True)
class By:
    labels: tuple[str, ...]


@dataclass(frozen=True)
class ByNamed:
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Nested:
    steps: tuple["Step", ...]


Just = Union[AtOnce, By, ByNamed, Nested]


@dataclass(frozen=True)
class AssumeStep:
    line: int
    label: Optional[str]
    formula: Formula


@dataclass(frozen=True)
class FixStep:
    line: int
    names: tuple[str, ...]


@dataclass(frozen=True)
class TakeStep:
    line: int
    term: Term


@dataclass(frozen=True)
class SplitStep:
    line: int


@dataclass(frozen=True)
class HaveStep:
    line: int
    so: bool
    label: Optional[str]
    formula: Formula
    just: Just


@dataclass(frozen=True)
class ShowStep:
    line: int
    so: bool
    formula: Formula
    just: Just


Step = Union[AssumeStep, FixStep, TakeStep, SplitStep, HaveStep, ShowStep]


@dataclass(frozen=True)
class Lemma:
    name: str
    statement: Formula
    steps: tuple[Step, ...]
    line: int
    qed_line: int


@dataclass(frozen=True)
class ProofScript:
    lemmas: tuple[Lemma, ...]


def flatten_steps(steps: Sequence[Step]) -> list[Step]:
    out: list[Step] = []
    for s in steps:
        out.append(s)
        just = getattr(s, "just", None)
        if isinstance(just, Nested):
            out.extend(flatten_steps(just.steps))
    return out


# ---------------------------------------------------------------------------
# Lexer / parser

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<string>"[^"\n]*")
    | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
    | (?P<sym>[:(),])
    """,
    re.VERBOSE,
)

_KEYWORDS = {
    "lemma", "proof", "qed", "assume", "fix", "take", "split", "have",
    "show", "so", "by", "at", "once",
}


@dataclass(frozen=True)
class _Tok:
    kind: str  # "kw", "ident", "string", "sym", "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        kind = m.lastgroup
        if kind == "ws":
            for ch in lexeme:
                if ch == "\n":
                    line, col = line + 1, 1
                else:
                    col += 1
        else:
            if kind == "ident" and lexeme in _KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, lexeme, line, col))
            col += len(lexeme)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _ScriptParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.signature = Signature()

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[_Tok] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column)

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if tok.text != text:
            got = tok.text if tok.kind != "eof" else "end of script"
            raise self.fail(f"expected {text!r}, found {got!r}")
        return self.next()

    def expect_ident(self, what: str) -> _Tok:
        tok = self.peek()
        if tok.kind != "ident":
            got = tok.text if tok.kind != "eof" else "end of script"
            raise self.fail(f"expected {what}, found {got!r}")
        return self.next()

    def formula_string(self) -> Formula:
        tok = self.peek()
        if tok.kind != "string":
            got = tok.text if tok.kind != "eof" else "end of script"
            raise self.fail(f'expected a quoted formula, found {got!r}')
        self.next()
        return parse_formula(tok.text[1:-1], line=tok.line,
                             column=tok.column + 1, arities=self.signature)

    def term_string(self) -> Term:
        tok = self.peek()
        if tok.kind != "string":
            raise self.fail("expected a quoted term")
        self.next()
        return parse_term(tok.text[1:-1], line=tok.line, column=tok.column + 1)

    def script(self) -> ProofScript:
        lemmas: list[Lemma] = []
        names: set[str] = set()
        while self.peek().kind != "eof":
            lemma = self.lemma()
            if lemma.name in names:
                raise ParseError(f"duplicate lemma name {lemma.name!r}",
                                 lemma.line, 1)
            names.add(lemma.name)
            lemmas.append(lemma)
        if not lemmas:
            raise self.fail("empty script: expected at least one lemma")
        return ProofScript(tuple(lemmas))

    def lemma(self) -> Lemma:
        kw = self.expect("lemma")
        name = self.expect_ident("a lemma name").text
        self.expect(":")
        statement = self.formula_string()
        self.expect("proof")
        steps = self.steps_until_qed()
        qed = self.expect("qed")
        return Lemma(name, statement, tuple(steps), kw.line, qed.line)

    def steps_until_qed(self) -> list[Step]:
        steps: list[Step] = []
        while self.peek().text != "qed":
            if self.peek().kind == "eof":
                raise self.fail("expected 'qed' before end of script")
            steps.append(self.step())
        return steps

    def step(self) -> Step:
        tok = self.peek()
        if tok.text == "assume":
            self.next()
            label = self.optional_label()
            return AssumeStep(tok.line, label, self.formula_string())
        if tok.text == "fix":
            self.next()
            names = []
            while self.peek().kind == "ident":
                names.append(self.next().text)
            if not names:
                raise self.fail("expected at least one variable after 'fix'")
            return FixStep(tok.line, tuple(names))
        if tok.text == "take":
            self.next()
            return TakeStep(tok.line, self.term_string())
        if tok.text == "split":
            self.next()
            return SplitStep(tok.line)
        so = False
        if tok.text == "so":
            self.next()
            so = True
            tok2 = self.peek()
            if tok2.text not in ("have", "show"):
                raise self.fail("'so' must be followed by 'have' or 'show'")
        head = self.peek()
        if head.text == "have":
            self.next()
            label = self.optional_label()
            f = self.formula_string()
            return HaveStep(tok.line, so, label, f, self.justification())
        if head.text == "show":
            self.next()
            f = self.formula_string()
            return ShowStep(tok.line, so, f, self.justification())
        got = tok.text if tok.kind != "eof" else "end of script"
        raise self.fail(f"expected a proof step, found {got!r}")

    def optional_label(self) -> Optional[str]:
        if self.peek().kind == "ident" and self.peek(1).text == ":":
            label = self.next().text
            self.next()
            return label
        return None

    def justification(self) -> Just:
        tok = self.peek()
        if tok.text == "at":
            self.next()
            self.expect("once")
            return AtOnce()
        if tok.text == "proof":
            self.next()
            steps = self.steps_until_qed()
            self.expect("qed")
            return Nested(tuple(steps))
        if tok.text == "by":
            self.next()
            first = self.expect_ident("a label or justification name")
            if self.peek().text == "(":
                self.next()
                args = []
                if self.peek().text != ")":
                    args.append(self.expect_ident("an argument label").text)
                    while self.peek().text == ",":
                        self.next()
                        args.append(self.expect_ident("an argument label").text)
                self.expect(")")
                return ByNamed(first.text, tuple(args))
            labels = [first.text]
            while self.peek().text == ",":
                self.next()
                labels.append(self.expect_ident("a label").text)
            return By(tuple(labels))
        got = tok.text if tok.kind != "eof" else "end of script"
        raise self.fail(
            f"expected a justification ('at once', 'by ...' or 'proof'), found {got!r}"
        )


def parse_script(text: str) -> ProofScript:
    return _ScriptParser(text).script()


# ---------------------------------------------------------------------------
# Reports


@dataclass
class GoalView:
    assumptions: list[dict]
    target: str

    def to_dict(self) -> dict:
        return {"assumptions": self.assumptions, "target": self.target}


@dataclass
class StepReport:
    line: int
    status: str  # "ok" | "error" | "unchecked"
    message: Optional[str] = None
    goals_after: list[GoalView] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "line": self.line,
            "status": self.status,
            "message": self.message,
            "goals": [g.to_dict() for g in self.goals_after],
        }


@dataclass
class LemmaReport:
    name: str
    statement: str
    complete: bool
    steps: list[StepReport]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "complete": self.complete,
            "warnings": self.warnings,
            "steps": [s.to_dict() for s in self.steps],
        }


@dataclass
class Report:
    complete: bool
    lemmas: list[LemmaReport]
    error: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "complete": self.complete,
            "lemmas": [l.to_dict() for l in self.lemmas],
            "error": self.error,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _snapshot(state: GoalState) -> list[GoalView]:
    views = []
    for sg in state.subgoals:
        views.append(GoalView(
            [{"label": label, "formula": print_formula(f)}
             for label, f in sg.assumptions],
            print_formula(sg.target),
        ))
    return views


# ---------------------------------------------------------------------------
# Interpreter


class _StepFailure(Exception):
    """Internal: aborts a lemma after the failing step's report is recorded."""


class _LemmaRunner:
    def __init__(self, registry, entries: list[StepReport]):
        self.registry = registry
        self.entries = entries
        self.done: set[int] = set()  # ids of executed steps

    def run_block(self, steps: Sequence[Step], state: GoalState) -> GoalState:
        prev_label: Optional[str] = None
        for step in steps:
            state, prev_label = self.run_step(step, state, prev_label)
        return state

    def run_step(self, step: Step, state: GoalState,
                 prev_label: Optional[str]) -> tuple[GoalState, Optional[str]]:
        try:
            new_state, new_prev = self.execute(step, state, prev_label)
        except (TacticError, JustificationError) as e:
            self.done.add(id(step))
            self.entries.append(StepReport(step.line, "error", str(e),
                                           _snapshot(state)))
            raise _StepFailure() from None
        self.done.add(id(step))
        self.entries.append(StepReport(step.line, "ok", None,
                                       _snapshot(new_state)))
        return new_state, new_prev

    def execute(self, step: Step, state: GoalState,
                prev_label: Optional[str]) -> tuple[GoalState, Optional[str]]:
        match step:
            case AssumeStep(_, label, f):
                sg = tactics.first_subgoal(state, "assume")
                actual = label or tactics.fresh_anonymous_label(sg)
                return tactics.assume_tac(actual, f, state), actual
            case FixStep(_, names):
                for v in names:
                    state = tactics.fix_tac(v, state)
                return state, None
            case TakeStep(_, t):
                return tactics.take_tac(t, state), None
            case SplitStep(_):
                return tactics.conj_intro_tac(state), None
            case HaveStep(_, so, label, f, just):
                sg = tactics.first_subgoal(state, "have")
                actual = label or tactics.fresh_anonymous_label(sg)
                so_label = self.resolve_so(so, prev_label)
                j, args = self.resolve_just(just, state, f)
                return tactics.have_tac(actual, f, j, args, so_label, state), actual
            case ShowStep(_, so, f, just):
                so_label = self.resolve_so(so, prev_label)
                j, args = self.resolve_just(just, state, f)
                return tactics.show_tac(f, j, args, so_label, state), None
        raise TacticError(f"unknown step {step!r}")

    def resolve_so(self, so: bool, prev_label: Optional[str]) -> Optional[str]:
        if not so:
            return None
        if prev_label is None:
            raise JustificationError(
                "so: there is no immediately preceding fact to refer to"
            )
        return prev_label

    def resolve_just(self, just: Just, state: GoalState, target: Formula):
        match just:
            case AtOnce():
                return self.registry.lookup("at_once"), []
            case By(labels):
                return self.registry.lookup("at_once"), list(labels)
            case ByNamed(name, args):
                return self.registry.lookup(name), list(args)
            case Nested(steps):
                return self.nested_justification(steps), []
        raise JustificationError(f"unknown justification {just!r}")

    def nested_justification(self, steps: tuple[Step, ...]):
        runner = self

        def apply(args: list[str], target: Formula,
                  state: GoalState) -> Theorem:
            sg = tactics.first_subgoal(state, "proof")
            child_goal = Subgoal(sg.assumptions, target)
            want = child_goal.discharge_formula()

            def compose(ths):
                (th,) = tuple(ths)
                return th

            child = GoalState((child_goal,), compose, want)
            child = runner.run_block(steps, child)
            if child.subgoals:
                raise JustificationError(
                    f"nested proof leaves {len(child.subgoals)} subgoal(s) open"
                )
            return tactics.extract_theorem(child)

        return tactics.Justification("proof", apply)


def run_lemma(env: dict[str, Theorem], lemma: Lemma,
              budget=None) -> tuple[Optional[Theorem], LemmaReport]:
    registry = default_registry(env, budget)
    entries: list[StepReport] = []
    warnings = []
    if free_vars(lemma.statement):
        warnings.append(
            f"statement has free variables: "
            f"{', '.join(sorted(free_vars(lemma.statement)))}"
        )
    runner = _LemmaRunner(registry, entries)
    theorem: Optional[Theorem] = None
    state = tactics.set_goal(lemma.statement)
    failed = False
    try:
        state = runner.run_block(lemma.steps, state)
    except _StepFailure:
        failed = True
    if not failed:
        try:
            theorem = tactics.extract_theorem(state)
            entries.append(StepReport(lemma.qed_line, "ok", None, []))
        except TacticError as e:
            entries.append(StepReport(lemma.qed_line, "error", str(e),
                                      _snapshot(state)))
    else:
        # Steps after the failing one (including enclosing steps of a failed
        # nested proof) are unchecked, as is the final qed.
        leftovers = [s for s in flatten_steps(lemma.steps)
                     if id(s) not in runner.done]
        for s in sorted(leftovers, key=lambda s: s.line):
            entries.append(StepReport(s.line, "unchecked", None, []))
        entries.append(StepReport(lemma.qed_line, "unchecked", None, []))
    return theorem, LemmaReport(lemma.name, print_formula(lemma.statement),
                                theorem is not None, entries, warnings)


def run_script(env: dict[str, Theorem], script: ProofScript,
               budget=None) -> tuple[dict[str, Theorem], list[LemmaReport]]:
    """Check every lemma; completed lemmas join the environment by name."""
    env = dict(env)
    reports = []
    for lemma in script.lemmas:
        theorem, report = run_lemma(env, lemma, budget)
        reports.append(report)
        if theorem is not None:
            env[lemma.name] = theorem
    return env, reports


def check_text(text: str, budget=None) -> Report:
    """Parse and run a script; all failures are embedded in the report."""
    try:
        script = parse_script(text)
    except ParseError as e:
        return Report(False, [], {
            "line": e.line, "column": e.column, "message": e.message,
        })
    _, reports = run_script({}, script, budget)
    return Report(all(r.complete for r in reports), reports)
