"""Acceptance criteria, one test per criterion, run after the full suite.

Each test prints a single ``[acceptance] <criterion>: PASS`` line; a failed
assertion surfaces through pytest as usual.
"""

import json
import random
import re
import shutil
import subprocess
import sys
import time
from pathlib import Path

import pytest

import spa
from spa import prover
from spa.kernel import KernelError, Theorem
from spa.prover import Budget, BudgetExceeded, at_once
from spa.script import check_text, parse_script, run_script
from spa.semantics import find_countermodel
from spa.syntax import parse_formula, print_formula
from spa.tactics import (
    BY_MP_UNAPPLICABLE, BY_MP_WRONG_CONCLUSION, GoalState, JustificationError,
    Subgoal, by_mp,
)
from conftest import EXAMPLES, P34_TEXT, random_formula


def _cli(*args) -> tuple[int, str, float]:
    exe = shutil.which("spa")
    cmd = [exe, *args] if exe else [sys.executable, "-m", "spa.cli", *args]
    start = time.monotonic()
    proc = subprocess.run(cmd, capture_output=True, text=True,
                          cwd=Path(__file__).parent.parent)
    return proc.returncode, proc.stdout, time.monotonic() - start


def _passed(name: str) -> None:
    print(f"[acceptance] {name}: PASS")


def _mutate_p43(text: str) -> tuple[str, int]:
    lines = text.split("\n")
    idx = next(i for i, l in enumerate(lines)
               if l.strip() == 'so have "forall z. P(z,x) <=> P(z,y)" by A')
    lines[idx] = lines[idx].replace(" by A", " at once")
    return "\n".join(lines), idx + 1


def test_p43_end_to_end(p43_path, p43_formula):
    code, _, elapsed = _cli("check", "examples/pelletier43.spa")
    assert code == 0
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    env, _ = run_script({}, parse_script(p43_path.read_text()))
    assert print_formula(env["pelletier43"].conclusion) == print_formula(p43_formula)
    _passed("P43 end-to-end (exit 0, < 1 s, conclusion identical)")


def test_p43_mutation(tmp_path, p43_path):
    mutated, line = _mutate_p43(p43_path.read_text())
    bad = tmp_path / "mutated43.spa"
    bad.write_text(mutated)
    code, out, _ = _cli("check", str(bad), "--json")
    assert code == 1
    body = json.loads(out)
    steps = body["lemmas"][0]["steps"]
    errors = [i for i, s in enumerate(steps) if s["status"] == "error"]
    assert len(errors) == 1
    assert steps[errors[0]]["line"] == line
    assert all(s["status"] == "unchecked" for s in steps[errors[0] + 1:])
    _passed("P43 mutation (exit 1, error at the mutated line, rest unchecked)")


def test_p34_end_to_end(p34_path, p34_formula):
    code, _, elapsed = _cli("check", "examples/pelletier34.spa")
    assert code == 0
    assert elapsed < 10.0, f"took {elapsed:.2f}s"
    text = p34_path.read_text()
    assert text.count("by mp(") >= 4
    assert 75 <= len(text.splitlines()) <= 250
    env, _ = run_script({}, parse_script(text))
    assert env["pelletier34"].conclusion == p34_formula
    _passed("P34 end-to-end (exit 0, < 10 s, >= 4 by_mp sites, 75-250 lines)")


def test_by_mp_contract():
    a, b = parse_formula("A"), parse_formula("B")
    subgoal = Subgoal((("a", a), ("ab", parse_formula("A ==> B"))), b)
    state = GoalState((subgoal,), lambda ths: ths[0], b)
    th = by_mp(["ab", "a"], b, state)
    assert print_formula(th.conclusion) == "A /\\ (A ==> B) ==> B"
    with pytest.raises(JustificationError) as e1:
        by_mp(["a", "ab"], b, state)
    assert str(e1.value) == "by_mp: unapplicable assumptions"
    assert str(e1.value) == BY_MP_UNAPPLICABLE
    with pytest.raises(JustificationError) as e2:
        by_mp(["ab", "a"], a, state)
    assert str(e2.value) == "by_mp: wrong conclusion"
    assert str(e2.value) == BY_MP_WRONG_CONCLUSION
    _passed("by_mp unit contract (conclusion shape and byte-identical errors)")


def test_prover_battery_and_p34_negative(p34_formula):
    battery = [
        ([], "P() ==> P()"),
        ([], "(A <=> B) ==> (B <=> A)"),
        ([], "P(c()) ==> exists x. P(x)"),
        ([], "(forall x. P(x)) ==> P(c())"),
    ]
    for facts, target in battery:
        start = time.monotonic()
        at_once([parse_formula(f) for f in facts], parse_formula(target))
        assert time.monotonic() - start < 1.0, target

    # every "at once" obligation raised by the shipped scripts
    recorded = []
    original = prover.at_once

    def spy(facts, target, budget=None):
        recorded.append((tuple(facts), target))
        return original(facts, target, budget)

    prover.at_once = spy
    try:
        for name in ("pelletier43", "pelletier34"):
            report = check_text((EXAMPLES / f"{name}.spa").read_text())
            assert report.complete
    finally:
        prover.at_once = original
    assert recorded
    for facts, target in recorded:
        start = time.monotonic()
        th = original(list(facts), target)
        assert time.monotonic() - start < 1.0, print_formula(target)

    with pytest.raises(BudgetExceeded):
        at_once([], p34_formula, Budget())
    code, out, _ = _cli("prove", P34_TEXT)
    assert code == 1 and "BudgetExceeded" in out

    assert find_countermodel(p34_formula, 2) is None
    code, out, _ = _cli("models", P34_TEXT, "--max-size", "2")
    assert code == 0 and "no countermodel up to 2" in out
    _passed("prover battery (< 1 s each), P34 BudgetExceeded, no countermodel")


def test_kernel_sealing():
    with pytest.raises(KernelError):
        Theorem(parse_formula("false"))
    with pytest.raises(KernelError):
        Theorem(parse_formula("false"), object())
    src_dir = Path(spa.__file__).parent
    for path in src_dir.rglob("*.py"):
        if path.name == "kernel.py":
            continue
        text = path.read_text()
        assert "_CERT" not in text, path
        assert not re.search(r"\bTheorem\s*\(", text), path
    assert Theorem.__subclasses__() == []
    _passed("kernel sealing (no construction path outside the four operations)")


def test_soundness_fuzz(collected_conclusions):
    # every theorem produced anywhere in this test session must hold in 500
    # random finite interpretations (sizes 1-3, fixed seeds)
    from conftest import fuzz_many

    conclusions = sorted(collected_conclusions, key=print_formula)
    assert len(conclusions) > 100, "suite produced suspiciously few theorems"
    failures = fuzz_many(conclusions, runs=500, base_seed=0, sizes=(1, 2, 3))
    assert failures == []
    _passed(
        f"soundness fuzz ({len(conclusions)} distinct conclusions x 500 models, "
        "zero failures)"
    )


def test_parser_round_trip():
    rng = random.Random(20260810)
    for _ in range(1000):
        f = random_formula(rng, depth=rng.randint(0, 6))
        assert parse_formula(print_formula(f)) == f
    _passed("parser round-trip (1000 random formulas)")
