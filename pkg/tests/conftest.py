"""Shared fixtures: theorem collection for the soundness fuzz, random
formula generation, and finite-model checking helpers.

The acceptance module must observe every theorem the rest of the suite
produces, so its tests are reordered to run last.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest

from spa import kernel
from spa.syntax import (
    And, Atom, Exists, Falsity, Fn, Forall, Formula, Iff, Imp, Not, Or,
    Truth, Var, free_vars, signature_of,
)
from spa.semantics import holds, random_interpretation

REPO_ROOT = Path(__file__).resolve().parent.parent
EXAMPLES = REPO_ROOT / "examples"

# every distinct conclusion produced by kernel inference during the session
COLLECTED_CONCLUSIONS: set[Formula] = set()


def _collect(th: kernel.Theorem) -> None:
    COLLECTED_CONCLUSIONS.add(th.conclusion)


kernel.add_theorem_observer(_collect)


def pytest_collection_modifyitems(config, items):
    # Acceptance checks run last so the soundness fuzz sees the whole run.
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


@pytest.fixture(scope="session")
def collected_conclusions():
    return COLLECTED_CONCLUSIONS


@pytest.fixture(scope="session")
def p43_path() -> Path:
    return EXAMPLES / "pelletier43.spa"


@pytest.fixture(scope="session")
def p34_path() -> Path:
    return EXAMPLES / "pelletier34.spa"


P43_TEXT = (
    "(forall x y. Q(x,y) <=> (forall z. P(z,x) <=> P(z,y))) "
    "==> (forall x y. Q(x,y) <=> Q(y,x))"
)
P34_TEXT = (
    "((exists x. forall y. P(x) <=> P(y)) <=> ((exists x. Q(x)) <=> (forall y. Q(y)))) "
    "<=> ((exists x. forall y. Q(x) <=> Q(y)) <=> ((exists x. P(x)) <=> (forall y. P(y))))"
)


@pytest.fixture(scope="session")
def p43_formula():
    from spa.syntax import parse_formula
    return parse_formula(P43_TEXT)


@pytest.fixture(scope="session")
def p34_formula():
    from spa.syntax import parse_formula
    return parse_formula(P34_TEXT)


# ---------------------------------------------------------------------------
# Random formulas


def random_term(rng: random.Random, vars_pool, funcs, depth: int):
    if depth <= 0 or not funcs or rng.random() < 0.6:
        return Var(rng.choice(vars_pool))
    name, arity = rng.choice(funcs)
    return Fn(name, tuple(random_term(rng, vars_pool, funcs, depth - 1)
                          for _ in range(arity)))


def random_formula(rng: random.Random, depth: int,
                   vars_pool=("x", "y", "z"),
                   preds=(("P", 1), ("Q", 2), ("R", 0)),
                   funcs=(("f", 1), ("c", 0))) -> Formula:
    if depth <= 0:
        roll = rng.random()
        if roll < 0.08:
            return Truth()
        if roll < 0.16:
            return Falsity()
        if roll < 0.28:
            return Atom("=", (random_term(rng, vars_pool, funcs, 1),
                              random_term(rng, vars_pool, funcs, 1)))
        name, arity = rng.choice(preds)
        return Atom(name, tuple(random_term(rng, vars_pool, funcs, 1)
                                for _ in range(arity)))
    kind = rng.randrange(7)
    if kind == 0:
        return Not(random_formula(rng, depth - 1, vars_pool, preds, funcs))
    if kind == 1:
        return And(random_formula(rng, depth - 1, vars_pool, preds, funcs),
                   random_formula(rng, depth - 1, vars_pool, preds, funcs))
    if kind == 2:
        return Or(random_formula(rng, depth - 1, vars_pool, preds, funcs),
                  random_formula(rng, depth - 1, vars_pool, preds, funcs))
    if kind == 3:
        return Imp(random_formula(rng, depth - 1, vars_pool, preds, funcs),
                   random_formula(rng, depth - 1, vars_pool, preds, funcs))
    if kind == 4:
        return Iff(random_formula(rng, depth - 1, vars_pool, preds, funcs),
                   random_formula(rng, depth - 1, vars_pool, preds, funcs))
    var = rng.choice(vars_pool)
    body = random_formula(rng, depth - 1, vars_pool, preds, funcs)
    return Forall(var, body) if kind == 5 else Exists(var, body)


# ---------------------------------------------------------------------------
# Finite-model soundness checking.  The acceptance fuzz evaluates tens of
# thousands of conclusions that share most of their subformulas, so the
# evaluator is vectorized: formulas are grouped by signature, their 500
# seeded interpretations are batched per domain size, and each distinct
# (subformula, relevant-valuation) pair is computed once per batch as a
# boolean vector across all models of the batch.

from collections import defaultdict
from functools import lru_cache

import numpy as np

from spa.semantics import holds
from spa.syntax import Fn, print_formula

_MISS = object()


@lru_cache(maxsize=262144)
def _sorted_fvs(f: Formula) -> tuple[str, ...]:
    return tuple(sorted(free_vars(f)))


class _ModelBatch:
    """Same-size seeded interpretations packed into flat numpy tables."""

    def __init__(self, models, seeds):
        self.size = models[0].domain_size
        self.count = len(models)
        self.seeds = seeds
        self.funcs: dict[tuple[str, int], np.ndarray] = {}
        self.preds: dict[tuple[str, int], np.ndarray] = {}
        s = self.size
        for key in models[0].functions:
            arity = key[1]
            tab = np.empty((self.count, s ** arity), dtype=np.int64)
            for j, m in enumerate(models):
                for inputs, out in m.functions[key].items():
                    tab[j, self._flat(inputs)] = out
            self.funcs[key] = tab
        for key in models[0].predicates:
            arity = key[1]
            tab = np.zeros((self.count, s ** arity), dtype=bool)
            for j, m in enumerate(models):
                for inputs, out in m.predicates[key].items():
                    tab[j, self._flat(inputs)] = out
            self.preds[key] = tab

    def _flat(self, inputs) -> int:
        idx = 0
        for i in inputs:
            idx = idx * self.size + i
        return idx

    def flat_vec(self, parts):
        idx = np.zeros(self.count, dtype=np.int64)
        for p in parts:
            idx = idx * self.size + p
        return idx


def _vec_term(t, v: dict, batch: _ModelBatch, cache: dict):
    """Element of each model: an int scalar or an int vector."""
    if not isinstance(t, Fn):
        return v.get(t.name, 0)
    key = (t, *[v.get(x, 0) for x in sorted(free_vars_term_cached(t))])
    hit = cache.get(key, _MISS)
    if hit is not _MISS:
        return hit
    args = [_vec_term(a, v, batch, cache) for a in t.args]
    tab = batch.funcs[(t.name, len(t.args))]
    if args and any(isinstance(a, np.ndarray) for a in args):
        out = tab[np.arange(batch.count), batch.flat_vec(args)]
    else:
        out = tab[:, batch._flat(args)]
    cache[key] = out
    return out


@lru_cache(maxsize=65536)
def free_vars_term_cached(t):
    from spa.syntax import free_vars_term
    return tuple(sorted(free_vars_term(t)))


def _vec_holds(f: Formula, v: dict, batch: _ModelBatch, cache: dict) -> np.ndarray:
    key = (f, *[v.get(x, 0) for x in _sorted_fvs(f)])
    hit = cache.get(key, _MISS)
    if hit is not _MISS:
        return hit
    match f:
        case Truth():
            out = np.ones(batch.count, dtype=bool)
        case Falsity():
            out = np.zeros(batch.count, dtype=bool)
        case Atom("=", (s, t)):
            a = _vec_term(s, v, batch, cache)
            b = _vec_term(t, v, batch, cache)
            eq = a == b
            out = eq if isinstance(eq, np.ndarray) else np.full(batch.count, eq)
        case Atom(pred, args):
            vals = [_vec_term(a, v, batch, cache) for a in args]
            tab = batch.preds[(pred, len(args))]
            if vals and any(isinstance(a, np.ndarray) for a in vals):
                out = tab[np.arange(batch.count), batch.flat_vec(vals)]
            else:
                out = tab[:, batch._flat(vals)]
        case Not(body):
            out = ~_vec_holds(body, v, batch, cache)
        case And(l, r):
            out = _vec_holds(l, v, batch, cache) & _vec_holds(r, v, batch, cache)
        case Or(l, r):
            out = _vec_holds(l, v, batch, cache) | _vec_holds(r, v, batch, cache)
        case Imp(l, r):
            out = ~_vec_holds(l, v, batch, cache) | _vec_holds(r, v, batch, cache)
        case Iff(l, r):
            out = _vec_holds(l, v, batch, cache) == _vec_holds(r, v, batch, cache)
        case Forall(x, body) | Exists(x, body):
            saved = v.get(x, _MISS)
            acc = None
            for d in range(batch.size):
                v[x] = d
                got = _vec_holds(body, v, batch, cache)
                if acc is None:
                    acc = got
                elif isinstance(f, Forall):
                    acc = acc & got
                else:
                    acc = acc | got
            if saved is _MISS:
                v.pop(x, None)
            else:
                v[x] = saved
            out = acc
        case _:
            raise TypeError(f"not a formula: {f!r}")
    cache[key] = out
    return out


def fuzz_many(formulas, runs: int = 500, base_seed: int = 0,
              sizes=(1, 2, 3)) -> list[tuple[str, int, int]]:
    """Check formulas against ``runs`` seeded interpretations each.

    Returns (printed formula, seed, size) for every failure.  Free
    variables are universally quantified by sweeping valuations.
    """
    groups: dict[tuple, list[Formula]] = defaultdict(list)
    for f in formulas:
        groups[signature_of(f)].append(f)
    failures = []
    for (funcs, preds), fs in groups.items():
        by_size: dict[int, tuple[list, list]] = defaultdict(lambda: ([], []))
        for i in range(runs):
            seed = base_seed + i
            size = sizes[i % len(sizes)]
            models, seeds = by_size[size]
            models.append(random_interpretation(seed, size, funcs, preds))
            seeds.append(seed)
        for size, (models, seeds) in sorted(by_size.items()):
            batch = _ModelBatch(models, seeds)
            cache: dict = {}
            for f in fs:
                fvs = _sorted_fvs(f)
                bad_mask = None
                for values in itertools.product(range(size), repeat=len(fvs)):
                    vec = _vec_holds(f, dict(zip(fvs, values)), batch, cache)
                    if not vec.all():
                        bad_mask = ~vec if bad_mask is None else (bad_mask | ~vec)
                if bad_mask is not None:
                    for j in np.nonzero(bad_mask)[0]:
                        failures.append((print_formula(f), seeds[int(j)], size))
    return failures


def fuzz_formula(f: Formula, runs: int = 500, base_seed: int = 0,
                 sizes=(1, 2, 3)) -> list[tuple[int, int]]:
    """Check f in ``runs`` random interpretations; return failing (seed, size)."""
    return [(seed, size) for _, seed, size in
            fuzz_many([f], runs=runs, base_seed=base_seed, sizes=sizes)]


def holds_everywhere(f: Formula, m) -> bool:
    """Universal closure of f in interpretation m (valuation sweep)."""
    fvs = _sorted_fvs(f)
    for values in itertools.product(range(m.domain_size), repeat=len(fvs)):
        if not holds(m, dict(zip(fvs, values)), f):
            return False
    return True
