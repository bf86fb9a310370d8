import itertools
import random

import pytest

from spa.semantics import (
    EnumerationBudgetError, Interpretation, SemanticsError, eval_term,
    find_countermodel, holds, interpretations, random_interpretation,
    valid_up_to,
)
from spa.syntax import (
    Var, free_vars, parse_formula, parse_term, signature_of,
)
from conftest import random_formula


def F(text):
    return parse_formula(text)


def succ_mod2():
    return Interpretation(2, {("f", 1): {(0,): 1, (1,): 0}}, {})


class TestEvalTerm:
    def test_variable(self):
        m = Interpretation(3)
        assert eval_term(m, {"x": 1}, Var("x")) == 1

    def test_unmapped_variable_defaults_to_zero(self):
        assert eval_term(Interpretation(3), {}, Var("x")) == 0

    def test_function_application(self):
        m = succ_mod2()
        assert eval_term(m, {"x": 1}, parse_term("f(x)")) == 0

    def test_nested_application(self):
        m = succ_mod2()
        assert eval_term(m, {"x": 1}, parse_term("f(f(x))")) == 1

    def test_missing_symbol_is_named(self):
        with pytest.raises(SemanticsError) as e:
            eval_term(Interpretation(2), {}, parse_term("g(x)"))
        assert "g" in str(e.value)


class TestHolds:
    def test_truth_everywhere(self):
        for size in (1, 2, 3):
            assert holds(Interpretation(size), {}, F("true"))

    def test_forall_false_on_partial_predicate(self):
        m = Interpretation(2, {}, {("P", 1): {(0,): True, (1,): False}})
        assert not holds(m, {}, F("forall x. P(x)"))
        assert holds(m, {}, F("exists x. P(x)"))

    def test_equality_is_identity(self):
        m = Interpretation(3)
        assert holds(m, {"x": 2, "y": 2}, F("x = y"))
        assert not holds(m, {"x": 2, "y": 0}, F("x = y"))

    def test_quantifier_restores_valuation(self):
        m = Interpretation(2, {}, {("P", 1): {(0,): True, (1,): True}})
        v = {"x": 1}
        holds(m, v, F("forall x. P(x)"))
        assert v == {"x": 1}

    def test_pelletier43_true_in_every_two_element_model(self, p43_formula):
        # brute force over all 2^4 tables for each of P and Q
        count = 0
        for m in interpretations(2, frozenset(), frozenset({("P", 2), ("Q", 2)})):
            count += 1
            assert holds(m, {}, p43_formula)
        assert count == 256


class TestValidUpTo:
    def test_excluded_middle(self):
        assert valid_up_to(F("P() \\/ ~P()"), 2)

    def test_not_valid_existential(self):
        assert not valid_up_to(F("exists x. P(x)"), 2)

    def test_pelletier34_valid_up_to_two(self, p34_formula):
        assert valid_up_to(p34_formula, 2)

    def test_countermodel_reported(self):
        found = find_countermodel(F("forall x. P(x)"), 2)
        assert found is not None
        m, v = found
        assert not holds(m, v, F("forall x. P(x)"))

    def test_free_variables_swept(self):
        # x = y is falsifiable only with two or more elements
        assert valid_up_to(F("x = y"), 1)
        assert not valid_up_to(F("x = y"), 2)

    def test_budget_guard(self):
        f = F("P(x,y,z) /\\ Q(a,b,c) /\\ R(u,v,w)")
        with pytest.raises(EnumerationBudgetError):
            valid_up_to(f, 3, budget=1000)

    def test_agrees_with_independent_enumeration(self):
        # independent oracle: direct recursive evaluation over products
        def eval_f(f, m, v):
            from spa.syntax import (
                And, Atom, Exists, Falsity, Forall, Iff, Imp, Not, Or, Truth,
            )
            match f:
                case Truth():
                    return True
                case Falsity():
                    return False
                case Atom("=", (s, t)):
                    return eval_t(s, m, v) == eval_t(t, m, v)
                case Atom(p, args):
                    return m.predicates[(p, len(args))][
                        tuple(eval_t(a, m, v) for a in args)]
                case Not(b):
                    return not eval_f(b, m, v)
                case And(l, r):
                    return eval_f(l, m, v) and eval_f(r, m, v)
                case Or(l, r):
                    return eval_f(l, m, v) or eval_f(r, m, v)
                case Imp(l, r):
                    return (not eval_f(l, m, v)) or eval_f(r, m, v)
                case Iff(l, r):
                    return eval_f(l, m, v) == eval_f(r, m, v)
                case Forall(x, b):
                    return all(eval_f(b, m, {**v, x: d})
                               for d in range(m.domain_size))
                case Exists(x, b):
                    return any(eval_f(b, m, {**v, x: d})
                               for d in range(m.domain_size))

        def eval_t(t, m, v):
            if isinstance(t, Var):
                return v.get(t.name, 0)
            return m.functions[(t.name, len(t.args))][
                tuple(eval_t(a, m, v) for a in t.args)]

        def oracle_valid(f, max_size):
            funcs, preds = signature_of(f)
            fvs = sorted(free_vars(f))
            for size in range(1, max_size + 1):
                for m in interpretations(size, funcs, preds):
                    for values in itertools.product(range(size), repeat=len(fvs)):
                        if not eval_f(f, m, dict(zip(fvs, values))):
                            return False
            return True

        rng = random.Random(99)
        checked = 0
        while checked < 20:
            f = random_formula(rng, depth=rng.randint(0, 3),
                               preds=(("P", 1), ("R", 0)), funcs=())
            assert valid_up_to(f, 2) == oracle_valid(f, 2)
            checked += 1


class TestRandomInterpretation:
    SIG_FUNCS = frozenset({("f", 1)})
    SIG_PREDS = frozenset({("P", 2), ("Q", 2)})

    def test_deterministic(self):
        a = random_interpretation(7, 3, self.SIG_FUNCS, self.SIG_PREDS)
        b = random_interpretation(7, 3, self.SIG_FUNCS, self.SIG_PREDS)
        assert a.functions == b.functions and a.predicates == b.predicates

    def test_seeds_differ(self):
        seen = set()
        for seed in range(100):
            m = random_interpretation(seed, 3, self.SIG_FUNCS, self.SIG_PREDS)
            key = (tuple(sorted(m.functions[("f", 1)].items())),
                   tuple(sorted(m.predicates[("P", 2)].items())),
                   tuple(sorted(m.predicates[("Q", 2)].items())))
            seen.add(key)
        assert len(seen) == 100

    def test_size_one_tables_constant(self):
        m = random_interpretation(3, 1, self.SIG_FUNCS, self.SIG_PREDS)
        assert m.functions[("f", 1)] == {(0,): 0}
        assert set(m.predicates[("P", 2)].keys()) == {(0, 0)}

    def test_size_must_be_positive(self):
        with pytest.raises(SemanticsError):
            random_interpretation(0, 0, frozenset(), frozenset())


class TestVectorizedFuzzAgreesWithHolds:
    def test_same_verdicts_on_random_formulas(self):
        # the batched evaluator used by the soundness fuzz must agree with
        # the reference evaluator model by model
        from conftest import fuzz_formula, holds_everywhere
        rng = random.Random(5)
        for _ in range(40):
            f = random_formula(rng, rng.randint(0, 4))
            funcs, preds = signature_of(f)
            direct = []
            for i in range(60):
                size = (1, 2, 3)[i % 3]
                m = random_interpretation(i, size, funcs, preds)
                if not holds_everywhere(f, m):
                    direct.append((i, size))
            assert sorted(fuzz_formula(f, runs=60)) == sorted(direct)
