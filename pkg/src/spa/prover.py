"""The "at once" automated justification: proof-producing first-order search.

The search refutes the negated obligation with a ground tableau: the gamma
rule instantiates universals at terms already on the branch (or at one
default variable) under iterative deepening, and the delta rule introduces
fresh eigenvariables.  A closed tableau is replayed bottom-up through the
kernel: every branch maps to a theorem ``|- h1 ==> ... ==> hk ==> false``
over an explicit hypothesis list, and every tableau rule corresponds to a
derived-rule transformation of those chains.  The final theorem is exactly
``|- conj(facts) ==> target`` (or ``|- target``); nothing is trusted
besides the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from . import rules
from .kernel import (
    AddImp, ExistsDef, IffImp1, IffImp2, ImpIff, OrDef, Theorem, generalize,
    instantiate_axiom, modus_ponens,
)
from .syntax import (
    And, Atom, Exists, Falsity, Forall, Formula, Iff, Imp, Not, Or, Term,
    Truth, Var, all_names, print_formula, print_term, signature_of, subst,
    subterms,
)

__all__ = [
    "Budget", "BudgetExceeded", "at_once", "lift_to_ambient",
    "discharge_with_facts",
]


@dataclass(frozen=True)
class Budget:
    """Search limits: iterative-deepening bound and total expansion count."""

    max_branch_depth: int = 12
    max_steps: int = 100_000

    def __post_init__(self) -> None:
        if self.max_branch_depth < 1 or self.max_steps < 1:
            raise ValueError("budget limits must be positive")


class BudgetExceeded(Exception):
    """The search gave up; retriable with a larger budget unless exhausted."""

    def __init__(self, message: str, retriable: bool = True):
        super().__init__(message)
        self.retriable = retriable


# ---------------------------------------------------------------------------
# Formula classification


@lru_cache(maxsize=65536)
def _term_order(t: Term) -> tuple[int, str]:
    s = print_term(t)
    return (len(s), s)


def _alpha_components(f: Formula) -> Optional[tuple[Formula, ...]]:
    match f:
        case And(a, b):
            return (a, b)
        case Not(Or(a, b)):
            return (Not(a), Not(b))
        case Not(Imp(a, b)):
            return (a, Not(b))
        case Not(Not(p)):
            return (p,)
    return None


def _beta_components(f: Formula) -> Optional[tuple[Formula, Formula]]:
    match f:
        case Or(a, b):
            return (a, b)
        case Imp(a, b):
            return (Not(a), b)
        case Not(And(a, b)):
            return (Not(a), Not(b))
        case Iff(a, b):
            return (And(a, b), And(Not(a), Not(b)))
        case Not(Iff(a, b)):
            return (And(a, Not(b)), And(Not(a), b))
    return None


def _is_gamma(f: Formula) -> bool:
    return isinstance(f, Forall) or (isinstance(f, Not) and isinstance(f.body, Exists))


def _is_delta(f: Formula) -> bool:
    return isinstance(f, Exists) or (isinstance(f, Not) and isinstance(f.body, Forall))


@lru_cache(maxsize=65536)
def _gamma_instance(f: Formula, t: Term) -> Formula:
    if isinstance(f, Forall):
        return subst(f.body, f.var, t)
    assert isinstance(f, Not) and isinstance(f.body, Exists)
    return Not(subst(f.body.body, f.body.var, t))


def _delta_instance(f: Formula, y: str) -> Formula:
    if isinstance(f, Exists):
        return subst(f.body, f.var, Var(y))
    assert isinstance(f, Not) and isinstance(f.body, Forall)
    return Not(subst(f.body.body, f.body.var, Var(y)))


def _is_inert(f: Formula) -> bool:
    return isinstance(f, Truth) or (isinstance(f, Not) and isinstance(f.body, Falsity))


# ---------------------------------------------------------------------------
# Closed-tableau traces


@dataclass(frozen=True)
class _Close:
    how: str        # "pair" | "false" | "ntrue" | "neq"
    datum: object   # the positive formula, or the term for "neq"


@dataclass(frozen=True)
class _Alpha:
    formula: Formula
    comps: tuple[Formula, ...]
    child: "_Node"


@dataclass(frozen=True)
class _Beta:
    formula: Formula
    b1: Formula
    b2: Formula
    left: "_Node"
    right: "_Node"


@dataclass(frozen=True)
class _Gamma:
    formula: Formula
    term: Term
    inst: Formula
    child: "_Node"


@dataclass(frozen=True)
class _Delta:
    formula: Formula
    var: str
    inst: Formula
    child: "_Node"


_Node = object  # union of the trace dataclasses


# ---------------------------------------------------------------------------
# Search


class _Search:
    def __init__(self, roots: Sequence[Formula], budget: Budget):
        self.budget = budget
        self.steps = 0
        self.depth_hit = False
        reserved: set[str] = set()
        for f in roots:
            reserved |= all_names(f)
            funcs, preds = signature_of(f)
            reserved |= {name for name, _ in funcs} | {name for name, _ in preds}
        self.reserved = reserved
        self.fresh_counter = 0
        self.default_var: Optional[Var] = None
        self._candidate_cache: dict[frozenset, list[Term]] = {}

    def fresh_name(self) -> str:
        while True:
            self.fresh_counter += 1
            name = f"v{self.fresh_counter}"
            if name not in self.reserved:
                self.reserved.add(name)
                return name

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget.max_steps:
            raise BudgetExceeded(
                f"step budget exhausted ({self.budget.max_steps} expansions)"
            )

    def _default_term(self) -> Var:
        if self.default_var is None:
            self.default_var = Var(self.fresh_name())
        return self.default_var

    def _candidates(self, terms: frozenset[Term]) -> list[Term]:
        if not terms:
            return [self._default_term()]
        cached = self._candidate_cache.get(terms)
        if cached is None:
            cached = sorted(terms, key=_term_order)
            self._candidate_cache[terms] = cached
        return cached

    @staticmethod
    def _check_close(g: Formula, forms: frozenset[Formula]) -> Optional[_Close]:
        match g:
            case Falsity():
                return _Close("false", None)
            case Not(Truth()):
                return _Close("ntrue", None)
            case Not(Atom("=", (s, t))) if s == t:
                return _Close("neq", s)
        if isinstance(g, Not) and g.body in forms:
            return _Close("pair", g.body)
        if Not(g) in forms:
            return _Close("pair", g)
        return None

    def _add_batch(self, new: Sequence[Formula], queue: tuple[Formula, ...],
                   forms: frozenset[Formula], terms: frozenset[Term]):
        """Schedule formulas; detect closure.  Returns a _Close or a triple."""
        for g in new:
            if _is_inert(g) or g in forms:
                continue
            closed = self._check_close(g, forms)
            if closed is not None:
                return closed
            forms = forms | {g}
            terms = terms | subterms(g)
            queue = queue + (g,)
        return queue, forms, terms

    def prove(self, roots: Sequence[Formula]) -> _Node:
        start = self._add_batch(tuple(roots), (), frozenset(), frozenset())
        for depth in range(1, self.budget.max_branch_depth + 1):
            self.depth_hit = False
            if isinstance(start, _Close):
                return start
            queue, forms, terms = start
            trace = self._expand(queue, forms, (), (), terms, depth)
            if trace is not None:
                return trace
            if not self.depth_hit:
                raise BudgetExceeded(
                    "search space exhausted without closing the tableau: "
                    "the obligation is not provable by this saturation "
                    "strategy at any depth",
                    retriable=False,
                )
        raise BudgetExceeded(
            f"no proof within branch depth {self.budget.max_branch_depth} "
            f"({self.steps} expansions used)"
        )

    def _expand(self, queue: tuple[Formula, ...], forms: frozenset[Formula],
                betas: tuple[Formula, ...],
                gammas: tuple[tuple[Formula, frozenset[Term]], ...],
                terms: frozenset[Term], gleft: int) -> Optional[_Node]:
        while queue:
            f, queue = queue[0], queue[1:]
            comps = _alpha_components(f)
            if comps is not None:
                self.tick()
                res = self._add_batch(comps, queue, forms, terms)
                if isinstance(res, _Close):
                    return _Alpha(f, comps, res)
                child = self._expand(res[0], res[1], betas, gammas, res[2], gleft)
                if child is None:
                    return None
                return _Alpha(f, comps, child)
            if _is_delta(f):
                if gleft == 0:
                    self.depth_hit = True
                    return None
                self.tick()
                y = self.fresh_name()
                inst = _delta_instance(f, y)
                res = self._add_batch((inst,), queue, forms, terms)
                if isinstance(res, _Close):
                    return _Delta(f, y, inst, res)
                child = self._expand(res[0], res[1], betas, gammas, res[2],
                                     gleft - 1)
                if child is None:
                    return None
                return _Delta(f, y, inst, child)
            if _beta_components(f) is not None:
                betas = betas + (f,)
                continue
            if _is_gamma(f):
                gammas = gammas + ((f, frozenset()),)
                continue
            # literal or otherwise unexpandable: stays in forms
        # Quantifier-eager strategy: try instantiations before case splits,
        # concentrating on the most recently encountered universal.
        for i in reversed(range(len(gammas))):
            g, used = gammas[i]
            for t in self._candidates(terms):
                if t in used:
                    continue
                inst = _gamma_instance(g, t)
                if inst in forms:
                    used = used | {t}
                    continue
                if gleft == 0:
                    self.depth_hit = True
                    break
                self.tick()
                gammas2 = gammas[:i] + ((g, used | {t}),) + gammas[i + 1:]
                res = self._add_batch((inst,), (), forms, terms)
                if isinstance(res, _Close):
                    return _Gamma(g, t, inst, res)
                child = self._expand(res[0], res[1], betas, gammas2, res[2],
                                     gleft - 1)
                if child is not None:
                    return _Gamma(g, t, inst, child)
            else:
                continue
            break
        if betas:
            f, betas = betas[0], betas[1:]
            b1, b2 = _beta_components(f)
            self.tick()
            res = self._add_batch((b1,), (), forms, terms)
            if isinstance(res, _Close):
                left = res
            else:
                left = self._expand(res[0], res[1], betas, gammas, res[2], gleft)
            if left is None:
                return None
            res = self._add_batch((b2,), (), forms, terms)
            if isinstance(res, _Close):
                right = res
            else:
                right = self._expand(res[0], res[1], betas, gammas, res[2], gleft)
            if right is None:
                return None
            return _Beta(f, b1, b2, left, right)
        return None


# ---------------------------------------------------------------------------
# Replay: closed trace -> kernel theorem


def _pull(th: Theorem, hyps: list[Formula], p: Formula
          ) -> tuple[Theorem, list[Formula]]:
    """Bring hypothesis p to the front, adding it if absent."""
    if p in hyps:
        i = hyps.index(p)
        if i:
            th = rules.imp_front(i, th)
        return th, [p] + hyps[:i] + hyps[i + 1:]
    return rules.add_assum(p, th), [p] + hyps


def _pull_many(th: Theorem, hyps: list[Formula], comps: Sequence[Formula]
               ) -> tuple[Theorem, list[Formula]]:
    """Arrange the hypothesis list to start with ``comps`` in order.

    Components already pulled are not reused, so duplicated components
    (e.g. both directions of a degenerate bi-implication) become separate
    hypotheses.
    """
    pulled = 0
    for c in reversed(comps):
        idx = next((i for i in range(pulled, len(hyps)) if hyps[i] == c), None)
        if idx is None:
            th = rules.add_assum(c, th)
            hyps = [c] + hyps
        else:
            if idx:
                th = rules.imp_front(idx, th)
            hyps = [hyps[idx]] + hyps[:idx] + hyps[idx + 1:]
        pulled += 1
    return th, hyps


def _contract_front(th: Theorem, hyps: list[Formula]
                    ) -> tuple[Theorem, list[Formula]]:
    """Merge duplicates of the front hypothesis."""
    f = hyps[0]
    while f in hyps[1:]:
        j = 1 + hyps[1:].index(f)
        if j != 1:
            th = rules.imp_front(j, th)
            hyps = [f, f] + hyps[1:j] + hyps[j + 1:]
        rest = rules.imp_chain(hyps[2:], Falsity())
        th = modus_ponens(rules.contract_th(f, rest), th)
        hyps = hyps[:1] + hyps[2:]
    return th, hyps


@lru_cache(maxsize=None)
def _nimp_fst_th(a: Formula, b: Formula) -> Theorem:
    """|- ~(a ==> b) ==> a"""
    e1 = rules.imp_add_assum(a, rules.ex_falso_th(b))
    e2 = rules.imp_trans(rules.not_elim_th(a), e1)
    e3 = rules.contrapos(e2)
    return rules.imp_trans(e3, rules.dneg_elim_th(a))


def _alpha_projections(f: Formula) -> list[Theorem]:
    match f:
        case And(a, b):
            return [rules.and_left_th(a, b), rules.and_right_th(a, b)]
        case Not(Or(a, b)):
            return [rules.contrapos(rules.or_left_th(a, b)),
                    rules.contrapos(rules.or_right_th(a, b))]
        case Not(Imp(a, b)):
            return [_nimp_fst_th(a, b),
                    rules.contrapos(instantiate_axiom(AddImp(b, a)))]
        case Not(Not(p)):
            return [rules.dneg_elim_th(p)]
    raise rules.RuleError(f"no alpha projections for {print_formula(f)!r}")


@lru_cache(maxsize=None)
def _beta_transfer_th(f: Formula) -> Theorem:
    """|- f ==> (~b1 ==> b2) for the beta components (b1, b2) of f."""
    match f:
        case Or(a, b):
            ap = rules.and_pair(Not(a), Not(b))
            c = rules.contrapos_th(Not(b), And(Not(a), Not(b)))
            t2 = rules.imp_swap(rules.imp_trans(ap, c))
            t3 = rules.trans_out(t2, rules.dneg_elim_th(b))
            return rules.imp_trans(rules.iff_mp1(instantiate_axiom(OrDef(a, b))), t3)
        case Imp(a, b):
            return rules.trans_in(rules.imp_refl(f), rules.dneg_elim_th(a))
        case Not(And(a, b)):
            ap = rules.and_pair(a, b)
            c = rules.contrapos_th(b, And(a, b))
            t2 = rules.imp_swap(rules.imp_trans(ap, c))
            return rules.trans_in(t2, rules.dneg_elim_th(a))
        case Iff(a, b):
            x = Not(And(a, b))
            i1 = instantiate_axiom(IffImp1(a, b))
            i2 = instantiate_axiom(IffImp2(a, b))
            w1 = rules.add_assum(f, rules.and_pair(a, b))
            a1 = rules.imp_trans(rules.rmp2(w1, i1), rules.contrapos_th(a, And(a, b)))
            w2 = rules.add_assum(f, rules.imp_swap(rules.and_pair(a, b)))
            a2 = rules.imp_trans(rules.rmp2(w2, i2), rules.contrapos_th(b, And(a, b)))
            z = rules.add_assum(f, rules.add_assum(x, rules.and_pair(Not(a), Not(b))))
            return rules.rmp2(rules.rmp2(z, a1), a2)
        case Not(Iff(a, b)):
            nf = f
            g = f.body
            x = Not(And(a, Not(b)))
            z0 = instantiate_axiom(ImpIff(a, b))
            s3 = rules.imp_trans(
                instantiate_axiom(AddImp(a, b)),
                rules.imp_swap(rules.imp_trans(instantiate_axiom(AddImp(b, a)), z0)),
            )
            th_a = rules.imp_swap(rules.imp_trans(s3, rules.contrapos_th(b, g)))
            nh1 = rules.imp_trans(rules.not_elim_th(a),
                                  rules.imp_add_assum(a, rules.ex_falso_th(b)))
            nh2 = rules.imp_trans(rules.not_elim_th(b),
                                  rules.imp_add_assum(b, rules.ex_falso_th(a)))
            u2 = rules.trans_in(rules.imp_trans(nh1, z0), nh2)
            u3 = rules.imp_trans(u2, rules.contrapos_th(Not(b), g))
            th_b = rules.imp_swap(rules.trans_out(u3, rules.dneg_elim_th(b)))
            w = rules.add_assum(nf, rules.and_pair(a, Not(b)))
            s5 = rules.rmp2(w, th_a)
            th_c = rules.imp_trans(s5, rules.contrapos_th(a, And(a, Not(b))))
            th_e = rules.ambient_trans(th_c, th_b)
            z = rules.add_assum(nf, rules.add_assum(x, rules.and_pair(Not(a), b)))
            return rules.rmp2(rules.rmp2(z, th_c), th_e)
    raise rules.RuleError(f"no beta transfer for {print_formula(f)!r}")


def _gamma_step_th(f: Formula, t: Term) -> Theorem:
    """|- f ==> instance for a gamma formula f."""
    if isinstance(f, Forall):
        return rules.ispec_th(t, f)
    assert isinstance(f, Not) and isinstance(f.body, Exists)
    ex = f.body
    return rules.contrapos(rules.exists_intro_th(t, ex.var, ex.body))


def _replay(node: _Node) -> tuple[Theorem, list[Formula]]:
    match node:
        case _Close("false", _):
            return rules.imp_refl(Falsity()), [Falsity()]
        case _Close("ntrue", _):
            return rules.not_true_false_th(), [Not(Truth())]
        case _Close("neq", t):
            return rules.neq_refl_false_th(t), [Not(Atom("=", (t, t)))]
        case _Close("pair", p):
            return rules.not_elim_th(p), [Not(p), p]
        case _Alpha(f, comps, child):
            th, hyps = _replay(child)
            th, hyps = _pull_many(th, hyps, comps)
            projections = _alpha_projections(f)
            rest = hyps[len(comps):]
            th = rules.imp_trans(projections[0], th)
            for proj in projections[1:]:
                th = rules.right_mp(th, proj)
            return _contract_front(th, [f] + rest)
        case _Beta(f, b1, b2, left, right):
            th1, h1 = _replay(left)
            th1, h1 = _pull(th1, h1, b1)
            th2, h2 = _replay(right)
            th2, h2 = _pull(th2, h2, b2)
            rest1, rest2 = h1[1:], h2[1:]
            merged = list(rest1)
            pool = list(rest1)
            for h in rest2:
                if h in pool:
                    pool.remove(h)
                else:
                    merged.append(h)
            if merged != rest1:
                w = rules.weaken_chain_th(tuple(rest1), tuple(merged), Falsity())
                th1 = modus_ponens(rules.imp_add_assum(b1, w), th1)
            if merged != rest2:
                w = rules.weaken_chain_th(tuple(rest2), tuple(merged), Falsity())
                th2 = modus_ponens(rules.imp_add_assum(b2, w), th2)
            th = rules.case_split(_beta_transfer_th(f), th1, th2)
            return _contract_front(th, [f] + merged)
        case _Gamma(f, t, inst, child):
            th, hyps = _replay(child)
            th, hyps = _pull(th, hyps, inst)
            th = rules.imp_trans(_gamma_step_th(f, t), th)
            return _contract_front(th, [f] + hyps[1:])
        case _Delta(f, y, inst, child):
            th, hyps = _replay(child)
            th, hyps = _pull(th, hyps, inst)
            rest = hyps[1:]
            r = rules.imp_chain(rest, Falsity())
            gen = generalize(y, th)
            m = modus_ponens(rules.exists_elim_th(y, inst, r), gen)
            if isinstance(f, Exists):
                al = rules.exists_alpha_th(f, y)
                th = rules.imp_trans(al, m)
            else:
                assert isinstance(f, Not) and isinstance(f.body, Forall)
                fa = f.body
                body_y = subst(fa.body, fa.var, Var(y))
                a = rules.all_mono(y, rules.dneg_elim_th(body_y))
                b = rules.forall_alpha_back_th(fa, y)
                c = rules.contrapos(rules.imp_trans(a, b))
                d = rules.iff_mp2(instantiate_axiom(ExistsDef(y, Not(body_y))))
                th = rules.imp_trans(rules.imp_trans(c, d), m)
            return _contract_front(th, [f] + rest)
    raise rules.RuleError(f"bad trace node {node!r}")


# ---------------------------------------------------------------------------
# Public entry points


def at_once(facts: Sequence[Formula], target: Formula,
            budget: Optional[Budget] = None) -> Theorem:
    """Prove |- conj(facts) ==> target (or |- target when no facts).

    Raises BudgetExceeded when the search gives up; never returns a wrong
    theorem — the conclusion is rebuilt through the kernel and checked.
    """
    budget = budget or Budget()
    facts = list(facts)
    neg = Not(target)
    roots: list[Formula] = []
    for f in facts + [neg]:
        if f not in roots:
            roots.append(f)
    search = _Search(roots, budget)
    trace = search.prove(roots)
    th, hyps = _replay(trace)

    if neg in hyps:
        th, hyps = _pull(th, hyps, neg)
        rest = hyps[1:]
        th = rules.imp_to_back(th, len(rest))
    else:
        rest = list(hyps)
        w = rules.weaken_chain_th(tuple(rest), tuple(rest + [neg]), Falsity())
        th = modus_ponens(w, th)
    conv = rules.imp_trans(rules.not_intro_th(neg), rules.dneg_elim_th(target))
    lifted = conv
    for h in reversed(rest):
        lifted = rules.imp_add_assum(h, lifted)
    th = modus_ponens(lifted, th)  # |- rest ==> target (curried)

    if not facts:
        if rest:
            raise rules.RuleError("at_once: unexpected residual hypotheses")
        result = th
        expect = target
    else:
        projections: dict[Formula, Theorem] = {}
        for f, proj in zip(facts, rules.conj_projections(facts)):
            projections.setdefault(f, proj)
        conj = rules.conj_of(facts)
        if not rest:
            result = rules.add_assum(conj, th)
        else:
            result = rules.imp_trans(projections[rest[0]], th)
            for h in rest[1:]:
                result = rules.right_mp(result, projections[h])
        expect = Imp(conj, target)
    if result.conclusion != expect:
        raise rules.RuleError(
            "at_once: replay produced an unexpected conclusion:\n"
            f"  got:  {print_formula(result.conclusion)}\n"
            f"  want: {print_formula(expect)}"
        )
    return result


def discharge_with_facts(th: Theorem, subgoal,
                         facts: Sequence[tuple[Optional[str], Formula,
                                               Optional[Theorem]]]) -> Theorem:
    """Turn |- conj(F) ==> p (or |- p) into a theorem discharging ``subgoal``.

    ``facts`` annotates each fact of F: labelled subgoal assumptions carry
    their label, globally proven lemmas carry their theorem.
    """
    assumptions = list(subgoal.assumptions)
    fact_list = [f for _, f, _ in facts]
    if not fact_list:
        if not assumptions:
            return th
        return rules.add_assum(rules.conj_of([f for _, f in assumptions]), th)

    cc = rules.conj_intro_chain(fact_list)
    lifted = th
    for f in reversed(fact_list):
        lifted = rules.imp_add_assum(f, lifted)
    cur = modus_ponens(lifted, cc)  # |- f1 ==> ... ==> fn ==> p

    remaining: list[tuple[Optional[str], Formula, Optional[Theorem]]] = list(facts)
    # Eliminate lemma facts by modus ponens, front to back.
    while any(t is not None for _, _, t in remaining):
        i = next(i for i, (_, _, t) in enumerate(remaining) if t is not None)
        if i:
            cur = rules.imp_front(i, cur)
            remaining.insert(0, remaining.pop(i))
        cur = modus_ponens(cur, remaining[0][2])
        remaining.pop(0)

    if not remaining:
        if not assumptions:
            return cur
        return rules.add_assum(rules.conj_of([f for _, f in assumptions]), cur)
    if not assumptions:
        raise rules.RuleError(
            "discharge: assumption facts cited but the subgoal has no assumptions"
        )
    table = {}
    for (label, proj) in zip([l for l, _ in assumptions],
                             rules.conj_projections([f for _, f in assumptions])):
        table[label] = proj
    by_label = {label: f for label, f in assumptions}
    projs: list[Theorem] = []
    for label, f, _ in remaining:
        if label is None or by_label.get(label) != f:
            raise rules.RuleError(f"discharge: fact {print_formula(f)} is not an assumption")
        projs.append(table[label])
    result = rules.imp_trans(projs[0], cur)
    for proj in projs[1:]:
        result = rules.right_mp(result, proj)
    return result


def lift_to_ambient(th: Theorem, subgoal, used: Sequence[str],
                    so_fact: Optional[Formula] = None) -> Theorem:
    """Discharge a subgoal from cited assumption labels and an optional
    leading fact carried over from the previous step."""
    by_label = dict(subgoal.assumptions)
    annotated: list[tuple[Optional[str], Formula, Optional[Theorem]]] = []
    if so_fact is not None:
        label = next((l for l, f in subgoal.assumptions if f == so_fact), None)
        if label is None:
            raise rules.RuleError("lift_to_ambient: so-fact is not an assumption")
        annotated.append((label, so_fact, None))
    for label in used:
        if label not in by_label:
            raise rules.RuleError(f"lift_to_ambient: unknown label {label!r}")
        annotated.append((label, by_label[label], None))
    return discharge_with_facts(th, subgoal, annotated)
