"""Derived inference rules, built exclusively from kernel operations.

Sections, roughly bottom-up: the pure implication calculus, classical
negation helpers, conjunction and disjunction, implication-chain surgery
(reordering and weakening of hypothesis lists), and the first-order layer
(equality congruence, instantiation of universals, alpha conversion and
existential introduction/elimination).  Everything here manufactures
theorems only through ``instantiate_axiom``, ``modus_ponens`` and
``generalize``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .kernel import (
    AddImp, AllImp, AndDef, DistribImp, DoubleNeg, EqRefl, ExistsDef,
    ExistsEq, FunCong, IffImp1, IffImp2, ImpAll, ImpIff, NotDef, OrDef,
    PredCong, Theorem, TrueDef, generalize, instantiate_axiom, modus_ponens,
)
from .syntax import (
    And, Atom, Exists, Falsity, Fn, Forall, Formula, Iff, Imp, Not, Or,
    Term, Truth, Var, all_names, free_vars, free_vars_term, fresh_variant,
    mk_eq, print_formula, subst, subst_term,
)

__all__ = [
    "RuleError",
    "imp_refl", "imp_trans", "right_mp", "unshunt", "shunt", "and_pair",
    "conj_projections", "conj_of",
]


class RuleError(Exception):
    pass


_ax = lru_cache(maxsize=None)(instantiate_axiom)
mp = modus_ponens


def dest_imp(f: Formula) -> tuple[Formula, Formula]:
    if not isinstance(f, Imp):
        raise RuleError(f"expected an implication, got {print_formula(f)!r}")
    return f.left, f.right


def imp_chain(hyps: Sequence[Formula], final: Formula) -> Formula:
    f = final
    for h in reversed(hyps):
        f = Imp(h, f)
    return f


# ---------------------------------------------------------------------------
# Implication calculus


@lru_cache(maxsize=None)
def imp_refl(p: Formula) -> Theorem:
    """|- p ==> p"""
    pp = Imp(p, p)
    step = mp(_ax(DistribImp(p, pp, p)), _ax(AddImp(p, pp)))
    return mp(step, _ax(AddImp(p, p)))


def add_assum(p: Formula, th: Theorem) -> Theorem:
    """From |- q derive |- p ==> q."""
    return mp(_ax(AddImp(th.conclusion, p)), th)


def imp_add_assum(p: Formula, th: Theorem) -> Theorem:
    """From |- q ==> r derive |- (p ==> q) ==> (p ==> r)."""
    q, r = dest_imp(th.conclusion)
    return mp(_ax(DistribImp(p, q, r)), add_assum(p, th))


def imp_trans(th1: Theorem, th2: Theorem) -> Theorem:
    """From |- p ==> q and |- q ==> r derive |- p ==> r."""
    p, q = dest_imp(th1.conclusion)
    q2, _ = dest_imp(th2.conclusion)
    if q != q2:
        raise RuleError(
            "imp_trans: middle formulas differ:\n"
            f"  {print_formula(q)}\n  {print_formula(q2)}"
        )
    return mp(imp_add_assum(p, th2), th1)


def imp_insert(q: Formula, th: Theorem) -> Theorem:
    """From |- p ==> r derive |- p ==> q ==> r."""
    _, r = dest_imp(th.conclusion)
    return imp_trans(th, _ax(AddImp(r, q)))


def imp_swap(th: Theorem) -> Theorem:
    """From |- p ==> q ==> r derive |- q ==> p ==> r."""
    p, qr = dest_imp(th.conclusion)
    q, r = dest_imp(qr)
    return imp_trans(_ax(AddImp(q, p)), mp(_ax(DistribImp(p, q, r)), th))


@lru_cache(maxsize=None)
def imp_trans_th(p: Formula, q: Formula, r: Formula) -> Theorem:
    """|- (q ==> r) ==> (p ==> q) ==> (p ==> r)"""
    return imp_trans(_ax(AddImp(Imp(q, r), p)), _ax(DistribImp(p, q, r)))


def imp_add_concl(r: Formula, th: Theorem) -> Theorem:
    """From |- a ==> b derive |- (b ==> r) ==> (a ==> r)."""
    a, b = dest_imp(th.conclusion)
    return mp(imp_swap(imp_trans_th(a, b, r)), th)


@lru_cache(maxsize=None)
def imp_swap_th(p: Formula, q: Formula, r: Formula) -> Theorem:
    """|- (p ==> q ==> r) ==> (q ==> p ==> r)"""
    return imp_trans(
        _ax(DistribImp(p, q, r)),
        imp_add_concl(Imp(p, r), _ax(AddImp(q, p))),
    )


def right_mp(imp: Theorem, ant: Theorem) -> Theorem:
    """From |- p ==> q ==> r and |- p ==> q derive |- p ==> r."""
    try:
        p, qr = dest_imp(imp.conclusion)
        q, r = dest_imp(qr)
    except RuleError:
        raise RuleError(f"right_mp: shape mismatch in implication {imp!r}") from None
    try:
        p2, q2 = dest_imp(ant.conclusion)
    except RuleError:
        raise RuleError(f"right_mp: shape mismatch in antecedent {ant!r}") from None
    if p != p2 or q != q2:
        raise RuleError(
            "right_mp: shape mismatch between the two inputs:\n"
            f"  implication: {imp!r}\n  antecedent:  {ant!r}"
        )
    return mp(mp(_ax(DistribImp(p, q, r)), imp), ant)


def trans_in(th: Theorem, pre: Theorem) -> Theorem:
    """From |- x ==> (c ==> d) and |- b ==> c derive |- x ==> (b ==> d)."""
    _, cd = dest_imp(th.conclusion)
    _, d = dest_imp(cd)
    return imp_trans(th, imp_add_concl(d, pre))


def trans_out(th: Theorem, post: Theorem) -> Theorem:
    """From |- x ==> (c ==> d) and |- d ==> e derive |- x ==> (c ==> e)."""
    _, cd = dest_imp(th.conclusion)
    c, _ = dest_imp(cd)
    return imp_trans(th, imp_add_assum(c, post))


def ambient_trans(th_a: Theorem, th_b: Theorem) -> Theorem:
    """From |- d ==> (p ==> q) and |- d ==> (q ==> r) derive |- d ==> (p ==> r)."""
    _, pq = dest_imp(th_a.conclusion)
    p, q = dest_imp(pq)
    _, qr = dest_imp(th_b.conclusion)
    _, r = dest_imp(qr)
    return right_mp(imp_trans(th_b, imp_trans_th(p, q, r)), th_a)


def rmp2(imp: Theorem, ant: Theorem) -> Theorem:
    """right_mp two hypotheses deep: |- p ==> f ==> (q ==> r) with
    |- p ==> f ==> q gives |- p ==> f ==> r."""
    p, rest = dest_imp(imp.conclusion)
    f, qr = dest_imp(rest)
    q, r = dest_imp(qr)
    w = add_assum(p, _ax(DistribImp(f, q, r)))
    return right_mp(right_mp(w, imp), ant)


def insert_under(th: Theorem, h: Formula) -> Theorem:
    """From |- d ==> z derive |- d ==> (h ==> z)."""
    _, z = dest_imp(th.conclusion)
    return imp_trans(th, _ax(AddImp(z, h)))


def amb2_trans(th1: Theorem, th2: Theorem) -> Theorem:
    """From |- d ==> x ==> (p ==> q) and |- d ==> x ==> (q ==> r)
    derive |- d ==> x ==> (p ==> r)."""
    d, rest = dest_imp(th1.conclusion)
    x, pq = dest_imp(rest)
    p, q = dest_imp(pq)
    _, rest2 = dest_imp(th2.conclusion)
    _, qr = dest_imp(rest2)
    _, r = dest_imp(qr)
    base = add_assum(d, add_assum(x, imp_trans_th(p, q, r)))
    return rmp2(rmp2(base, th2), th1)


# ---------------------------------------------------------------------------
# Negation and classical reasoning


@lru_cache(maxsize=None)
def not_elim_th(p: Formula) -> Theorem:
    """|- ~p ==> (p ==> false)"""
    nd = _ax(NotDef(p))
    return mp(_ax(IffImp1(Not(p), Imp(p, Falsity()))), nd)


@lru_cache(maxsize=None)
def not_intro_th(p: Formula) -> Theorem:
    """|- (p ==> false) ==> ~p"""
    nd = _ax(NotDef(p))
    return mp(_ax(IffImp2(Not(p), Imp(p, Falsity()))), nd)


def iff_mp1(th: Theorem) -> Theorem:
    """From |- p <=> q derive |- p ==> q."""
    c = th.conclusion
    if not isinstance(c, Iff):
        raise RuleError(f"iff_mp1: not a bi-implication: {th!r}")
    return mp(_ax(IffImp1(c.left, c.right)), th)


def iff_mp2(th: Theorem) -> Theorem:
    """From |- p <=> q derive |- q ==> p."""
    c = th.conclusion
    if not isinstance(c, Iff):
        raise RuleError(f"iff_mp2: not a bi-implication: {th!r}")
    return mp(_ax(IffImp2(c.left, c.right)), th)


@lru_cache(maxsize=None)
def ex_falso_th(q: Formula) -> Theorem:
    """|- false ==> q"""
    t1 = _ax(AddImp(Falsity(), Imp(q, Falsity())))
    return imp_trans(t1, _ax(DoubleNeg(q)))


@lru_cache(maxsize=None)
def truth_th() -> Theorem:
    """|- true"""
    t = mp(_ax(IffImp2(Truth(), Imp(Falsity(), Falsity()))), _ax(TrueDef()))
    return mp(t, imp_refl(Falsity()))


@lru_cache(maxsize=None)
def dneg_elim_th(p: Formula) -> Theorem:
    """|- ~~p ==> p"""
    a = not_elim_th(Not(p))
    b = imp_add_concl(Falsity(), not_intro_th(p))
    return imp_trans(imp_trans(a, b), _ax(DoubleNeg(p)))


@lru_cache(maxsize=None)
def dneg_intro_th(p: Formula) -> Theorem:
    """|- p ==> ~~p"""
    return imp_trans(imp_swap(not_elim_th(p)), not_intro_th(Not(p)))


@lru_cache(maxsize=None)
def contrapos_th(a: Formula, b: Formula) -> Theorem:
    """|- (a ==> b) ==> (~b ==> ~a)"""
    t2 = imp_swap(imp_trans_th(a, b, Falsity()))
    return trans_out(trans_in(t2, not_elim_th(b)), not_intro_th(a))


def contrapos(th: Theorem) -> Theorem:
    """From |- a ==> b derive |- ~b ==> ~a."""
    a, b = dest_imp(th.conclusion)
    return mp(contrapos_th(a, b), th)


@lru_cache(maxsize=None)
def contract_th(f: Formula, x: Formula) -> Theorem:
    """|- (f ==> f ==> x) ==> (f ==> x)"""
    return mp(imp_swap(_ax(DistribImp(f, f, x))), imp_refl(f))


@lru_cache(maxsize=None)
def peirce_th(r: Formula) -> Theorem:
    """|- ((r ==> false) ==> r) ==> r"""
    nr = Imp(r, Falsity())
    y = Imp(nr, r)
    th_a = imp_swap(imp_refl(y))          # |- nr ==> (y ==> r)
    th_b = imp_refl(nr)                   # |- nr ==> (r ==> false)
    t2 = ambient_trans(th_a, th_b)        # |- nr ==> (y ==> false)
    return imp_trans(imp_swap(t2), _ax(DoubleNeg(r)))


# ---------------------------------------------------------------------------
# Conjunction and disjunction


@lru_cache(maxsize=None)
def and_left_th(p: Formula, q: Formula) -> Theorem:
    """|- p /\\ q ==> p"""
    c1 = iff_mp1(_ax(AndDef(p, q)))
    a = imp_add_assum(p, _ax(AddImp(Falsity(), q)))
    b = imp_add_concl(Falsity(), a)
    return imp_trans(c1, imp_trans(b, _ax(DoubleNeg(p))))


@lru_cache(maxsize=None)
def and_right_th(p: Formula, q: Formula) -> Theorem:
    """|- p /\\ q ==> q"""
    c1 = iff_mp1(_ax(AndDef(p, q)))
    a = _ax(AddImp(Imp(q, Falsity()), p))
    b = imp_add_concl(Falsity(), a)
    return imp_trans(c1, imp_trans(b, _ax(DoubleNeg(q))))


@lru_cache(maxsize=None)
def and_pair(p: Formula, q: Formula) -> Theorem:
    """|- p ==> q ==> p /\\ q"""
    x = Imp(p, Imp(q, Falsity()))
    th0 = imp_swap(imp_refl(x))                      # |- p ==> (x ==> (q ==> false))
    th1 = imp_trans(th0, imp_swap_th(x, q, Falsity()))
    th2 = iff_mp2(_ax(AndDef(p, q)))                 # |- (x ==> false) ==> p /\ q
    return imp_trans(th1, imp_add_assum(q, th2))


def unshunt(th: Theorem) -> Theorem:
    """From |- p ==> q ==> r derive |- p /\\ q ==> r."""
    p, qr = dest_imp(th.conclusion)
    q, _ = dest_imp(qr)
    e = imp_trans(and_left_th(p, q), th)
    return right_mp(e, and_right_th(p, q))


def shunt(th: Theorem) -> Theorem:
    """From |- p /\\ q ==> r derive |- p ==> q ==> r."""
    ant, _ = dest_imp(th.conclusion)
    if not isinstance(ant, And):
        raise RuleError(f"shunt: antecedent is not a conjunction: {th!r}")
    p, q = ant.left, ant.right
    return mp(imp_add_assum(p, imp_add_assum(q, th)), and_pair(p, q))


def conj_of(fs: Sequence[Formula]) -> Formula:
    """Right-nested conjunction f1 /\\ (f2 /\\ (... fn))."""
    if not fs:
        raise RuleError("conj_of: empty list")
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def conj_projections(fs: Sequence[Formula]) -> list[Theorem]:
    """[|- C ==> f1, ..., |- C ==> fn] for C the right-nested conjunction."""
    fs = list(fs)
    if not fs:
        raise RuleError("conj_projections: empty list")
    if len(fs) == 1:
        return [imp_refl(fs[0])]
    rest = conj_of(fs[1:])
    head = and_left_th(fs[0], rest)
    tail = and_right_th(fs[0], rest)
    return [head] + [imp_trans(tail, th) for th in conj_projections(fs[1:])]


def conj_intro_chain(fs: Sequence[Formula]) -> Theorem:
    """|- f1 ==> f2 ==> ... ==> fn ==> conj(fs)"""
    fs = list(fs)
    if not fs:
        raise RuleError("conj_intro_chain: empty list")
    if len(fs) == 1:
        return imp_refl(fs[0])
    rest = fs[1:]
    ih = conj_intro_chain(rest)
    ap = and_pair(fs[0], conj_of(rest))
    lifted = imp_swap(ap)  # |- conj(rest) ==> (f1 ==> conj(fs))
    for h in reversed(rest):
        lifted = imp_add_assum(h, lifted)
    th = mp(lifted, ih)    # |- f2 ==> ... ==> fn ==> (f1 ==> conj(fs))
    return imp_front(len(rest), th)


def conj_extend(assumptions: Sequence[Formula], p: Formula) -> Theorem:
    """|- conj(A) ==> (p ==> conj(A + [p]))"""
    assumptions = list(assumptions)
    if not assumptions:
        raise RuleError("conj_extend: empty assumption list")
    if len(assumptions) == 1:
        return and_pair(assumptions[0], p)
    a1, rest = assumptions[0], assumptions[1:]
    r = conj_of(rest)
    r2 = conj_of(rest + [p])
    ih = conj_extend(rest, p)
    q1 = imp_trans(and_right_th(a1, r), ih)
    q2 = imp_trans(and_left_th(a1, r), and_pair(a1, r2))
    return ambient_trans(q1, q2)


@lru_cache(maxsize=None)
def or_left_th(p: Formula, q: Formula) -> Theorem:
    """|- p ==> p \\/ q"""
    t1 = imp_trans(and_left_th(Not(p), Not(q)), not_elim_th(p))
    t3 = imp_trans(imp_swap(t1), not_intro_th(And(Not(p), Not(q))))
    return imp_trans(t3, iff_mp2(_ax(OrDef(p, q))))


@lru_cache(maxsize=None)
def or_right_th(p: Formula, q: Formula) -> Theorem:
    """|- q ==> p \\/ q"""
    t1 = imp_trans(and_right_th(Not(p), Not(q)), not_elim_th(q))
    t3 = imp_trans(imp_swap(t1), not_intro_th(And(Not(p), Not(q))))
    return imp_trans(t3, iff_mp2(_ax(OrDef(p, q))))


def case_split(transfer: Theorem, th1: Theorem, th2: Theorem) -> Theorem:
    """From |- f ==> (~b1 ==> b2), |- b1 ==> r and |- b2 ==> r derive |- f ==> r.

    The classical two-branch combination used to replay beta expansions.
    """
    b1, r = dest_imp(th1.conclusion)
    s2 = imp_trans(transfer, imp_add_assum(Not(b1), th2))
    s3 = imp_swap(s2)                                  # |- ~b1 ==> (f ==> r)
    w1 = imp_add_concl(Falsity(), th1)                 # |- (r==>false) ==> (b1==>false)
    w2 = imp_trans(w1, not_intro_th(b1))
    w4 = imp_swap(imp_trans(w2, s3))                   # |- f ==> ((r==>false) ==> r)
    return imp_trans(w4, peirce_th(r))


# ---------------------------------------------------------------------------
# Implication-chain surgery.  Hypothesis lists are explicit: the chain
# structure of a theorem is never inferred from formula shapes alone.


@lru_cache(maxsize=None)
def imp_front_th(n: int, fm: Formula) -> Theorem:
    """|- fm ==> fm' where fm' moves the n-th hypothesis of fm to the front."""
    if n == 0:
        return imp_refl(fm)
    p, qr = dest_imp(fm)
    ih = imp_front_th(n - 1, qr)
    _, qr2 = dest_imp(ih.conclusion)
    hn, rest = dest_imp(qr2)
    s1 = imp_add_assum(p, ih)
    s2 = imp_swap_th(p, hn, rest)
    return imp_trans(s1, s2)


def imp_front(n: int, th: Theorem) -> Theorem:
    """Bring the n-th (0-based) hypothesis of an implication chain to the front."""
    return mp(imp_front_th(n, th.conclusion), th)


def imp_to_back(th: Theorem, n_rest: int) -> Theorem:
    """Move the front hypothesis past the next ``n_rest`` hypotheses.

    |- a ==> h1 ==> ... ==> hk ==> X  becomes  |- h1 ==> ... ==> hk ==> a ==> X.
    """

    def builder(fm: Formula, k: int) -> Theorem:
        if k == 0:
            return imp_refl(fm)
        a, hr = dest_imp(fm)
        h, rest = dest_imp(hr)
        s1 = imp_swap_th(a, h, rest)
        ih = builder(Imp(a, rest), k - 1)
        return imp_trans(s1, imp_add_assum(h, ih))

    return mp(builder(th.conclusion, n_rest), th)


def weaken_chain_th(sub: Sequence[Formula], sup: Sequence[Formula],
                    final: Formula) -> Theorem:
    """|- chain(sub, final) ==> chain(sup, final), sub a sub-multiset of sup."""
    sub = list(sub)
    sup = list(sup)
    if not sup:
        if sub:
            raise RuleError("weaken_chain_th: sub is not contained in sup")
        return imp_refl(final)
    h = sup[0]
    if h in sub:
        i = sub.index(h)
        rot = imp_front_th(i, imp_chain(sub, final))
        rest = sub[:i] + sub[i + 1:]
        w = weaken_chain_th(rest, sup[1:], final)
        return imp_trans(rot, imp_add_assum(h, w))
    w = weaken_chain_th(sub, sup[1:], final)
    return imp_trans(w, _ax(AddImp(imp_chain(sup[1:], final), h)))


def imp_trans_chain(ants: Sequence[Theorem], main: Theorem) -> Theorem:
    """From [|- d ==> x1, ..., |- d ==> xn] and |- x1 ==> ... ==> xn ==> g
    derive |- d ==> g."""
    if not ants:
        raise RuleError("imp_trans_chain: no antecedent theorems")
    d, _ = dest_imp(ants[0].conclusion)
    th = add_assum(d, main)
    for ant in ants:
        th = right_mp(th, ant)
    return th


# ---------------------------------------------------------------------------
# First-order layer: congruence, instantiation, alpha conversion


@lru_cache(maxsize=None)
def eq_sym_th(s: Term, t: Term) -> Theorem:
    """|- s = t ==> t = s"""
    pc = _ax(PredCong("=", (s, s), (t, s)))
    r = _ax(EqRefl(s))
    t1 = mp(imp_swap(pc), r)
    return mp(imp_swap(t1), r)


@lru_cache(maxsize=None)
def term_cong(x: str, t: Term, u: Term) -> Theorem:
    """|- x = t ==> u = u[t/x]"""
    d = mk_eq(Var(x), t)
    u2 = subst_term(u, x, t)
    if u2 == u:
        return add_assum(d, _ax(EqRefl(u)))
    if u == Var(x):
        return imp_refl(d)
    assert isinstance(u, Fn)
    ants = [term_cong(x, t, a) for a in u.args]
    fc = _ax(FunCong(u.name, u.args, tuple(subst_term(a, x, t) for a in u.args)))
    return imp_trans_chain(ants, fc)


def _isubst_atom(x: str, t: Term, sfm: Atom) -> tuple[Theorem, Theorem]:
    d = mk_eq(Var(x), t)
    args2 = tuple(subst_term(a, x, t) for a in sfm.args)
    fwd_ants = [term_cong(x, t, a) for a in sfm.args]
    bwd_ants = [
        imp_trans(th, eq_sym_th(a, a2))
        for th, a, a2 in zip(fwd_ants, sfm.args, args2)
    ]
    fwd = imp_trans_chain(fwd_ants, _ax(PredCong(sfm.pred, sfm.args, args2)))
    bwd = imp_trans_chain(bwd_ants, _ax(PredCong(sfm.pred, args2, sfm.args)))
    return fwd, bwd


@lru_cache(maxsize=None)
def isubst(x: str, t: Term, sfm: Formula) -> tuple[Theorem, Theorem]:
    """(|- x = t ==> (sfm ==> tfm), |- x = t ==> (tfm ==> sfm)) for
    tfm = subst(sfm, x, t)."""
    d = mk_eq(Var(x), t)
    tfm = subst(sfm, x, t)
    if tfm == sfm:
        both = add_assum(d, imp_refl(sfm))
        return both, both
    match sfm:
        case Atom(_, _):
            return _isubst_atom(x, t, sfm)
        case Imp(a, b):
            fwd_a, bwd_a = isubst(x, t, a)
            fwd_b, bwd_b = isubst(x, t, b)
            a2, b2 = subst(a, x, t), subst(b, x, t)
            xx = Imp(a, b)
            xx2 = Imp(a2, b2)
            refl_f = add_assum(d, imp_refl(xx))
            c1 = amb2_trans(insert_under(bwd_a, xx), refl_f)
            fwd = amb2_trans(c1, insert_under(fwd_b, xx))
            refl_b = add_assum(d, imp_refl(xx2))
            c2 = amb2_trans(insert_under(fwd_a, xx2), refl_b)
            bwd = amb2_trans(c2, insert_under(bwd_b, xx2))
            return fwd, bwd
        case Not(p):
            g = Imp(p, Falsity())
            p2 = subst(p, x, t)
            fwd_g, bwd_g = isubst(x, t, g)
            fwd = trans_out(trans_in(fwd_g, not_elim_th(p)), not_intro_th(p2))
            bwd = trans_out(trans_in(bwd_g, not_elim_th(p2)), not_intro_th(p))
            return fwd, bwd
        case And(a, b):
            g = Imp(Imp(a, Imp(b, Falsity())), Falsity())
            a2, b2 = subst(a, x, t), subst(b, x, t)
            fwd_g, bwd_g = isubst(x, t, g)
            fwd = trans_out(trans_in(fwd_g, iff_mp1(_ax(AndDef(a, b)))),
                            iff_mp2(_ax(AndDef(a2, b2))))
            bwd = trans_out(trans_in(bwd_g, iff_mp1(_ax(AndDef(a2, b2)))),
                            iff_mp2(_ax(AndDef(a, b))))
            return fwd, bwd
        case Or(a, b):
            g = Not(And(Not(a), Not(b)))
            a2, b2 = subst(a, x, t), subst(b, x, t)
            fwd_g, bwd_g = isubst(x, t, g)
            fwd = trans_out(trans_in(fwd_g, iff_mp1(_ax(OrDef(a, b)))),
                            iff_mp2(_ax(OrDef(a2, b2))))
            bwd = trans_out(trans_in(bwd_g, iff_mp1(_ax(OrDef(a2, b2)))),
                            iff_mp2(_ax(OrDef(a, b))))
            return fwd, bwd
        case Iff(a, b):
            fab, bab = isubst(x, t, Imp(a, b))
            fba, bba = isubst(x, t, Imp(b, a))
            a2, b2 = subst(a, x, t), subst(b, x, t)
            fwd = _iff_mono(d, Iff(a, b), Iff(a2, b2), a, b, a2, b2, fab, fba)
            bwd = _iff_mono(d, Iff(a2, b2), Iff(a, b), a2, b2, a, b, bab, bba)
            return fwd, bwd
        case Exists(z, p):
            g = Not(Forall(z, Not(p)))
            assert isinstance(tfm, Exists)
            z2, p2 = tfm.var, tfm.body
            fwd_g, bwd_g = isubst(x, t, g)
            fwd = trans_out(trans_in(fwd_g, iff_mp1(_ax(ExistsDef(z, p)))),
                            iff_mp2(_ax(ExistsDef(z2, p2))))
            bwd = trans_out(trans_in(bwd_g, iff_mp1(_ax(ExistsDef(z2, p2)))),
                            iff_mp2(_ax(ExistsDef(z, p))))
            return fwd, bwd
        case Forall(z, p):
            if z in free_vars_term(t):
                # Rename the binder first; subst() made the same choice.
                assert isinstance(tfm, Forall)
                z2 = tfm.var
                fm2 = Forall(z2, subst(p, z, Var(z2)))
                a_fwd = forall_alpha_th(sfm, z2)
                a_bwd = forall_alpha_back_th(sfm, z2)
                fwd2, bwd2 = isubst(x, t, fm2)
                return trans_in(fwd2, a_fwd), trans_out(bwd2, a_bwd)
            fwd_p, bwd_p = isubst(x, t, p)
            p2 = subst(p, x, t)
            fwd = imp_trans(gen_right(z, fwd_p), _ax(AllImp(z, p, p2)))
            bwd = imp_trans(gen_right(z, bwd_p), _ax(AllImp(z, p2, p)))
            return fwd, bwd
    raise RuleError(f"isubst: unhandled formula {print_formula(sfm)!r}")


def _iff_mono(d: Formula, f: Formula, f2: Formula,
              a: Formula, b: Formula, a2: Formula, b2: Formula,
              fab: Theorem, fba: Theorem) -> Theorem:
    """|- d ==> (f ==> f2) from monotonicity of the two implications."""
    h1 = trans_in(fab, _ax(IffImp1(a, b)))
    h2 = trans_in(fba, _ax(IffImp2(a, b)))
    z = add_assum(d, add_assum(f, _ax(ImpIff(a2, b2))))
    return rmp2(rmp2(z, h1), h2)


def all_mono(x: str, th: Theorem) -> Theorem:
    """From |- a ==> b derive |- (forall x. a) ==> (forall x. b)."""
    a, b = dest_imp(th.conclusion)
    return mp(_ax(AllImp(x, a, b)), generalize(x, th))


def gen_right(x: str, th: Theorem) -> Theorem:
    """From |- d ==> q, x not free in d, derive |- d ==> forall x. q."""
    d, _ = dest_imp(th.conclusion)
    return imp_trans(_ax(ImpAll(x, d)), all_mono(x, th))


@lru_cache(maxsize=None)
def exists_elim_th(y: str, q: Formula, r: Formula) -> Theorem:
    """|- (forall y. (q ==> r)) ==> ((exists y. q) ==> r), y not free in r."""
    if y in free_vars(r):
        raise RuleError(f"exists_elim_th: {y!r} free in the conclusion")
    cp = contrapos_th(q, r)
    th1 = imp_trans(all_mono(y, cp), _ax(AllImp(y, Not(r), Not(q))))
    th2 = trans_in(th1, _ax(ImpAll(y, Not(r))))
    th3 = imp_trans(th2, contrapos_th(Not(r), Forall(y, Not(q))))
    th4 = trans_out(th3, dneg_elim_th(r))
    return trans_in(th4, iff_mp1(_ax(ExistsDef(y, q))))


@lru_cache(maxsize=None)
def ispec_th(t: Term, fm: Formula) -> Theorem:
    """|- (forall x. p) ==> p[t/x]"""
    if not isinstance(fm, Forall):
        raise RuleError(f"ispec_th: not a universal formula: {print_formula(fm)!r}")
    x, p = fm.var, fm.body
    if x in free_vars_term(t):
        z = fresh_variant(x, _avoid_for_alpha(p, t, x))
        fm2 = Forall(z, subst(p, x, Var(z)))
        return imp_trans(forall_alpha_th(fm, z), ispec_th(t, fm2))
    q = subst(p, x, t)
    if x in free_vars(q):
        raise RuleError("ispec_th: substitution left the bound variable free")
    fwd, _ = isubst(x, t, p)
    m1 = all_mono(x, imp_swap(fwd))
    ee = exists_elim_th(x, mk_eq(Var(x), t), q)
    m3 = mp(imp_swap(ee), _ax(ExistsEq(x, t)))
    return imp_trans(m1, m3)


def spec(t: Term, th: Theorem) -> Theorem:
    """From |- forall x. p derive |- p[t/x]."""
    return mp(ispec_th(t, th.conclusion), th)


def _avoid_for_alpha(p: Formula, t: Term, x: str) -> frozenset[str]:
    return all_names(p) | free_vars_term(t) | {x}


@lru_cache(maxsize=None)
def forall_alpha_th(fm: Formula, z: str) -> Theorem:
    """|- (forall x. p) ==> (forall z. p[z/x]) for a safely fresh z."""
    if not isinstance(fm, Forall):
        raise RuleError("forall_alpha_th: not a universal formula")
    return gen_right(z, ispec_th(Var(z), fm))


@lru_cache(maxsize=None)
def forall_alpha_back_th(fm: Formula, z: str) -> Theorem:
    """|- (forall z. p[z/x]) ==> (forall x. p), inverse of forall_alpha_th."""
    if not isinstance(fm, Forall):
        raise RuleError("forall_alpha_back_th: not a universal formula")
    x, p = fm.var, fm.body
    q = subst(p, x, Var(z))
    back = ispec_th(Var(x), Forall(z, q))
    if back.conclusion != Imp(Forall(z, q), p):
        raise RuleError("forall_alpha_back_th: renaming does not round-trip")
    return gen_right(x, back)


@lru_cache(maxsize=None)
def exists_alpha_th(fm: Formula, z: str) -> Theorem:
    """|- (exists x. p) ==> (exists z. p[z/x]) for a safely fresh z."""
    if not isinstance(fm, Exists):
        raise RuleError("exists_alpha_th: not an existential formula")
    x, p = fm.var, fm.body
    q = subst(p, x, Var(z))
    a = ispec_th(Var(x), Forall(z, Not(q)))
    if a.conclusion != Imp(Forall(z, Not(q)), Not(p)):
        raise RuleError("exists_alpha_th: renaming does not round-trip")
    b = gen_right(x, a)
    c = contrapos(b)
    fwd = imp_trans(iff_mp1(_ax(ExistsDef(x, p))), c)
    return imp_trans(fwd, iff_mp2(_ax(ExistsDef(z, q))))


@lru_cache(maxsize=None)
def exists_intro_th(t: Term, x: str, p: Formula) -> Theorem:
    """|- p[t/x] ==> exists x. p"""
    q = subst(p, x, t)
    isp = ispec_th(t, Forall(x, Not(p)))
    c = contrapos(isp)
    d = imp_trans(dneg_intro_th(q), c)
    return imp_trans(d, iff_mp2(_ax(ExistsDef(x, p))))


# ---------------------------------------------------------------------------
# Closure theorems used by the proof-producing prover


@lru_cache(maxsize=None)
def not_true_false_th() -> Theorem:
    """|- ~true ==> false"""
    return mp(imp_swap(not_elim_th(Truth())), truth_th())


@lru_cache(maxsize=None)
def neq_refl_false_th(t: Term) -> Theorem:
    """|- ~(t = t) ==> false"""
    eq = mk_eq(t, t)
    return mp(imp_swap(not_elim_th(eq)), _ax(EqRefl(t)))
