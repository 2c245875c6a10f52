"""Derivation-to-derivation transformers and calculus translations.

Each function returns an ordinary Derivation that can be handed to
``calculi.check``; nothing here is trusted without re-checking in the tests.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .calculi import (
    EIGEN_RULES, LEAVES, SIDETRACK, Derivation, all_variables, instance, is_atomic_gid,
    node, witness_for,
)
from .syntax import (
    Atom, Conj, Disj, EWitness, Exists, Forall, MultisetSequent, Neg, SetSequent,
    Signature, UWitness, Var, all_vars, alpha_equivalent, big_conj, fresh_var,
    free_vars, replace_term, show, substitute, tau, to_epsilon, to_henkin, witnesses,
)


@dataclass
class DerivationPair:
    forward: object
    backward: object


# ---------------------------------------------------------------- generic mapping

def map_formulas(d: Derivation, fn, eigen_fn=None) -> Derivation:
    """Apply ``fn`` to every formula and term in ``d``; ``eigen_fn`` maps eigenvariables."""
    kids = tuple(map_formulas(c, fn, eigen_fn) for c in d.children)
    prin = None if d.principal is None else (d.principal[0], fn(d.principal[1]))
    term = None if d.term is None else fn(d.term)
    eigen = d.eigen if eigen_fn is None or d.eigen is None else eigen_fn(d.eigen)
    return replace(d, sequent=d.sequent.map(fn), children=kids, principal=prin,
                   term=term, eigen=eigen)


def rename_free(d: Derivation, x: str, z: str) -> Derivation:
    """Replace free occurrences of ``x`` by the unused variable ``z`` throughout ``d``."""
    if z in all_variables(d):
        raise ValueError(f"variable {z} already occurs in the derivation")
    return map_formulas(d, lambda f: substitute(f, x, Var(z)),
                        lambda e: z if e == x else e)


def _eigen_scope(d: Derivation):
    """Index of the child in which the eigenvariable of ``d`` is local."""
    return 1 if d.rule in SIDETRACK else 0


def freshen_eigenvariables(d: Derivation, avoid, only=None) -> Derivation:
    """Rename eigenvariables (all, or those in ``only``) to names outside ``avoid``."""
    used = set(avoid) | all_variables(d)

    def go(n):
        kids = [go(c) for c in n.children]
        n = n.with_children(kids)
        if n.rule in EIGEN_RULES and n.eigen is not None and (only is None or n.eigen in only):
            z = fresh_var(n.eigen, used)
            used.add(z)
            i = _eigen_scope(n)
            kids[i] = map_formulas(kids[i], lambda f: substitute(f, n.eigen, Var(z)),
                                   lambda e, y=n.eigen: z if e == y else e)
            n = replace(n, eigen=z, children=tuple(kids))
        return n

    return go(d)


def replace_leaves(d: Derivation, pred, fn) -> Derivation:
    if d.rule in LEAVES:
        return fn(d) if pred(d) else d
    return d.with_children([replace_leaves(c, pred, fn) for c in d.children])


def relabel_binders(d: Derivation, taken) -> Derivation:
    """Give every sidetrack node in ``d`` a label outside ``taken``."""
    taken = set(taken)

    def go(n):
        kids = [go(c) for c in n.children]
        n = n.with_children(kids)
        if n.rule in SIDETRACK and n.binds is not None:
            new = _fresh_label(n.binds, taken)
            taken.add(new)
            old = n.binds
            minor = _relabel_bound(kids[1], old, new)
            n = replace(n, binds=new, children=(kids[0], minor))
        return n

    return go(d)


def _relabel_bound(d, old, new):
    if d.rule == "Discharged" and d.label == old:
        return replace(d, label=new)
    if d.rule in SIDETRACK and d.binds == old:
        return d.with_children([_relabel_bound(d.children[0], old, new), d.children[1]])
    return d.with_children([_relabel_bound(c, old, new) for c in d.children])


def _fresh_label(base, taken):
    stem = base.rstrip("0123456789") or "h"
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


def labels(d: Derivation) -> set:
    return {n.label for n in d.nodes() if n.label} | {n.binds for n in d.nodes() if n.binds}


# ---------------------------------------------------------------- atomic identity

def gid_derivation(f, gamma, delta, avoid=()) -> Derivation:
    """Derivation of ``f, gamma |- delta, f`` from atomic identities and introductions."""
    seq = MultisetSequent((f,) + tuple(gamma), tuple(delta) + (f,))
    if isinstance(f, Atom):
        return node("GID", seq, principal=("R", f))
    if isinstance(f, Neg):
        a = f.sub
        inner = gid_derivation(a, gamma, delta, avoid)
        mid = node("NegL.down", MultisetSequent((f, a) + tuple(gamma), tuple(delta)),
                   [inner], principal=("L", f))
        return node("NegR.down", seq, [mid], principal=("R", f))
    if isinstance(f, Conj):
        a, b = f.left, f.right
        left = gid_derivation(a, (b,) + tuple(gamma), delta, avoid)
        right = gid_derivation(b, (a,) + tuple(gamma), delta, avoid)
        mid = node("AndR.down", MultisetSequent((a, b) + tuple(gamma), tuple(delta) + (f,)),
                   [left, right], principal=("R", f))
        return node("AndL.down", seq, [mid], principal=("L", f))
    if isinstance(f, Disj):
        a, b = f.left, f.right
        left = gid_derivation(a, gamma, tuple(delta) + (b,), avoid)
        right = gid_derivation(b, gamma, tuple(delta) + (a,), avoid)
        mid = node("OrL.down", MultisetSequent((f,) + tuple(gamma), tuple(delta) + (a, b)),
                   [left, right], principal=("L", f))
        return node("OrR.down", seq, [mid], principal=("R", f))
    used = set(avoid) | all_vars(seq)
    y = fresh_var(f.var, used)
    inst = instance(f, Var(y))
    inner = gid_derivation(inst, gamma, delta, used | {y})
    if isinstance(f, Forall):
        mid = node("AllLI", MultisetSequent((f,) + tuple(gamma), tuple(delta) + (inst,)),
                   [inner], principal=("L", f), term=Var(y))
        return node("AllRI", seq, [mid], principal=("R", f), eigen=y)
    mid = node("ExRI", MultisetSequent((inst,) + tuple(gamma), tuple(delta) + (f,)),
               [inner], principal=("R", f), term=Var(y))
    return node("ExLI", seq, [mid], principal=("L", f), eigen=y)


def _gid_split(d: Derivation):
    seq = d.sequent
    if d.principal is not None:
        f = d.principal[1]
    else:
        common = sorted(set(seq.left) & set(seq.right), key=show)
        atoms = [g for g in common if isinstance(g, Atom)]
        f = (atoms or common)[0]
    gamma = list(seq.left)
    gamma.remove(f)
    delta = list(seq.right)
    delta.remove(f)
    return f, tuple(gamma), tuple(delta)


def expand_atomic_gid(d: Derivation) -> Derivation:
    """Replace every non-atomic GID instance by its expansion."""
    avoid = all_variables(d)

    def go(n):
        if n.rule == "GID":
            if is_atomic_gid(n):
                return n
            f, gamma, delta = _gid_split(n)
            return gid_derivation(f, gamma, delta, avoid)
        return n.with_children([go(c) for c in n.children])

    return go(d)


# ---------------------------------------------------------------- weakening

def weaken_derivation(d: Derivation, extra_left=(), extra_right=()) -> Derivation:
    """Add ``extra_left |- extra_right`` to every sequent of an MQST derivation.

    Identity leaves absorb the extra formulas.  Eigenvariables clashing with the
    extras are renamed first.  Assumption leaves are weakened too, so the open
    premises of the result are the weakenings of the original ones.
    """
    extra_left, extra_right = tuple(extra_left), tuple(extra_right)
    if not extra_left and not extra_right:
        return d
    extra_vars = set().union(*(free_vars(f) for f in extra_left + extra_right))
    avoid = all_variables(d) | set().union(*(all_vars(f) for f in extra_left + extra_right))
    d = freshen_eigenvariables(d, avoid, only=extra_vars)

    def go(n):
        seq = type(n.sequent)(n.sequent.left + extra_left, n.sequent.right + extra_right)
        return replace(n, sequent=seq, children=tuple(go(c) for c in n.children))

    return go(d)


def weaken_set_derivation(d: Derivation, extra_left=(), extra_right=()) -> Derivation:
    """Set-flavored weakening for calculi with primitive WL/WR (no eigenvariables).

    Identity axioms and assumption leaves are prefaced with WL/WR steps, so
    the open premises stay exactly the same.
    """
    extra_left, extra_right = tuple(extra_left), tuple(extra_right)

    def go(n):
        if _is_marked(n):
            return replace(n, sequent=SetSequent(n.sequent.left + extra_left,
                                                 n.sequent.right + extra_right))
        if n.rule in ("ID",) + LEAVES:
            return weakening_chain(n, extra_left, extra_right)
        seq = SetSequent(n.sequent.left + extra_left, n.sequent.right + extra_right)
        return replace(n, sequent=seq, children=tuple(go(c) for c in n.children))

    return go(d)


def weakening_chain(d: Derivation, extra_left, extra_right) -> Derivation:
    cur = d
    for f in sorted(set(extra_left) - set(cur.sequent.left), key=show):
        cur = node("WL", SetSequent(cur.sequent.left + (f,), cur.sequent.right), [cur],
                   principal=("L", f))
    for f in sorted(set(extra_right) - set(cur.sequent.right), key=show):
        cur = node("WR", SetSequent(cur.sequent.left, cur.sequent.right + (f,)), [cur],
                   principal=("R", f))
    return cur


# ---------------------------------------------------------------- substitution

def substitute_in_derivation(d: Derivation, x: str, t) -> Derivation:
    """Derivation of S[x:=t] from X[x:=t]; clashing eigenvariables are renamed first."""
    if x not in all_variables(d):
        return d
    clash = set(free_vars(t)) | {x}
    d = freshen_eigenvariables(d, all_vars(t) | {x}, only=clash)
    return map_formulas(d, lambda f: substitute(f, x, t))


# ---------------------------------------------------------------- combination

def _is_leaf_for(seq):
    return lambda n: n.rule == "Assumption" and n.sequent == seq


def join_derivations(d1: Derivation, d2: Derivation, s1, s2, calculus: str) -> Derivation:
    """From derivations of S using S1 and using S2, derive S from S1 joined with S2."""
    if d1.sequent != d2.sequent:
        raise ValueError("the two derivations must have the same conclusion")
    goal = d1.sequent
    if calculus == "sth":
        return _join_sets(d1, d2, s1, s2, goal)
    if calculus != "mqst":
        raise ValueError("join_derivations supports sth and mqst")
    avoid = all_variables(d1) | all_vars(s1) | all_vars(s2)
    d2 = freshen_eigenvariables(d2, avoid)
    d1w = weaken_derivation(d1, s2.left, s2.right)
    d2w = weaken_derivation(d2, goal.left, goal.right)
    d1w = relabel_binders(d1w, labels(d2w))
    joined = MultisetSequent(s2.left + goal.left, s2.right + goal.right)
    body = replace_leaves(d2w, _is_leaf_for(joined), lambda n: d1w)
    return contract_to(body, goal)


def contract_to(d: Derivation, goal) -> Derivation:
    """Contract duplicated formulas of ``d``'s conclusion down to ``goal``."""
    cur = d
    for side in ("L", "R"):
        have = list(cur.sequent.left if side == "L" else cur.sequent.right)
        want = list(goal.left if side == "L" else goal.right)
        for f in sorted(set(have), key=show):
            while have.count(f) > max(want.count(f), 1):
                have.remove(f)
                seq = (MultisetSequent(tuple(have), cur.sequent.right) if side == "L"
                       else MultisetSequent(cur.sequent.left, tuple(have)))
                cur = node("CL" if side == "L" else "CR", seq, [cur], principal=(side, f))
    return cur


def _join_sets(d1, d2, s1, s2, goal):
    d1w = weaken_set_derivation(_mark(d1, s1), s2.left, s2.right)
    d1w = replace_leaves(d1w, _is_marked, lambda n: replace(n, label="S1+S2"))
    d2w = weaken_set_derivation(_mark(d2, s2), goal.left, goal.right)
    return replace_leaves(d2w, _is_marked, lambda n: d1w)


_MARK = "__join__"


def _mark(d, s):
    return replace_leaves(d, _is_leaf_for(s), lambda n: replace(n, label=_MARK))


def _is_marked(n):
    return n.rule == "Assumption" and n.label == _MARK


# ---------------------------------------------------------------- formula translation

def tau_interderive(s, calculus: str, sig: Signature | None = None) -> DerivationPair:
    """Derivations of |- tau(S) from S and of S from |- tau(S)."""
    if not s.left and not s.right:
        raise ValueError("the empty sequent is not interderivable with its translation "
                         "(the contradiction phi0 /\\ ~phi0 is tolerantly satisfiable)")
    cls = MultisetSequent if calculus == "mqst" else SetSequent
    s = cls(s.left, s.right)
    stages = _tau_stages(s, cls)
    fwd = Derivation("Assumption", s, label="S")
    for seq, prin, base in stages:
        fwd = node(f"{base}.down", seq, [fwd], principal=("R", prin))
    bwd = Derivation("Assumption", cls((), (tau(s, sig),)), label="T")
    before = [s] + [seq for seq, _, _ in stages[:-1]]
    for (_, prin, base), prev in zip(reversed(stages), reversed(before)):
        bwd = node(f"{base}.up", prev, [bwd], principal=("R", prin))
    return DerivationPair(fwd, bwd)


def _tau_stages(s, cls):
    """Sequent after each forward step, with its principal formula and rule."""
    out = []
    left, right, negs = list(s.left), list(s.right), []
    for g in s.left:
        left.remove(g)
        negs.append(Neg(g))
        out.append((cls(tuple(left), tuple(negs) + tuple(right)), Neg(g), "NegR"))
    items = negs + right
    acc = items[0]
    for k in range(1, len(items)):
        acc = Disj(acc, items[k])
        out.append((cls((), (acc,) + tuple(items[k + 1:])), acc, "OrR"))
    return out


def bundle_interderive(formulas, calculus="mqst") -> DerivationPair:
    """The sequents |- f_i are interderivable with |- f_1 /\\ ... /\\ f_n.

    ``forward`` derives the conjunction from the assumptions; ``backward`` is a
    tuple with one derivation of each |- f_i from the conjunction.
    """
    cls = MultisetSequent if calculus == "mqst" else SetSequent
    fs = list(formulas)
    leaves = [Derivation("Assumption", cls((), (f,)), label=f"B{i + 1}") for i, f in enumerate(fs)]
    acc_f, acc_d = fs[0], leaves[0]
    for f, lf in zip(fs[1:], leaves[1:]):
        acc_f = Conj(acc_f, f)
        acc_d = node("AndR.down", cls((), (acc_f,)), [acc_d, lf], principal=("R", acc_f))
    whole = big_conj(fs)
    back = []
    for i in range(len(fs)):
        cur = Derivation("Assumption", cls((), (whole,)), label="B")
        f = whole
        # peel the left-associated conjunction down to member i
        for k in range(len(fs) - 1, 0, -1):
            if i == k:
                cur = node("AndR.up", cls((), (f.right,)), [cur], principal=("R", f), select=2)
                break
            cur = node("AndR.up", cls((), (f.left,)), [cur], principal=("R", f), select=1)
            f = f.left
        back.append(cur)
    return DerivationPair(acc_d, tuple(back))


# ---------------------------------------------------------------- alpha renaming in ST^H

def alpha_interderive_sth(s, s2) -> DerivationPair:
    """Derivations between set sequents whose formulas agree up to bound renaming."""
    pairs_l = _pair_up(s.left, s2.left)
    pairs_r = _pair_up(s.right, s2.right)
    return DerivationPair(_alpha_chain(s, pairs_l, pairs_r, False),
                          _alpha_chain(s2, pairs_l, pairs_r, True))


def _pair_up(xs, ys):
    ys = list(ys)
    out = []
    for f in xs:
        for g in ys:
            if alpha_equivalent(f, g):
                out.append((f, g))
                ys.remove(g)
                break
        else:
            raise ValueError(f"{show(f)} has no alpha-equivalent partner")
    if ys:
        raise ValueError("sequents differ in more than bound-variable names")
    return out


def _alpha_chain(start, pairs_l, pairs_r, reverse):
    d = Derivation("Assumption", start, label="S")
    cur_l = [b if reverse else a for a, b in pairs_l]
    cur_r = [b if reverse else a for a, b in pairs_r]
    for side, pairs, cur in (("L", pairs_l, cur_l), ("R", pairs_r, cur_r)):
        for i, (a, b) in enumerate(pairs):
            src, dst = (b, a) if reverse else (a, b)
            if src == dst:
                continue
            others_l = [f for j, f in enumerate(cur_l) if not (side == "L" and j == i)]
            others_r = [f for j, f in enumerate(cur_r) if not (side == "R" and j == i)]
            d = _alpha_step(d, others_l, others_r, side, src, dst)
            cur[i] = dst
    return d


def _seq(ctx_l, ctx_r, side, fs):
    if side == "L":
        return SetSequent(tuple(ctx_l) + tuple(fs), tuple(ctx_r))
    return SetSequent(tuple(ctx_l), tuple(ctx_r) + tuple(fs))


def _alpha_step(d, cl, cr, side, f, g):
    """Extend ``d`` (concluding ctx + f on ``side``) to conclude ctx + g."""
    if f == g:
        return d
    if isinstance(f, Neg):
        other = "R" if side == "L" else "L"
        base = "NegL" if side == "L" else "NegR"
        up = node(f"{base}.up", _seq(cl, cr, other, [f.sub]), [d], principal=(side, f))
        mid = _alpha_step(up, cl, cr, other, f.sub, g.sub)
        return node(f"{base}.down", _seq(cl, cr, side, [g]), [mid], principal=(side, g))
    if isinstance(f, (Conj, Disj)):
        split = (side == "L") == isinstance(f, Conj)
        base = ("And" if isinstance(f, Conj) else "Or") + side
        if split:
            # one premise holding both components
            up = node(f"{base}.up", _seq(cl, cr, side, [f.left, f.right]), [d], principal=(side, f))
            cl2, cr2 = (cl + [f.right], cr) if side == "L" else (cl, cr + [f.right])
            mid = _alpha_step(up, cl2, cr2, side, f.left, g.left)
            cl3, cr3 = (cl + [g.left], cr) if side == "L" else (cl, cr + [g.left])
            mid = _alpha_step(mid, cl3, cr3, side, f.right, g.right)
            return node(f"{base}.down", _seq(cl, cr, side, [g]), [mid], principal=(side, g))
        parts = []
        for sel, (fa, ga) in ((1, (f.left, g.left)), (2, (f.right, g.right))):
            up = node(f"{base}.up", _seq(cl, cr, side, [fa]), [d], principal=(side, f), select=sel)
            parts.append(_alpha_step(up, cl, cr, side, fa, ga))
        return node(f"{base}.down", _seq(cl, cr, side, [g]), parts, principal=(side, g))
    # quantifiers
    letter = "All" if isinstance(f, Forall) else "Ex"
    wf = witness_for(f)
    inst_f = instance(f, wf)
    up = node(f"{letter}{side}W.up", _seq(cl, cr, side, [inst_f]), [d], principal=(side, f))
    wg = witness_for(g)
    if (isinstance(f, Exists) and side == "R") or (isinstance(f, Forall) and side == "L"):
        # rename the body while keeping the old witness, then introduce the new one
        target = instance(g, wf)
        mid = _alpha_step(up, cl, cr, side, inst_f, target)
        intro = "EWI" if side == "R" else "UWI"
        mid = node(intro, _seq(cl, cr, side, [instance(g, wg)]), [mid],
                   principal=(side, g), term=wf)
    else:
        # eliminate the old witness in favor of the new one, then rename the body
        elim = "UWE" if side == "R" else "EWE"
        swapped = instance(f, wg)
        mid = node(elim, _seq(cl, cr, side, [swapped]), [up], principal=(side, f), term=wg)
        mid = _alpha_step(mid, cl, cr, side, swapped, instance(g, wg))
    return node(f"{letter}{side}W.down", _seq(cl, cr, side, [g]), [mid], principal=(side, g))


# ---------------------------------------------------------------- derived eliminations

def _id(f):
    return node("ID", SetSequent((f,), (f,)))


def _cut(left, right, f, seq):
    return node("CUT", seq, [left, right], principal=("R", f))


def _set_minus(side, fs):
    out = set(side)
    for f in fs:
        out.discard(f)
    return tuple(out)


def derived_elim_sthc(rule: str, premise, principal, term=None, select=None,
                      label="P") -> Derivation:
    """ST^HC derivation of an ST^H elimination's conclusion from its premise."""
    side, f = principal
    hyp = Derivation("Assumption", premise, label=label)
    L, R = premise.left, premise.right
    if rule == "UWE":
        w, t = instance(f, witness_for(f)), instance(f, term)
        right = node("UWI", SetSequent((w,), (t,)), [_id(t)], principal=("L", Forall(f.var, f.body)),
                     term=term)
        return _cut(hyp, right, w, SetSequent(L, _set_minus(R, [w]) + (t,)))
    if rule == "EWE":
        w, t = instance(f, witness_for(f)), instance(f, term)
        left = node("EWI", SetSequent((t,), (w,)), [_id(t)], principal=("R", f), term=term)
        return _cut(left, hyp, w, SetSequent(_set_minus(L, [w]) + (t,), R))
    base = rule.split(".")[0]
    if base == "AndL":
        a, b = f.left, f.right
        la = node("WL", SetSequent((a, b), (a,)), [_id(a)], principal=("L", b))
        lb = node("WL", SetSequent((a, b), (b,)), [_id(b)], principal=("L", a))
        left = node("AndR.down", SetSequent((a, b), (f,)), [la, lb], principal=("R", f))
        return _cut(left, hyp, f, SetSequent(_set_minus(L, [f]) + (a, b), R))
    if base == "AndR":
        part = f.left if select == 1 else f.right
        other = f.right if select == 1 else f.left
        w = node("WL", SetSequent((part, other), (part,)), [_id(part)], principal=("L", other))
        right = node("AndL.down", SetSequent((f,), (part,)), [w], principal=("L", f))
        return _cut(hyp, right, f, SetSequent(L, _set_minus(R, [f]) + (part,)))
    if base == "OrL":
        part = f.left if select == 1 else f.right
        other = f.right if select == 1 else f.left
        w = node("WR", SetSequent((part,), (part, other)), [_id(part)], principal=("R", other))
        left = node("OrR.down", SetSequent((part,), (f,)), [w], principal=("R", f))
        return _cut(left, hyp, f, SetSequent(_set_minus(L, [f]) + (part,), R))
    if base == "OrR":
        a, b = f.left, f.right
        wa = node("WR", SetSequent((a,), (a, b)), [_id(a)], principal=("R", b))
        wb = node("WR", SetSequent((b,), (a, b)), [_id(b)], principal=("R", a))
        right = node("OrL.down", SetSequent((f,), (a, b)), [wa, wb], principal=("L", f))
        return _cut(hyp, right, f, SetSequent(L, _set_minus(R, [f]) + (a, b)))
    if base == "NegL":
        a = f.sub
        left = node("NegR.down", SetSequent((), (a, f)), [_id(a)], principal=("R", f))
        return _cut(left, hyp, f, SetSequent(_set_minus(L, [f]), R + (a,)))
    if base == "NegR":
        a = f.sub
        right = node("NegL.down", SetSequent((f, a), ()), [_id(a)], principal=("L", f))
        return _cut(hyp, right, f, SetSequent(L + (a,), _set_minus(R, [f])))
    if base in ("AllLW", "AllRW", "ExLW", "ExRW"):
        inst = instance(f, witness_for(f))
        if side == "L":
            left = node(f"{base[:-2]}RW.down", SetSequent((inst,), (f,)), [_id(inst)],
                        principal=("R", f))
            return _cut(left, hyp, f, SetSequent(_set_minus(L, [f]) + (inst,), R))
        right = node(f"{base[:-2]}LW.down", SetSequent((f,), (inst,)), [_id(inst)],
                     principal=("L", f))
        return _cut(hyp, right, f, SetSequent(L, _set_minus(R, [f]) + (inst,)))
    raise ValueError(f"{rule} is not an ST^H elimination rule")


STH_ELIMS = frozenset(("UWE", "EWE") + tuple(f"{r}.up" for r in
                      ("NegL", "NegR", "AndL", "AndR", "OrL", "OrR", "AllLW", "AllRW", "ExLW", "ExRW")))


def embed_sth(d: Derivation) -> Derivation:
    """Turn an ST^H derivation into an ST^HC one by expanding every elimination."""
    kids = [embed_sth(c) for c in d.children]
    d = d.with_children(kids)
    if d.rule not in STH_ELIMS:
        return d
    macro = derived_elim_sthc(d.rule, kids[0].sequent, d.principal, d.term, d.select,
                              label="__elim__")
    macro = _retarget(macro, d.sequent)
    return replace_leaves(macro, lambda n: n.label == "__elim__", lambda n: kids[0])


def _retarget(macro, seq):
    """Use the original conclusion (sets may keep a principal formula in the context)."""
    return replace(macro, sequent=seq)


# ---------------------------------------------------------------- epsilon translations

def derivation_to_epsilon(d: Derivation) -> Derivation:
    """ST^HC derivation of S from X  ->  E derivation of S^E from X^E."""
    r = d.rule
    seq = to_epsilon(d.sequent)
    if r in ("ID",) + LEAVES:
        return replace(d, sequent=seq)
    kids = [derivation_to_epsilon(c) for c in d.children]
    if r.startswith("WEXCH"):
        return kids[0]
    prin = None if d.principal is None else (d.principal[0], to_epsilon(d.principal[1]))
    if r == "EWI":
        q = prin[1]
        t = to_epsilon(d.term)
        ex = node("ExReps", _with(kids[0].sequent, "R", instance(q, t), q), [kids[0]],
                  principal=("R", q), term=t)
        e_inst = instance(q, witness_eps(q))
        ax = node("ExLeps", SetSequent((q,), (e_inst,)), [_id(e_inst)], principal=("L", q))
        return _cut(ex, ax, q, seq)
    if r == "UWI":
        q = prin[1]
        t = to_epsilon(d.term)
        al = node("AllLeps", _with(kids[0].sequent, "L", instance(q, t), q), [kids[0]],
                  principal=("L", q), term=t)
        e_inst = instance(q, witness_eps(q))
        ax = node("AllReps", SetSequent((e_inst,), (q,)), [_id(e_inst)], principal=("R", q))
        return _cut(ax, al, q, seq)
    rename = {"ExLW.down": "ExLeps", "ExRW.down": "ExReps",
              "AllLW.down": "AllLeps", "AllRW.down": "AllReps"}
    if r in rename:
        q = prin[1]
        term = None
        if r == "ExRW.down" or r == "AllLW.down":
            term = witness_eps(q)
        return node(rename[r], seq, kids, principal=prin, term=term)
    return replace(d, sequent=seq, children=tuple(kids), principal=prin,
                   term=None if d.term is None else to_epsilon(d.term))


def witness_eps(q):
    """The epsilon term playing the role of the witness of ``q``."""
    from .syntax import Eps
    return Eps(q.var, q.body) if isinstance(q, Exists) else Eps(q.var, Neg(q.body))


def _with(seq, side, old, new):
    """Replace ``old`` by ``new`` on one side of a set sequent."""
    if side == "L":
        return SetSequent(_set_minus(seq.left, [old]) + (new,), seq.right)
    return SetSequent(seq.left, _set_minus(seq.right, [old]) + (new,))


def derivation_to_sthc(d: Derivation) -> Derivation:
    """E derivation of S from X  ->  ST^HC derivation of S^W from X^W."""
    r = d.rule
    seq = to_henkin(d.sequent)
    if r in ("ID",) + LEAVES:
        return replace(d, sequent=seq)
    kids = [derivation_to_sthc(c) for c in d.children]
    prin = None if d.principal is None else (d.principal[0], to_henkin(d.principal[1]))
    term = None if d.term is None else to_henkin(d.term)
    if r == "ExReps":
        q = prin[1]
        mid = node("EWI", _with(kids[0].sequent, "R", instance(q, term), instance(q, witness_for(q))),
                   kids, principal=("R", q), term=term)
        return node("ExRW.down", seq, [mid], principal=("R", q))
    if r == "ExLeps":
        return node("ExLW.down", seq, kids, principal=prin)
    if r == "AllLeps":
        q = prin[1]
        mid = node("UWI", _with(kids[0].sequent, "L", instance(q, term), instance(q, witness_for(q))),
                   kids, principal=("L", q), term=term)
        return node("AllLW.down", seq, [mid], principal=("L", q))
    if r == "AllReps":
        q = prin[1]
        w = UWitness(q.var, q.body)
        hole = fresh_var("h", all_vars(q) | all_variables(d))
        ctx = substitute(q.body, q.var, Var(hole))
        dual_inst = instance(q, EWitness(q.var, Neg(q.body)))
        mid = node("WEXCHR.up", _with(kids[0].sequent, "R", dual_inst, instance(q, w)), kids,
                   principal=("R", ctx), eigen=hole, term=w)
        return node("AllRW.down", seq, [mid], principal=("R", q))
    return replace(d, sequent=seq, children=tuple(kids), principal=prin, term=term)


def universal_witnesses(f) -> list:
    return sorted((w for w in witnesses(f) if isinstance(w, UWitness)), key=show)


def _outermost_universal(f):
    ws = universal_witnesses(f)
    inner = set()
    for w in witnesses(f):
        if not isinstance(w, UWitness):
            continue
        for v in witnesses(w.body):
            inner.add(v)
    outer = [w for w in ws if w not in inner]
    return outer[0] if outer else None


def ew_roundtrip(phi) -> DerivationPair:
    """ST^HC derivations of phi |- phi^EW and phi^EW |- phi."""
    target = to_henkin(to_epsilon(phi))
    w = _outermost_universal(phi)
    if w is None:
        if phi != target:
            raise AssertionError("formula without universal witnesses must be its own image")
        return DerivationPair(_id(phi), _id(phi))
    hole = fresh_var("h", all_vars(phi))
    ctx = replace_term(phi, w, Var(hole))
    dual = EWitness(w.var, Neg(w.body))
    phi1 = substitute(ctx, hole, dual)
    inner = ew_roundtrip(phi1)
    step = node("WEXCHR.down", SetSequent((phi,), (phi1,)), [_id(phi)],
                principal=("R", ctx), eigen=hole, term=w)
    fwd = _cut(step, inner.forward, phi1, SetSequent((phi,), (target,)))
    back_step = node("WEXCHR.up", SetSequent((phi1,), (phi,)), [_id(phi1)],
                     principal=("R", ctx), eigen=hole, term=w)
    bwd = _cut(inner.backward, back_step, phi1, SetSequent((target,), (phi,)))
    return DerivationPair(fwd, bwd)
