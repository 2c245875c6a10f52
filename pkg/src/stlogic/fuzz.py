"""Random generators for property tests and the acceptance suites.

Derivations are grown forward from leaves, so every output is accepted by
``calculi.check`` by construction (and the tests re-check anyway).
"""
from __future__ import annotations

import itertools
import random

from .calculi import Derivation, instance, open_premises, witness_for
from .syntax import (
    App, Atom, Conj, Disj, EWitness, Exists, Forall, MultisetSequent, Neg, SetSequent,
    UWitness, Var, all_vars, free_vars, fresh_var, replace_term, substitutable, substitute,
)

RELATIONS = ("P", "Q")
FREE = ("u", "v", "w")
BOUND = ("x", "y", "z")


class _Base:
    def __init__(self, seed=0):
        self.rng = random.Random(seed)

    def term(self, extra=()):
        pool = list(FREE[:2]) + list(extra)
        t = Var(self.rng.choice(pool))
        return App("f", (t,)) if self.rng.random() < 0.25 else t

    def atom(self, extra=()):
        return Atom(self.rng.choice(RELATIONS), (self.term(extra),))

    def formula(self, depth=2, bound=()):
        r = self.rng.random()
        if depth <= 0 or r < 0.3:
            return self.atom(bound)
        if r < 0.45:
            return Neg(self.formula(depth - 1, bound))
        if r < 0.6:
            return Conj(self.formula(depth - 1, bound), self.formula(depth - 1, bound))
        if r < 0.75:
            return Disj(self.formula(depth - 1, bound), self.formula(depth - 1, bound))
        free = [x for x in BOUND if x not in bound]
        if not free:
            return self.atom(bound)
        x = free[0]
        body = self.formula(depth - 1, bound + (x,))
        return (Forall if r < 0.88 else Exists)(x, body)


def _bound_name(f):
    return fresh_var("x", all_vars(f) | set(FREE))


class MQSTFuzzer(_Base):
    """Random accepted MQST derivations with detours, sidetracks and contractions."""

    def __init__(self, seed=0, premises=2, detour_rate=0.35, sidetrack_rate=0.2,
                 contraction_rate=0.3, assumption_rate=0.35, premise_depth=1):
        super().__init__(seed)
        self.assumption_rate = assumption_rate
        self.detour_rate = detour_rate
        self.sidetrack_rate = sidetrack_rate
        self.contraction_rate = contraction_rate
        self.pool = []
        for i in range(premises):
            left = tuple(self.formula(premise_depth) for _ in range(self.rng.randint(0, 1)))
            right = tuple(self.formula(premise_depth) for _ in range(self.rng.randint(1, 2)))
            self.pool.append((f"A{i + 1}", MultisetSequent(left, right)))
        self._labels = itertools.count(1)
        self._eigen = itertools.count(1)

    # -- leaves
    def leaf(self, allow_assumption=True):
        if allow_assumption and self.pool and self.rng.random() < self.assumption_rate:
            label, seq = self.rng.choice(self.pool)
            return Derivation("Assumption", seq, label=label)
        prin = self.atom() if self.rng.random() < 0.8 else self.formula(1)
        left = tuple(self.formula(1) for _ in range(self.rng.randint(0, 2)))
        right = tuple(self.formula(1) for _ in range(self.rng.randint(0, 2)))
        if self.rng.random() < self.contraction_rate and left:
            left = left + left[:1]
        if self.rng.random() < self.contraction_rate and right:
            right = right + right[:1]
        return Derivation("GID", MultisetSequent((prin,) + left, right + (prin,)),
                          principal=("R", prin))

    # -- one-premise steps
    def _moves(self, d):
        s = d.sequent
        opens_fv = set().union(*(free_vars(seq) for _, seq in open_premises(d))) if \
            open_premises(d) else set()
        out = []
        for side, fs in (("L", s.left), ("R", s.right)):
            for i, f in enumerate(fs):
                out.append(("neg-in", side, f))
                if isinstance(f, Neg):
                    out.append(("up", "NegL.up" if side == "L" else "NegR.up", side, f, None))
                if isinstance(f, Conj):
                    if side == "L":
                        out.append(("up", "AndL.up", side, f, None))
                    else:
                        out.append(("up", "AndR.up", side, f, self.rng.choice((1, 2))))
                if isinstance(f, Disj):
                    if side == "R":
                        out.append(("up", "OrR.up", side, f, None))
                    else:
                        out.append(("up", "OrL.up", side, f, self.rng.choice((1, 2))))
                if isinstance(f, Exists) and side == "L":
                    out.append(("qelim", "ExLE", side, f))
                if isinstance(f, Forall) and side == "R":
                    out.append(("qelim", "AllRE", side, f))
                out.append(("qintro-term", side, f))
                rest = [g for j, g in enumerate(fs) if j != i] + list(s.right if side == "L" else s.left)
                rest_fv = set().union(*(free_vars(g) for g in rest)) if rest else set()
                for v in sorted(free_vars(f) - rest_fv - opens_fv):
                    out.append(("qintro-eigen", side, f, v))
            if len(fs) >= 2:
                out.append(("pair", side, fs[0], fs[1]))
            for f in set(fs):
                if list(fs).count(f) > 1:
                    out.append(("contract", side, f))
        return out

    def _apply(self, d, move):
        from .calculi import build
        kind = move[0]
        if kind == "neg-in":
            _, side, f = move
            rule = "NegR.down" if side == "L" else "NegL.down"
            return build(rule, [d], principal=("R" if side == "L" else "L", Neg(f)))
        if kind == "up":
            _, rule, side, f, sel = move
            return build(rule, [d], principal=(side, f), select=sel)
        if kind == "pair":
            _, side, a, b = move
            if side == "L":
                return build("AndL.down", [d], principal=("L", Conj(a, b)))
            return build("OrR.down", [d], principal=("R", Disj(a, b)))
        if kind == "contract":
            _, side, f = move
            return build("CL" if side == "L" else "CR", [d], principal=(side, f))
        if kind == "qelim":
            _, rule, side, q = move
            t = self.term()
            if not substitutable(q.body, q.var, t):
                return None
            return build(rule, [d], principal=(side, q), term=t)
        if kind == "qintro-term":
            _, side, f = move
            fv = sorted(free_vars(f))
            x = _bound_name(f)
            if fv and self.rng.random() < 0.8:
                v = self.rng.choice(fv)
                body, t = substitute(f, v, Var(x)), Var(v)
            else:
                body, t = f, self.term()
            q = (Exists if side == "R" else Forall)(x, body)
            return build("ExRI" if side == "R" else "AllLI", [d], principal=(side, q), term=t)
        if kind == "qintro-eigen":
            _, side, f, v = move
            x = _bound_name(f)
            q = (Forall if side == "R" else Exists)(x, substitute(f, v, Var(x)))
            return build("AllRI" if side == "R" else "ExLI", [d], principal=(side, q), eigen=v)
        raise ValueError(kind)

    def _detour(self, d):
        """Immediately eliminate what the last introduction produced."""
        from .calculi import build
        r, prin = d.rule, d.principal
        if r in ("NegL.down", "NegR.down", "AndL.down", "OrR.down"):
            return build(r.replace("down", "up"), [d], principal=prin)
        if r in ("AndR.down", "OrL.down"):
            return build(r.replace("down", "up"), [d], principal=prin, select=self.rng.choice((1, 2)))
        if r in ("AllRI", "ExLI"):
            q = prin[1]
            t = self.term()
            if not substitutable(q.body, q.var, t):
                return d
            return build("AllRE" if r == "AllRI" else "ExLE", [d], principal=prin, term=t)
        if r in ("ExRI", "AllLI"):
            return self.sidetrack(d, prin) or d
        return d

    def step(self, d):
        moves = self._moves(d)
        self.rng.shuffle(moves)
        dup = [m for m in moves if m[0] == "contract"]
        if dup and self.rng.random() < self.contraction_rate:
            return self._apply(d, dup[0])
        for m in [m for m in moves if m[0] != "contract"][:6]:
            new = self._apply(d, m)
            if new is not None:
                return new
        return d

    def two_premise(self, d):
        """AndR / OrL against an identity partner sharing the context."""
        s = d.sequent
        side = self.rng.choice(("L", "R"))
        fs = s.right if side == "R" else s.left
        if not fs:
            return d
        a = self.rng.choice(fs)
        rest_l, rest_r = list(s.left), list(s.right)
        (rest_r if side == "R" else rest_l).remove(a)
        if side == "R" and rest_l:
            b = self.rng.choice(rest_l)
            partner = Derivation("GID", MultisetSequent(tuple(rest_l), tuple(rest_r) + (b,)),
                                 principal=("R", b))
        elif side == "L" and rest_r:
            b = self.rng.choice(rest_r)
            partner = Derivation("GID", MultisetSequent(tuple(rest_l) + (b,), tuple(rest_r)),
                                 principal=("R", b))
        else:
            b, partner = a, d
        from .calculi import build
        if self.rng.random() < 0.5:
            kids, f = [d, partner], (Conj(a, b) if side == "R" else Disj(a, b))
        else:
            kids, f = [partner, d], (Conj(b, a) if side == "R" else Disj(b, a))
        return build("AndR.down" if side == "R" else "OrL.down", kids, principal=(side, f))

    def sidetrack(self, major, prin=None):
        """ExRE / AllLE on ``major`` with a minor derivation grown from the hypothesis."""
        s = major.sequent
        if prin is None:
            cands = [("R", f) for f in s.right if isinstance(f, Exists)] + \
                    [("L", f) for f in s.left if isinstance(f, Forall)]
            if not cands:
                return None
            prin = self.rng.choice(cands)
        side, q = prin
        avoid = all_vars(s) | set(FREE) | set(BOUND)
        for _, seq in open_premises(major):
            avoid |= all_vars(seq)
        y = fresh_var(f"e{next(self._eigen)}", avoid)
        inst = instance(q, Var(y))
        left, right = list(s.left), list(s.right)
        (right if side == "R" else left).remove(q)
        (right if side == "R" else left).append(inst)
        label = f"h{next(self._labels)}"
        hyp = Derivation("Discharged", MultisetSequent(tuple(left), tuple(right)), label=label)
        if self.rng.random() < 0.1:
            minor = self.grow(self.leaf(), 2)  # discharges nothing
        else:
            minor = hyp
            for _ in range(self.rng.randint(0, 2)):
                minor = self.step(minor)
            minor = self._close_over(minor, y)
            if minor is None:
                return None
        if y in free_vars(minor.sequent):
            return None
        if any(y in free_vars(seq) for lab, seq in open_premises(minor) if lab != label):
            return None
        return Derivation("ExRE" if side == "R" else "AllLE", minor.sequent, (major, minor),
                          principal=prin, eigen=y, binds=label)

    def _close_over(self, d, y):
        """Quantify ``y`` away from the conclusion of ``d`` using term introductions."""
        from .calculi import build
        for _ in range(8):
            s = d.sequent
            hit = [("R", f) for f in s.right if y in free_vars(f)] + \
                  [("L", f) for f in s.left if y in free_vars(f)]
            if not hit:
                return d
            side, f = hit[0]
            x = _bound_name(f)
            q = (Exists if side == "R" else Forall)(x, substitute(f, y, Var(x)))
            d = build("ExRI" if side == "R" else "AllLI", [d], principal=(side, q), term=Var(y))
        return None

    def grow(self, d, steps):
        for _ in range(steps):
            r = self.rng.random()
            if r < self.sidetrack_rate:
                new = self.sidetrack(d)
                d = new if new is not None else self.step(d)
            elif r < self.sidetrack_rate + 0.15:
                d = self.two_premise(d)
            else:
                d = self.step(d)
            if d.rule not in ("GID", "Assumption") and self.rng.random() < self.detour_rate:
                d = self._detour(d)
        return d

    def derivation(self, steps=None):
        steps = self.rng.randint(2, 7) if steps is None else steps
        return self.grow(self.leaf(), steps)


# ---------------------------------------------------------------- ST^HC

class STHCFuzzer(_Base):
    """Random accepted ST^HC derivations using witness, exchange and cut rules."""

    def henkin_formula(self, max_universal=2):
        """Quantifier-light formula with closed witness terms as arguments."""
        count = [0]

        def wterm():
            body = Atom(self.rng.choice(RELATIONS), (Var("x"),))
            if self.rng.random() < 0.3:
                body = Neg(body)
            if self.rng.random() < 0.25:
                inner = wterm()
                body = Conj(body, Atom(self.rng.choice(RELATIONS), (inner,)))
            if count[0] < max_universal and self.rng.random() < 0.5:
                count[0] += 1
                return UWitness("x", body)
            return EWitness("x", body)

        def go(depth):
            r = self.rng.random()
            if depth <= 0 or r < 0.35:
                arg = wterm() if self.rng.random() < 0.6 else Var(self.rng.choice(FREE[:2]))
                return Atom(self.rng.choice(RELATIONS), (arg,))
            if r < 0.5:
                return Neg(go(depth - 1))
            if r < 0.7:
                return Conj(go(depth - 1), go(depth - 1))
            if r < 0.85:
                return Disj(go(depth - 1), go(depth - 1))
            return Exists("y", Disj(Atom("P", (Var("y"),)), go(depth - 1)))

        return go(2)

    def leaf(self):
        r = self.rng.random()
        q = (Forall if self.rng.random() < 0.5 else Exists)("x", self.formula(1, ("x",)))
        if r < 0.3:
            f = instance(q, witness_for(q))
        elif r < 0.45 and isinstance(q, Forall):
            f = instance(q, EWitness(q.var, Neg(q.body)))
        elif r < 0.65:
            f = self.henkin_formula(1)
        else:
            f = self.formula(1)
        return Derivation("ID", SetSequent((f,), (f,)))

    def _moves(self, d):
        s = d.sequent
        out = []
        for side, fs in (("L", s.left), ("R", s.right)):
            for f in fs:
                out.append(("neg", side, f))
                out.append(("witness-in", side, f))
                out.append(("w-down", side, f))
                out.append(("exchange", side, f))
            if len(fs) >= 2:
                out.append(("pair", side, fs[0], fs[1]))
        out.append(("weaken",))
        out.append(("cut",))
        out.append(("two",))
        return out

    def _apply(self, d, m):
        from .calculi import build
        s = d.sequent
        k = m[0]
        if k == "neg":
            _, side, f = m
            return build("NegR.down" if side == "L" else "NegL.down", [d],
                         principal=("R" if side == "L" else "L", Neg(f)))
        if k == "pair":
            _, side, a, b = m
            if side == "L":
                return build("AndL.down", [d], principal=("L", Conj(a, b)))
            return build("OrR.down", [d], principal=("R", Disj(a, b)))
        if k == "weaken":
            side = self.rng.choice(("L", "R"))
            return build("WL" if side == "L" else "WR", [d], principal=(side, self.formula(1)))
        if k == "witness-in":
            _, side, f = m
            fv = sorted(free_vars(f))
            x = _bound_name(f)
            if fv and self.rng.random() < 0.7:
                v = self.rng.choice(fv)
                body, t = substitute(f, v, Var(x)), Var(v)
            else:
                body, t = f, self.term()
            q = (Exists if side == "R" else Forall)(x, body)
            return build("EWI" if side == "R" else "UWI", [d], principal=(side, q), term=t)
        if k == "w-down":
            _, side, f = m
            q = _recover_quantifier(f)
            if q is None:
                return None
            kind, qf = q
            letter = "All" if isinstance(qf, Forall) else "Ex"
            if kind == "dual":
                if side != "R" or not isinstance(qf, Forall):
                    return None
                hole = fresh_var("h", all_vars(qf))
                ctx = substitute(qf.body, qf.var, Var(hole))
                d = build("WEXCHR.up", [d], principal=("R", ctx), eigen=hole,
                          term=UWitness(qf.var, qf.body))
            return build(f"{letter}{side}W.down", [d], principal=(side, qf))
        if k == "exchange":
            _, side, f = m
            ws = sorted((w for w in _closed_witnesses(f) if isinstance(w, UWitness)), key=repr)
            if not ws:
                return None
            w = ws[0]
            hole = fresh_var("h", all_vars(f))
            ctx = replace_term(f, w, Var(hole))
            return build(f"WEXCH{side}.down", [d], principal=(side, ctx), eigen=hole, term=w)
        if k == "cut":
            if not s.right:
                return None
            a = self.rng.choice(s.right)
            right = Derivation("ID", SetSequent((a,), (a,)))
            if self.rng.random() < 0.5:
                right = build("WR", [right], principal=("R", self.formula(1)))
            return build("CUT", [d, right], principal=("R", a))
        if k == "two":
            if not s.right:
                return None
            a = self.rng.choice(s.right)
            other = self.grow(self.leaf(), 1)
            # weaken the partner to share d's context
            for g in s.left:
                if g not in other.sequent.left:
                    other = build("WL", [other], principal=("L", g))
            for g in s.right:
                if g not in other.sequent.right and g != a:
                    other = build("WR", [other], principal=("R", g))
            if not other.sequent.right:
                return None
            b = self.rng.choice(other.sequent.right)
            for g in other.sequent.left:
                if g not in d.sequent.left:
                    d = build("WL", [d], principal=("L", g))
            for g in other.sequent.right:
                if g not in d.sequent.right and g != b:
                    d = build("WR", [d], principal=("R", g))
            f = Conj(a, b)
            try:
                return build("AndR.down", [d, other], principal=("R", f))
            except ValueError:
                return None
        raise ValueError(k)

    def grow(self, d, steps):
        for _ in range(steps):
            moves = self._moves(d)
            self.rng.shuffle(moves)
            for m in moves[:8]:
                try:
                    new = self._apply(d, m)
                except ValueError:
                    new = None
                if new is not None:
                    d = new
                    break
        return d

    def derivation(self, steps=None):
        steps = self.rng.randint(2, 6) if steps is None else steps
        d = self.grow(self.leaf(), steps)
        if self.rng.random() < 0.2:
            d = _with_assumption(d)
        return d


def _with_assumption(d):
    """Turn the leftmost identity leaf into an open assumption."""
    if d.rule == "ID":
        return Derivation("Assumption", d.sequent, label="A1")
    if not d.children:
        return d
    return d.with_children([_with_assumption(d.children[0])] + list(d.children[1:]))


def _closed_witnesses(f):
    from .syntax import witnesses
    return [w for w in witnesses(f) if not free_vars(w)]


def _recover_quantifier(f):
    """If ``f`` is an instance phi[x := witness(Qx phi)], return ("same", Qx phi).

    Also recognises phi[x := wE[x. ~phi]] as ("dual", forall x phi).
    """
    for w in _closed_witnesses(f):
        hole = fresh_var("x", all_vars(f))
        body = replace_term(f, w, Var(hole))
        if isinstance(w, EWitness) and isinstance(w.body, Neg):
            cand = Forall(w.var, w.body.sub)
            if substitute(cand.body, cand.var, w) == f:
                return ("dual", cand)
        cand = (Forall if isinstance(w, UWitness) else Exists)(w.var, w.body)
        if instance(cand, w) == f:
            return ("same", cand)
        del body
    return None


# ---------------------------------------------------------------- propositional

def prop_formulas(atoms, depth):
    """All propositional formulas over ``atoms`` up to ``depth`` (canonical order)."""
    levels = [[Atom(a, ()) for a in atoms]]
    for _ in range(depth):
        prev = [f for lvl in levels for f in lvl]
        seen = set(prev)
        new = []
        for a in prev:
            for g in (Neg(a),):
                if g not in seen:
                    seen.add(g)
                    new.append(g)
        for a, b in itertools.product(prev, repeat=2):
            for g in (Conj(a, b), Disj(a, b)):
                if g not in seen:
                    seen.add(g)
                    new.append(g)
        levels.append(new)
    return [f for lvl in levels for f in lvl]
