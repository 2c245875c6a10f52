"""Derivation trees, the rule catalog of the six calculi, and the checker.

Every rule is described by the formulas it adds to or removes from a shared
context.  The checker verifies each node schema-instance style: it works out
the principal formulas of the conclusion and of every premise from the node's
parameters and then confirms that what is left over is the same context.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator

from .syntax import (
    Atom, CaptureError, Conj, Disj, DialectError, EWitness, Eps, Exists, Forall,
    MultisetSequent, Neg, SetSequent, UWitness, Var, free_vars, multiset_sub,
    show, show_sequent, substitute,
)


class RuleViolation(Exception):
    def __init__(self, path, reason):
        self.path = tuple(path)
        self.reason = reason
        where = "/".join(map(str, self.path)) or "root"
        super().__init__(f"at {where}: {reason}")


@dataclass(frozen=True)
class Derivation:
    rule: str
    sequent: object
    children: tuple = ()
    term: object = None
    eigen: str | None = None
    principal: tuple | None = None  # (side, formula), side in {"L", "R"}
    select: int | None = None
    label: str | None = None
    binds: str | None = None

    def nodes(self) -> Iterator["Derivation"]:
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def at(self, path) -> "Derivation":
        node = self
        for i in path:
            node = node.children[i]
        return node

    def with_children(self, children) -> "Derivation":
        return replace(self, children=tuple(children))


@dataclass
class CheckReport:
    conclusion: object
    open_premises: list
    calculus: str
    node_count: int
    max_depth: int

    def lines(self) -> list:
        out = [f"calculus: {self.calculus}",
               f"conclusion: {show_sequent(self.conclusion)}",
               f"nodes: {self.node_count}",
               f"depth: {self.max_depth}",
               f"open premises: {len(self.open_premises)}"]
        out += [f"  {lab}: {show_sequent(s)}" for lab, s in self.open_premises]
        return out


# ---------------------------------------------------------------- catalog

PROP = ("NegL", "NegR", "AndL", "AndR", "OrL", "OrR")
PROP_DOWN = tuple(f"{r}.down" for r in PROP)
PROP_UP = tuple(f"{r}.up" for r in PROP)
W_RULES = ("AllLW", "AllRW", "ExLW", "ExRW")
W_DOWN = tuple(f"{r}.down" for r in W_RULES)
W_UP = tuple(f"{r}.up" for r in W_RULES)
WEXCH = ("WEXCHL.down", "WEXCHL.up", "WEXCHR.down", "WEXCHR.up")
MQST_QUANT = ("ExLE", "ExRI", "AllLI", "AllRE", "ExLI", "AllRI", "ExRE", "AllLE")
SIDETRACK = ("ExRE", "AllLE")
LEAVES = ("Assumption", "Discharged")

CALCULI = {
    "stp": frozenset(("ID", "WL", "WR") + PROP_DOWN + PROP_UP),
    "stq": frozenset(("ID", "WL", "WR") + PROP_DOWN + ("AllL", "AllR", "ExL", "ExR")),
    "sth": frozenset(("ID", "WL", "WR") + PROP_DOWN + PROP_UP
                     + ("UWI", "EWI", "EWE", "UWE") + W_DOWN + W_UP),
    "sthc": frozenset(("ID", "WL", "WR", "CUT") + PROP_DOWN + ("UWI", "EWI") + W_DOWN + WEXCH),
    "e": frozenset(("ID", "WL", "WR", "CUT") + PROP_DOWN
                   + ("ExLeps", "ExReps", "AllLeps", "AllReps")),
    "mqst": frozenset(("GID", "CL", "CR") + PROP_DOWN + PROP_UP + MQST_QUANT),
}
MULTISET_CALCULI = frozenset(("mqst",))

INTRO_RULES = frozenset(PROP_DOWN + ("ExRI", "AllLI", "ExLI", "AllRI"))
ELIM_RULES = frozenset(PROP_UP + ("ExLE", "AllRE", "ExRE", "AllLE"))

# name -> (side, quantifier class, instance kind, direction)
_QUANT = {
    "AllL": ("L", Forall, "term", "intro"),
    "AllR": ("R", Forall, "eigen", "intro"),
    "ExL": ("L", Exists, "eigen", "intro"),
    "ExR": ("R", Exists, "term", "intro"),
    "AllLW.down": ("L", Forall, "wA", "intro"),
    "AllRW.down": ("R", Forall, "wA", "intro"),
    "ExLW.down": ("L", Exists, "wE", "intro"),
    "ExRW.down": ("R", Exists, "wE", "intro"),
    "AllLW.up": ("L", Forall, "wA", "elim"),
    "AllRW.up": ("R", Forall, "wA", "elim"),
    "ExLW.up": ("L", Exists, "wE", "elim"),
    "ExRW.up": ("R", Exists, "wE", "elim"),
    "ExLeps": ("L", Exists, "epsE", "intro"),
    "ExReps": ("R", Exists, "term", "intro"),
    "AllLeps": ("L", Forall, "term", "intro"),
    "AllReps": ("R", Forall, "epsA", "intro"),
    "ExRI": ("R", Exists, "term", "intro"),
    "AllLI": ("L", Forall, "term", "intro"),
    "ExLI": ("L", Exists, "eigen", "intro"),
    "AllRI": ("R", Forall, "eigen", "intro"),
    "ExLE": ("L", Exists, "term", "elim"),
    "AllRE": ("R", Forall, "term", "elim"),
    "UWI": ("L", Forall, "wA", "witness_in"),
    "EWI": ("R", Exists, "wE", "witness_in"),
    "EWE": ("L", Exists, "wE", "witness_out"),
    "UWE": ("R", Forall, "wA", "witness_out"),
}
EIGEN_RULES = frozenset(("AllR", "ExL", "ExLI", "AllRI", "ExRE", "AllLE"))


def witness_for(q) -> object:
    """The Henkin constant attached to a quantified formula."""
    return (UWitness if isinstance(q, Forall) else EWitness)(q.var, q.body)


def instance(q, t):
    return substitute(q.body, q.var, t)


# ---------------------------------------------------------------- schemas

def _side(L=(), R=()):
    return (tuple(L), tuple(R))


def _on(side, f):
    return _side([f], []) if side == "L" else _side([], [f])


def _need(cond, msg):
    if not cond:
        raise ValueError(msg)


def _principal(node, side=None, cls=None):
    _need(node.principal is not None, "missing principal formula")
    s, f = node.principal
    if side is not None:
        _need(s == side, f"principal must be on side {side}")
    if cls is not None:
        _need(isinstance(f, cls), f"principal must be a {cls.__name__} formula")
    return s, f


def _prop_down(base, node):
    side = "L" if base.endswith("L") else "R"
    cls = {"Neg": Neg, "And": Conj, "Or": Disj}[base[:-1]]
    _, f = _principal(node, side, cls)
    if cls is Neg:
        prems = [_on("R" if side == "L" else "L", f.sub)]
    elif base in ("AndL", "OrR"):
        pair = [f.left, f.right]
        prems = [_side(pair, []) if side == "L" else _side([], pair)]
    else:
        prems = [_on(side, f.left), _on(side, f.right)]
    return _on(side, f), prems


def _inst_term(node, q, kind):
    if kind == "term":
        _need(node.term is not None, "missing term")
        return node.term
    if kind == "eigen":
        _need(node.eigen is not None, "missing eigenvariable")
        return Var(node.eigen)
    if kind in ("wA", "wE"):
        return witness_for(q)
    if kind == "epsE":
        return Eps(q.var, q.body)
    return Eps(q.var, Neg(q.body))


def schema(node):
    """Principal formulas (conclusion, [premises]) of a non-special rule."""
    r = node.rule
    base, _, direction = r.partition(".")
    if base in PROP:
        concl, prems = _prop_down(base, node)
        if direction == "down":
            _need(node.select is None, "select is only meaningful for upward rules")
            return concl, prems
        if len(prems) == 2:
            _need(node.select in (1, 2), "two-premise inverse needs select=1|2")
            return prems[node.select - 1], [concl]
        _need(node.select is None, "select is only meaningful for two-premise inverses")
        return prems[0], [concl]
    if r in _QUANT:
        side, cls, kind, how = _QUANT[r]
        _, q = _principal(node, side, cls)
        inst = _on(side, instance(q, _inst_term(node, q, kind)))
        whole = _on(side, q)
        if how == "intro":
            return whole, [inst]
        if how == "elim":
            return inst, [whole]
        tinst = _on(side, instance(q, _need_term(node)))
        winst = _on(side, instance(q, witness_for(q)))
        return (winst, [tinst]) if how == "witness_in" else (tinst, [winst])
    if base in ("WEXCHL", "WEXCHR"):
        side = base[-1]
        _, ctx = _principal(node, side)
        _need(node.eigen is not None, "missing hole variable")
        _need(isinstance(node.term, UWitness), "exchange term must be a universal witness")
        w = node.term
        dual = EWitness(w.var, Neg(w.body))
        a = _on(side, substitute(ctx, node.eigen, w))
        e = _on(side, substitute(ctx, node.eigen, dual))
        return (e, [a]) if direction == "down" else (a, [e])
    if r in ("WL", "WR"):
        _, f = _principal(node, r[1])
        return _on(r[1], f), [_side()]
    if r in ("CL", "CR"):
        _, f = _principal(node, r[1])
        twice = _side([f, f], []) if r == "CL" else _side([], [f, f])
        return _on(r[1], f), [twice]
    raise ValueError(f"unknown rule {r}")


def _need_term(node):
    _need(node.term is not None, "missing term")
    return node.term


# ---------------------------------------------------------------- context matching

def _multiset_context(seq, prin):
    left = multiset_sub(seq.left, prin[0])
    right = multiset_sub(seq.right, prin[1])
    if left is None or right is None:
        return None
    return (tuple(sorted(left, key=show)), tuple(sorted(right, key=show)))


def match_contexts(concl, prems, cprin, pprins):
    """Return the shared context, or raise ValueError."""
    seqs = [concl] + list(prems)
    prins = [cprin] + list(pprins)
    if isinstance(concl, MultisetSequent):
        ctxs = [_multiset_context(s, p) for s, p in zip(seqs, prins)]
        _need(all(c is not None for c in ctxs), "principal formulas missing from a sequent")
        _need(all(c == ctxs[0] for c in ctxs), "contexts of premises and conclusion differ")
        return ctxs[0]
    left = set().union(*(set(s.left) - set(p[0]) for s, p in zip(seqs, prins)))
    right = set().union(*(set(s.right) - set(p[1]) for s, p in zip(seqs, prins)))
    for s, p in zip(seqs, prins):
        _need(set(s.left) == left | set(p[0]) and set(s.right) == right | set(p[1]),
              "premise and conclusion do not differ exactly by the rule's formulas")
    return (tuple(left), tuple(right))


def apply_rule(rule: str, premises: list, **params):
    """Forward application: compute the conclusion from premises and parameters.

    For set-flavored sequents the context is taken to be the premise minus the
    principal formulas, which yields the smallest admissible conclusion.
    """
    node = Derivation(rule, None, (), **params)
    if rule in SIDETRACK:
        return premises[1]
    if rule == "CUT":
        _, f = _principal(node, "R")
        p1, p2 = premises
        return type(p1)(_remove(p1.left, []) + _remove(p2.left, [f]),
                        _remove(p1.right, [f]) + _remove(p2.right, []))
    cprin, pprins = schema(node)
    _need(len(pprins) == len(premises), f"{rule} takes {len(pprins)} premises")
    if isinstance(premises[0], MultisetSequent):
        ctxs = [_multiset_context(s, p) for s, p in zip(premises, pprins)]
        _need(all(c is not None for c in ctxs), "principal formulas missing from a premise")
        _need(all(c == ctxs[0] for c in ctxs), "premise contexts differ")
        ctx = ctxs[0]
        return MultisetSequent(ctx[0] + cprin[0], ctx[1] + cprin[1])
    left = set().union(*(set(s.left) - set(p[0]) for s, p in zip(premises, pprins)))
    right = set().union(*(set(s.right) - set(p[1]) for s, p in zip(premises, pprins)))
    for s, p in zip(premises, pprins):
        _need(set(p[0]) <= set(s.left) and set(p[1]) <= set(s.right),
              "principal formulas missing from a premise")
    return SetSequent(tuple(left) + cprin[0], tuple(right) + cprin[1])


def _remove(side, fs):
    if not fs:
        return tuple(side)
    out = multiset_sub(side, fs)
    _need(out is not None, f"{show(fs[0])} missing")
    return out


# ---------------------------------------------------------------- checking

@dataclass
class _Open:
    kind: str
    label: str
    sequent: object


def check(d: Derivation, calculus: str) -> CheckReport:
    """Validate every node of ``d`` against the catalog of ``calculus``."""
    if calculus not in CALCULI:
        raise ValueError(f"unknown calculus {calculus}")
    opens = _check(d, calculus, ())
    return CheckReport(d.sequent, [(o.label, o.sequent) for o in opens], calculus,
                       d.size(), d.depth())


def accepts(d: Derivation, calculus: str) -> bool:
    try:
        check(d, calculus)
    except RuleViolation:
        return False
    return True


def open_premises(d: Derivation) -> list:
    """Leaves not bound by a sidetrack ancestor inside ``d`` (no validation)."""
    return [(o.label, o.sequent) for o in _opens(d)]


def _opens(d):
    if d.rule in LEAVES:
        return [_Open(d.rule, d.label, d.sequent)]
    if d.rule in SIDETRACK and len(d.children) == 2:
        minor = [o for o in _opens(d.children[1])
                 if not (o.kind == "Discharged" and o.label == d.binds)]
        return _opens(d.children[0]) + minor
    return [o for c in d.children for o in _opens(c)]


def bound_leaves(d: Derivation) -> list:
    """Paths (relative to the minor premise) of leaves a sidetrack node discharges."""
    out = []

    def walk(n, path):
        if n.rule == "Discharged" and n.label == d.binds:
            out.append(path)
            return
        if n.rule in SIDETRACK and n.binds == d.binds:
            walk(n.children[0], path + (0,))  # inner binder shadows in its minor premise
            return
        for i, c in enumerate(n.children):
            walk(c, path + (i,))

    walk(d.children[1], ())
    return out


def _check(d, calc, path):
    flavor = MultisetSequent if calc in MULTISET_CALCULI else SetSequent
    if not isinstance(d.sequent, flavor):
        raise RuleViolation(path, f"sequent flavor does not match calculus {calc}")
    if d.rule in LEAVES:
        if d.children:
            raise RuleViolation(path, "assumption leaves have no premises")
        if not d.label:
            raise RuleViolation(path, "assumption leaves need a label")
        return [_Open(d.rule, d.label, d.sequent)]
    if d.rule not in CALCULI[calc]:
        raise RuleViolation(path, f"rule {d.rule} not in calculus {calc}")
    child_opens = [_check(c, calc, path + (i,)) for i, c in enumerate(d.children)]
    try:
        opens = _check_node(d, child_opens)
    except (ValueError, CaptureError, DialectError) as e:
        raise RuleViolation(path, f"{d.rule}: {e}") from None
    return opens


def _no_free(y, where, what):
    _need(y not in free_vars(where), f"eigenvariable {y} occurs free in {what}")


def _check_node(d, child_opens):
    r, seq, kids = d.rule, d.sequent, d.children
    if r in ("ID", "GID"):
        _need(not kids, f"{r} has no premises")
        if r == "ID":
            _need(len(seq.left) == 1 and seq.left == seq.right, "ID must be of the form F |- F")
        else:
            common = set(seq.left) & set(seq.right)
            _need(common, "GID needs a formula on both sides")
            if d.principal is not None:
                _need(d.principal[1] in common, "GID principal formula not on both sides")
        return []
    if r == "CUT":
        _need(len(kids) == 2, "CUT has two premises")
        _, f = _principal(d, "R")
        p1, p2 = kids[0].sequent, kids[1].sequent
        _need(f in p1.right and f in p2.left, "cut formula missing from a premise")
        ok = False
        for delta in (set(p1.right), set(p1.right) - {f}):
            for pi in (set(p2.left), set(p2.left) - {f}):
                if set(seq.left) == set(p1.left) | pi and set(seq.right) == delta | set(p2.right):
                    ok = True
        _need(ok, "conclusion is not the cut of its premises")
        return child_opens[0] + child_opens[1]
    if r in SIDETRACK:
        return _check_sidetrack(d, child_opens)
    cprin, pprins = schema(d)
    _need(len(kids) == len(pprins), f"{r} takes {len(pprins)} premise(s)")
    match_contexts(seq, [k.sequent for k in kids], cprin, pprins)
    opens = [o for co in child_opens for o in co]
    if r in EIGEN_RULES:
        y = d.eigen
        _no_free(y, seq, "the conclusion")
        for o in opens:
            _no_free(y, o.sequent, "an open premise")
    return opens


def _check_sidetrack(d, child_opens):
    r, seq = d.rule, d.sequent
    _need(len(d.children) == 2, f"{r} takes a major and a minor premise")
    _need(d.binds, f"{r} needs a binds label")
    _need(d.eigen is not None, "missing eigenvariable")
    major, minor = d.children[0].sequent, d.children[1].sequent
    _need(minor == seq, "minor premise must equal the conclusion")
    side, cls = ("R", Exists) if r == "ExRE" else ("L", Forall)
    _, q = _principal(d, side, cls)
    ctx = _multiset_context(major, _on(side, q))
    _need(ctx is not None, "principal formula missing from the major premise")
    inst = instance(q, Var(d.eigen))
    hyp = MultisetSequent(ctx[0], ctx[1] + (inst,)) if side == "R" \
        else MultisetSequent(ctx[0] + (inst,), ctx[1])
    rest = []
    for o in child_opens[1]:
        if o.kind == "Discharged" and o.label == d.binds:
            _need(o.sequent == hyp, f"discharged assumption {show_sequent(o.sequent)} "
                                    f"is not {show_sequent(hyp)}")
        else:
            rest.append(o)
    y = d.eigen
    _no_free(y, major, "the major premise")
    _no_free(y, seq, "the conclusion")
    for o in rest:
        _no_free(y, o.sequent, "an open premise of the minor derivation")
    return child_opens[0] + rest


# ---------------------------------------------------------------- builders

def leaf(seq, label, discharged=False) -> Derivation:
    return Derivation("Discharged" if discharged else "Assumption", seq, label=label)


def build(rule, children, principal=None, **params) -> Derivation:
    """Node whose conclusion is computed by forward application."""
    kids = tuple(children)
    seq = apply_rule(rule, [k.sequent for k in kids], principal=principal, **params)
    return Derivation(rule, seq, kids, principal=principal, **params)


def node(rule, seq, children=(), **params) -> Derivation:
    return Derivation(rule, seq, tuple(children), **params)


def gid(seq, principal=None) -> Derivation:
    return Derivation("GID", seq, principal=("R", principal) if principal is not None else None)


def all_variables(d: Derivation) -> set:
    """Every variable name occurring anywhere in ``d`` (sequents and parameters)."""
    from .syntax import all_vars
    out: set = set()
    for n in d.nodes():
        out |= all_vars(n.sequent)
        if n.term is not None:
            out |= all_vars(n.term)
        if n.eigen is not None:
            out.add(n.eigen)
        if n.principal is not None:
            out |= all_vars(n.principal[1])
    return out


def is_atomic_gid(d: Derivation) -> bool:
    if d.principal is not None:
        return isinstance(d.principal[1], Atom)
    return any(isinstance(f, Atom) for f in set(d.sequent.left) & set(d.sequent.right))
