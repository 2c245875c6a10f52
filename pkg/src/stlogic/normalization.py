"""Segments, tracks and normalization of MQST derivations."""
from __future__ import annotations

from dataclasses import dataclass, replace

from .calculi import (
    ELIM_RULES, INTRO_RULES, LEAVES, SIDETRACK, Derivation, all_variables, apply_rule,
    bound_leaves, is_atomic_gid,
)
from .syntax import Atom, CaptureError, Var, all_vars, fresh_var, logical_size, substitute
from .transformations import (
    contract_to, expand_atomic_gid, freshen_eigenvariables, labels, map_formulas,
    relabel_binders, substitute_in_derivation,
)

CONTRACTIONS = ("CL", "CR")
EIGEN_INTROS = ("ExLI", "AllRI")
MAX_STEPS = 5000


class NormalizationGap(RuntimeError):
    """A cut segment that none of the available reductions can remove."""


class MeasureViolation(RuntimeError):
    pass


class NotNormal(ValueError):
    pass


def sequent_rank(seq) -> int:
    return sum(logical_size(f) for f in seq.formulas())


@dataclass(frozen=True)
class Segment:
    paths: tuple  # top to bottom
    rank: int
    starts_with_intro: bool
    starts_with_gid: bool
    ends_at_major_elim: bool

    @property
    def first(self):
        return self.paths[0]

    @property
    def last(self):
        return self.paths[-1]

    def __len__(self):
        return len(self.paths)

    @property
    def is_cut(self) -> bool:
        return (self.starts_with_intro or self.starts_with_gid) and self.ends_at_major_elim


def node_index(d: Derivation) -> dict:
    out = {}
    stack = [((), d)]
    while stack:
        p, n = stack.pop()
        out[p] = n
        for i, c in enumerate(n.children):
            stack.append((p + (i,), c))
    return out


def _continues_down(index, path) -> bool:
    """Does the occurrence at ``path`` continue its segment into the parent?"""
    if not path:
        return False
    parent = index[path[:-1]]
    return parent.rule in CONTRACTIONS or (parent.rule in SIDETRACK and path[-1] == 1)


def _major_of_elim(index, path) -> bool:
    return bool(path) and index[path[:-1]].rule in ELIM_RULES and path[-1] == 0


def segments(d: Derivation) -> list:
    index = node_index(d)
    out = []
    for p in sorted(index):
        n = index[p]
        if n.rule in SIDETRACK or n.rule in CONTRACTIONS:
            continue
        chain = [p]
        while _continues_down(index, chain[-1]):
            chain.append(chain[-1][:-1])
        # ranked at the last sequent, where the segment's contractions have been applied
        out.append(Segment(tuple(chain), sequent_rank(index[chain[-1]].sequent),
                           n.rule in INTRO_RULES,
                           n.rule == "GID", _major_of_elim(index, chain[-1])))
    return out


def cut_segments(d: Derivation) -> list:
    return [(s, s.rank) for s in segments(d) if s.is_cut]


def measure(d: Derivation) -> tuple:
    cuts = [s for s, _ in cut_segments(d)]
    if not cuts:
        return (0, 0)
    r = max(s.rank for s in cuts)
    return (r, sum(len(s) for s in cuts if s.rank == r))


def is_normal(d: Derivation) -> bool:
    for n in d.nodes():
        if n.rule == "GID" and not is_atomic_gid(n):
            return False
        if n.rule in SIDETRACK and not bound_leaves(n):
            return False
    return not cut_segments(d)


# ---------------------------------------------------------------- rewriting helpers

def _put(d: Derivation, path, new) -> Derivation:
    if not path:
        return new
    kids = list(d.children)
    kids[path[0]] = _put(kids[path[0]], path[1:], new)
    return d.with_children(kids)


def drop_idle_sidetracks(d: Derivation) -> Derivation:
    """Omit sidetrack steps that discharge nothing (the minor premise is the conclusion)."""
    if d.rule in SIDETRACK and not bound_leaves(d):
        return drop_idle_sidetracks(d.children[1])
    if not d.children:
        return d
    return d.with_children([drop_idle_sidetracks(c) for c in d.children])


def _reapply(e: Derivation, premise: Derivation) -> Derivation:
    """The one-premise elimination ``e`` applied to a different premise."""
    seq = apply_rule(e.rule, [premise.sequent], principal=e.principal, term=e.term,
                     select=e.select)
    return replace(e, sequent=seq, children=(premise,))


def _rename_eigen(n: Derivation, avoid) -> Derivation:
    """Give the eigenvariable of ``n`` a fresh name inside its scope."""
    y = n.eigen
    z = fresh_var(y, set(avoid) | all_variables(n))
    i = 1 if n.rule in SIDETRACK else 0
    kids = list(n.children)
    kids[i] = map_formulas(kids[i], lambda f: substitute(f, y, Var(z)),
                           lambda e: z if e == y else e)
    return replace(n, eigen=z, children=tuple(kids))


def _replace_bound(side: Derivation, minor: Derivation, fn) -> Derivation:
    """Replace the leaves that sidetrack node ``side`` (with minor ``minor``) discharges."""
    probe = side.with_children([side.children[0], minor])
    out = minor
    for p in bound_leaves(probe):
        out = _put(out, p, fn(out.at(p)))
    return out


def _leaf_labels(d: Derivation) -> set:
    return {n.label for n in d.nodes() if n.rule in LEAVES and n.label}


# ---------------------------------------------------------------- reductions

def _over_sidetrack(t: Derivation, e: Derivation, avoid) -> Derivation:
    rest = list(e.children[1:])
    used = all_vars(e.sequent) | (all_vars(e.term) if e.term is not None else frozenset())
    for r in rest:
        used |= all_variables(r)
    if t.eigen in used:
        t = _rename_eigen(t, avoid | used)
    if any(t.binds in _leaf_labels(r) for r in rest):
        t = relabel_binders(t, labels(t) | set().union(*(labels(r) for r in rest)))
    moved = e.with_children([t.children[1]] + rest)
    return replace(t, sequent=e.sequent, children=(t.children[0], moved))


def _over_contraction(c: Derivation, e: Derivation, avoid) -> Derivation:
    if e.rule in SIDETRACK:
        return _lift_sidetrack(c, e, avoid)
    once = _reapply(e, c.children[0])
    if e.principal == c.principal:
        return contract_to(_reapply(e, once), e.sequent)
    return _reapply(c, once)


def _push_contractions(chain: list, base: Derivation, goal) -> Derivation:
    """Move the contractions ``chain`` (top to bottom) above the rule at ``base``."""
    def contract(d):
        for c in chain:
            d = _reapply(c, d)
        return d
    if base.rule in SIDETRACK:
        minor = contract(base.children[1])
        return replace(base, sequent=minor.sequent, children=(base.children[0], minor))
    kids = tuple(contract(k) for k in base.children)
    out = replace(base, sequent=goal, children=kids)
    if apply_rule(out.rule, [k.sequent for k in kids], principal=out.principal, term=out.term,
                  select=out.select, eigen=out.eigen) != goal:
        raise NormalizationGap("contractions cannot be moved above " + base.rule)
    return out


def _gid_absorb(g: Derivation, e: Derivation) -> Derivation:
    common = set(g.sequent.left) & set(g.sequent.right)
    atom = g.principal[1] if g.principal else sorted(
        (f for f in common if isinstance(f, Atom)), key=repr)[0]
    if e.rule not in SIDETRACK:
        return Derivation("GID", e.sequent, principal=("R", atom))
    return _replace_bound(e, e.children[1],
                          lambda leaf: Derivation("GID", leaf.sequent, principal=("R", atom)))


def _matches(i: Derivation, e: Derivation) -> bool:
    if i.principal != e.principal:
        return False
    ib, eb = i.rule.split(".")[0], e.rule.split(".")[0]
    if ib in ("NegL", "NegR", "AndL", "AndR", "OrL", "OrR"):
        return ib == eb
    pairs = {("AllRI", "AllRE"), ("ExLI", "ExLE"), ("ExRI", "ExRE"), ("AllLI", "AllLE")}
    return (i.rule, e.rule) in pairs


def _detour(i: Derivation, e: Derivation, avoid) -> Derivation:
    if "." in i.rule:
        out = i.children[(e.select or 1) - 1] if len(i.children) == 2 else i.children[0]
    elif i.rule in EIGEN_INTROS:
        out = substitute_in_derivation(i.children[0], i.eigen, e.term)
    else:
        d = i.children[0]
        try:
            minor = substitute_in_derivation(e.children[1], e.eigen, i.term)
        except CaptureError as err:
            raise NormalizationGap(f"detour needs a capturing substitution: {err}") from None
        minor = freshen_eigenvariables(minor, all_variables(d) | set(avoid))
        minor = relabel_binders(minor, labels(d) | {e.binds})
        out = _replace_bound(e, minor, lambda leaf: d)
    if out.sequent != e.sequent:
        raise AssertionError("detour contraction changed the conclusion")
    return out


def _over_intro(i: Derivation, e: Derivation, avoid) -> Derivation:
    if e.rule not in SIDETRACK:
        if i.rule in EIGEN_INTROS and e.term is not None and i.eigen in all_vars(e.term):
            i = _rename_eigen(i, set(avoid) | all_vars(e.term))
        kids = [_reapply(e, p) for p in i.children]
        return replace(i, sequent=e.sequent, children=tuple(kids))
    if len(i.children) != 1 or i.rule in EIGEN_INTROS:
        raise NormalizationGap(f"{e.rule} cannot be permuted above {i.rule}: the discharged "
                               "assumption would need two premises or an eigenvariable")
    return _lift_sidetrack(i, e, avoid)


def _lift_sidetrack(i: Derivation, e: Derivation, avoid) -> Derivation:
    """Sidetrack ``e`` moved above the one-premise rule ``i`` that leaves its principal alone."""
    if e.principal == i.principal and i.rule in CONTRACTIONS:
        raise NormalizationGap("a sidetrack elimination of a contracted formula cannot be "
                               "permuted upward without weakening discharged assumptions")
    p = i.children[0]
    clash = all_vars(p.sequent) | (all_vars(i.term) if i.term is not None else frozenset())
    if e.eigen in clash:
        e = _rename_eigen(e, set(avoid) | clash)
    side, q = e.principal
    from .calculi import instance
    from .syntax import MultisetSequent
    inst = instance(q, Var(e.eigen))
    ctx_l, ctx_r = list(p.sequent.left), list(p.sequent.right)
    (ctx_l if side == "L" else ctx_r).remove(q)
    (ctx_l if side == "L" else ctx_r).append(inst)
    hyp = Derivation("Discharged", MultisetSequent(tuple(ctx_l), tuple(ctx_r)), label=e.binds)

    def lift(leaf):
        return replace(i, sequent=leaf.sequent, children=(hyp,))

    minor = _replace_bound(e, e.children[1], lift)
    return replace(e, children=(p, minor))


def reduce_segment(d: Derivation, seg: Segment):
    """Apply one reduction to the cut segment ``seg``; returns (kind, new derivation)."""
    index = node_index(d)
    epath = seg.last[:-1]
    e = index[epath]
    top, last = index[seg.first], index[seg.last]
    avoid = all_variables(d)
    if top.rule == "GID":
        return "gid", _put(d, epath, _gid_absorb(top, e))
    if len(seg) >= 2:
        if last.rule in SIDETRACK:
            return "permute-sidetrack", _put(d, epath, _over_sidetrack(last, e, avoid))
        if e.rule in SIDETRACK and e.principal == last.principal:
            # move the contractions up first, then permute past whatever is above them
            chain, p = [], seg.last
            while index[p].rule in CONTRACTIONS:
                chain.insert(0, index[p])
                p = p + (0,)
            base = index[p]
            if base.rule in SIDETRACK:
                moved = _push_contractions(chain, base, last.sequent)
                return "permute-sidetrack", _put(d, epath, _over_sidetrack(moved, e, avoid))
            if base.principal == e.principal:
                raise NormalizationGap("a sidetrack elimination of a contracted formula cannot be "
                                       "permuted upward without weakening discharged assumptions")
            moved = _push_contractions(chain, base, last.sequent)
            return "permute-intro", _put(d, epath, _over_intro(moved, e, avoid))
        return "permute-contraction", _put(d, epath, _over_contraction(last, e, avoid))
    if _matches(top, e):
        return "detour", _put(d, epath, _detour(top, e, avoid))
    return "permute-intro", _put(d, epath, _over_intro(top, e, avoid))


def _contraction_up(c: Derivation):
    """Move contraction ``c`` above the rule that concluded its premise, or return None."""
    n = c.children[0]
    if n.rule == "GID":
        if is_atomic_gid(replace(n, sequent=c.sequent)):
            return replace(n, sequent=c.sequent)
        return None
    if n.rule in LEAVES:
        return None
    try:
        if n.rule in SIDETRACK:
            return _push_contractions([c], n, c.sequent)
        return _push_contractions([c], n, c.sequent)
    except (ValueError, NormalizationGap):
        return None


def _moves(d):
    """Every single reduction or contraction lift available in ``d`` (kind, location, result)."""
    cuts = sorted((s for s, _ in cut_segments(d)), key=lambda s: (-s.rank, -len(s.last), s.last))
    for seg in cuts:
        try:
            kind, new = reduce_segment(d, seg)
        except NormalizationGap:
            continue
        yield kind, seg.last, drop_idle_sidetracks(new)
    for path in _liftable_contractions(d, cuts):
        yield "lift-contraction", path, _put(d, path, _contraction_up(node_index(d)[path]))


def _settle(kind, d, before):
    """Follow a step that did not lower the measure with one more move that does, if any."""
    for k2, _, new in _moves(d):
        after = measure(new)
        if after < before:
            return f"{kind}+{k2}", new, after
    return None


def _liftable_contractions(d: Derivation, cuts) -> list:
    index = node_index(d)
    out = []
    for seg in cuts:
        for p in seg.paths:
            if index[p].rule in CONTRACTIONS and _contraction_up(index[p]) is not None:
                out.append(p)
    return out


@dataclass
class TraceStep:
    kind: str
    location: tuple
    before: tuple
    after: tuple

    @property
    def decreased(self) -> bool:
        return self.after < self.before

    def line(self) -> str:
        where = "/".join(map(str, self.location)) or "root"
        flag = "" if self.decreased else "  [measure did not decrease]"
        return f"{self.kind} at {where}: (r, m) {self.before} -> {self.after}{flag}"


def normalize(d: Derivation, trace: list | None = None, strict: bool = False) -> Derivation:
    """Normal derivation with the same conclusion; open premises may only shrink.

    Each round tries, in order: a single reduction of a cut segment (highest
    rank, then topmost, then leftmost) that lowers (r, m); lifting a
    contraction out of a cut segment; a reduction followed by one more move
    that together lower (r, m).  If nothing lowers the measure the first
    reduction is taken anyway and flagged in ``trace`` (``MeasureViolation``
    when ``strict``).
    """
    d = drop_idle_sidetracks(expand_atomic_gid(d))
    for _ in range(MAX_STEPS):
        if not cut_segments(d):
            return d
        before = measure(d)
        chosen, stalled = None, []
        for kind, where, new in _moves(d):
            after = measure(new)
            if after < before:
                chosen = TraceStep(kind, where, before, after), new
                break
            if not kind.startswith("lift"):
                stalled.append((kind, where, new, after))
        if chosen is None:
            for kind, where, new, _ in stalled:
                settled = _settle(kind, new, before)
                if settled is not None:
                    chosen = TraceStep(settled[0], where, before, settled[2]), settled[1]
                    break
        if chosen is None:
            if not stalled:
                raise NormalizationGap("no reduction applies: " + "; ".join(_gaps(d)))
            kind, where, new, after = stalled[0]
            step = TraceStep(kind, where, before, after)
            if strict:
                raise MeasureViolation(step.line())
            chosen = step, new
        if trace is not None:
            trace.append(chosen[0])
        d = chosen[1]
    raise NormalizationGap(f"no normal form within {MAX_STEPS} steps")


def _gaps(d) -> list:
    out = []
    for seg, _ in cut_segments(d):
        try:
            reduce_segment(d, seg)
        except NormalizationGap as err:
            out.append(str(err))
    return out


# ---------------------------------------------------------------- tracks

@dataclass(frozen=True)
class Track:
    paths: tuple
    segments: tuple  # tuple of tuples of paths
    midsegment: int


def _segment_of(d):
    out = {}
    for seg in segments(d):
        for p in seg.paths:
            out[p] = seg
    return out


def tracks(d: Derivation) -> list:
    if not is_normal(d):
        raise NotNormal("tracks are defined for normal derivations")
    index = node_index(d)
    bound = set()
    binders = {}
    for p, n in index.items():
        if n.rule in SIDETRACK:
            leaves = [p + (1,) + q for q in bound_leaves(n)]
            binders[p] = leaves
            bound.update(leaves)
    starts = [p for p, n in sorted(index.items())
              if n.rule == "GID" or (n.rule in LEAVES and p not in bound)]
    seg_of = _segment_of(d)
    out = []

    def walk(path, acc):
        acc = acc + [path]
        if not path:
            out.append(_make_track(acc, seg_of, index))
            return
        parent = path[:-1]
        if index[parent].rule in SIDETRACK and path[-1] == 0:
            for leaf in binders[parent]:
                walk(leaf, acc)
        else:
            walk(parent, acc)

    for s in starts:
        walk(s, [])
    return out


def _make_track(paths, seg_of, index):
    groups = []
    for p in paths:
        seg = seg_of[p]
        if groups and groups[-1][0] is seg:
            groups[-1][1].append(p)
        else:
            groups.append((seg, [p]))
    segs = tuple(tuple(g[1]) for g in groups)
    mid = 0
    while mid < len(segs) - 1 and _major_of_elim(index, segs[mid][-1]):
        mid += 1
    for later in segs[mid:-1]:
        last = later[-1]
        if not (last and index[last[:-1]].rule in INTRO_RULES):
            raise AssertionError("track without a midsegment")
    if mid > 0 and index[segs[0][0]].rule == "GID":
        raise AssertionError("track starting at an identity passes an elimination")
    return Track(tuple(paths), segs, mid)


def main_branch(d: Derivation) -> list:
    """Root-to-leaf path through major premises of a normal derivation ending in an elimination."""
    if not is_normal(d):
        raise NotNormal("main branches are defined for normal derivations")
    if d.rule not in ELIM_RULES:
        raise ValueError("the derivation does not end with an elimination")
    path, node = (), d
    out = [path]
    while node.rule not in LEAVES and node.rule != "GID":
        if node.rule in INTRO_RULES:
            if len(node.children) != 1:
                raise AssertionError("main branch is not unique")
        node = node.children[0]
        path = path + (0,)
        out.append(path)
    if node.rule == "GID":
        raise AssertionError("main branch ends in an identity axiom")
    return out
