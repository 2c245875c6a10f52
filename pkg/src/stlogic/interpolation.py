"""Split interpolants extracted from normal MQST derivations.

The recursion carries certificates rather than bare sets: for every member of
the interpolating set a derivation of it from the X1 premises, and one
derivation of the goal from the members plus the X2 premises.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .calculi import (
    ELIM_RULES, SIDETRACK, Derivation, all_variables, bound_leaves, build, check,
    open_premises,
)
from .normalization import CONTRACTIONS, NotNormal, _put, is_normal
from .syntax import (
    Exists, Forall, MultisetSequent, Var, fresh_var, free_vars, relations, substitute, tau,
)
from .transformations import (
    bundle_interderive, labels, map_formulas, replace_leaves, tau_interderive,
)


class SplitError(ValueError):
    """An open premise without an X1/X2 tag, or a tag for an unknown label."""


@dataclass
class InterpolationResult:
    interpolant: list            # MultisetSequents
    d_left: list                 # derivation of each member from X1
    d_right: Derivation          # derivation of S from the members and X2
    shared_relations: frozenset
    shared_free_vars: frozenset
    member_labels: list = field(default_factory=list)

    def lines(self) -> list:
        from .syntax import show_sequent
        out = [f"interpolant: {len(self.interpolant)} sequent(s)"]
        out += [f"  {lab}: {show_sequent(s)}" for lab, s in zip(self.member_labels, self.interpolant)]
        out.append("shared relations: " + ", ".join(sorted(self.shared_relations)))
        out.append("shared free variables: " + ", ".join(sorted(self.shared_free_vars)))
        return out


def quantify_sequent(s, x: str, q: str = "forall"):
    """Rewrite ``s`` as |- phi and bind ``x`` in phi with ``q``; unchanged if x is not free."""
    if x not in free_vars(s):
        return s
    phi = tau(MultisetSequent(s.left, s.right))
    return MultisetSequent((), ((Forall if q == "forall" else Exists)(x, phi),))


# ---------------------------------------------------------------- certificates

@dataclass
class _Cert:
    members: list   # [(label, sequent)]
    lefts: dict     # label -> derivation of the member
    right: Derivation


class _Names:
    def __init__(self, taken):
        self.taken = set(taken)

    def __call__(self, stem):
        i = 1
        while f"{stem}{i}" in self.taken:
            i += 1
        self.taken.add(f"{stem}{i}")
        return f"{stem}{i}"


def _graft(d, label, sub):
    """Replace the open assumptions labelled ``label`` in ``d`` by ``sub``."""
    return replace_leaves(d, lambda n: n.rule == "Assumption" and n.label == label, lambda n: sub)


def _relabel_leaf(d, old, new_seq, new_label):
    return replace_leaves(d, lambda n: n.rule == "Assumption" and n.label == old,
                          lambda n: Derivation("Assumption", new_seq, label=new_label))


def _discharge(d, label, binds):
    return replace_leaves(d, lambda n: n.rule == "Assumption" and n.label == label,
                          lambda n: Derivation("Discharged", n.sequent, label=binds))


def _as_formula(c: _Cert, label):
    """Make the member |- phi, grafting the translation in on both sides."""
    seq = dict(c.members)[label]
    if not seq.left and len(seq.right) == 1:
        return seq.right[0]
    pair = tau_interderive(seq, "mqst")
    c.lefts[label] = _graft(pair.forward, "S", c.lefts[label])
    back = _relabel_leaf(pair.backward, "T", MultisetSequent((), (tau(seq),)), label)
    c.right = _graft(c.right, label, back)
    phi = tau(seq)
    c.members = [(lab, MultisetSequent((), (phi,)) if lab == label else s) for lab, s in c.members]
    return phi


def _forall(c: _Cert, label, v):
    phi = _as_formula(c, label)
    q = Forall(v, phi)
    c.lefts[label] = build("AllRI", [c.lefts[label]], principal=("R", q), eigen=v)
    leaf = Derivation("Assumption", MultisetSequent((), (q,)), label=label)
    inst = build("AllRE", [leaf], principal=("R", q), term=Var(v))
    c.right = _graft(c.right, label, inst)
    c.members = [(lab, leaf.sequent if lab == label else s) for lab, s in c.members]


def _exists(c: _Cert, label, v, names):
    phi = _as_formula(c, label)
    q = Exists(v, phi)
    c.lefts[label] = build("ExRI", [c.lefts[label]], principal=("R", q), term=Var(v))
    b = names("j")
    minor = _discharge(c.right, label, b)
    major = Derivation("Assumption", MultisetSequent((), (q,)), label=label)
    c.right = Derivation("ExRE", c.right.sequent, (major, minor), principal=("R", q),
                         eigen=v, binds=b)
    c.members = [(lab, major.sequent if lab == label else s) for lab, s in c.members]


def _bundle(c: _Cert, group, names):
    phis = [_as_formula(c, lab) for lab in group]
    pair = bundle_interderive(phis)
    new = names("I")
    left = pair.forward
    slots = [names("B") for _ in group]
    for i, slot in enumerate(slots):
        left = replace_leaves(left, lambda n, k=f"B{i + 1}": n.label == k,
                              lambda n, slot=slot: replace(n, label=slot))
    for slot, lab in zip(slots, group):
        left = _graft(left, slot, c.lefts.pop(lab))
    c.lefts[new] = left
    whole = left.sequent
    for lab, back in zip(group, pair.backward):
        c.right = _graft(c.right, lab, _relabel_leaf(back, "B", whole, new))
    keep = [(lab, s) for lab, s in c.members if lab not in group]
    c.members = keep + [(new, whole)]
    return new


def _forall_step(c: _Cert, fv1):
    for lab, seq in list(c.members):
        for v in sorted(free_vars(seq) - fv1):
            _forall(c, lab, v)


def _exists_step(c: _Cert, fv2, names, only=None):
    pending = set().union(*(free_vars(s) for _, s in c.members)) if c.members else set()
    for v in sorted(pending - fv2):
        if only is not None and v not in only:
            continue
        holders = [lab for lab, s in c.members if v in free_vars(s)]
        if not holders:
            continue
        target = holders[0] if len(holders) == 1 else _bundle(c, holders, names)
        _exists(c, target, v, names)


def _vocab(d, tags):
    x1 = [s for lab, s in open_premises(d) if tags.get(lab) == "X1"]
    x2 = [s for lab, s in open_premises(d) if tags.get(lab) == "X2"]
    fv1 = set().union(*(free_vars(s) for s in x1)) if x1 else set()
    fv2 = set().union(free_vars(d.sequent), *(free_vars(s) for s in x2))
    return fv1, fv2


def _fix_vocabulary(c: _Cert, d, tags, names):
    fv1, fv2 = _vocab(d, tags)
    _forall_step(c, fv1)
    _exists_step(c, fv2, names)


# ---------------------------------------------------------------- recursion

INVERTIBLE_DOWN = ("NegL.down", "NegR.down", "AndL.down", "OrR.down")
QUANT_INTROS = ("AllRI", "ExLI", "ExRI", "AllLI")


def _interp(d: Derivation, tags: dict, names) -> _Cert:
    r = d.rule
    if r == "Assumption":
        tag = tags.get(d.label)
        if tag is None:
            raise SplitError(f"open premise {d.label!r} has no X1/X2 tag")
        if tag == "X2":
            return _Cert([], {}, d)
        lab = names("I")
        return _Cert([(lab, d.sequent)], {lab: d}, Derivation("Assumption", d.sequent, label=lab))
    if r == "GID":
        return _Cert([], {}, d)
    if r == "Discharged":
        raise NotNormal(f"unexpected discharged assumption {d.label!r} at the root")
    if r in CONTRACTIONS or r in INVERTIBLE_DOWN:
        c = _interp(d.children[0], tags, names)
        c.right = d.with_children([c.right])
        return c
    if r in ("AndR.down", "OrL.down"):
        c1 = _interp(d.children[0], tags, names)
        c2 = _interp(d.children[1], tags, names)
        return _Cert(c1.members + c2.members, {**c1.lefts, **c2.lefts},
                     d.with_children([c1.right, c2.right]))
    if r in QUANT_INTROS:
        c = _interp(d.children[0], tags, names)
        fv1, fv2 = _vocab(d, tags)
        _forall_step(c, fv1)
        c.right = d.with_children([c.right])
        _exists_step(c, fv2, names)
        return c
    if r in ELIM_RULES:
        return _elim_root(d, tags, names)
    raise NotNormal(f"rule {r} is not an MQST rule")


def _elim_root(d: Derivation, tags, names) -> _Cert:
    # walk the main branch down to its terminal assumption
    path, node, epath = (), d, None
    while node.rule in ELIM_RULES or node.rule in CONTRACTIONS:
        if node.rule in ELIM_RULES:
            epath = path
        path, node = path + (0,), node.children[0]
    if node.rule != "Assumption":
        raise NotNormal(f"main branch ends in {node.rule}, not in an open assumption")
    tag = tags.get(node.label)
    if tag is None:
        raise SplitError(f"open premise {node.label!r} has no X1/X2 tag")
    e = d.at(epath)
    s_label = names("S")
    new_tags = {**tags, s_label: tag}

    if e.rule not in SIDETRACK:
        reduced = _put(d, epath, Derivation("Assumption", e.sequent, label=s_label))
        c = _interp(reduced, new_tags, names)
        if tag == "X1":
            c.lefts = {k: _graft(v, s_label, e) for k, v in c.lefts.items()}
        else:
            c.right = _graft(c.right, s_label, e)
        _fix_vocabulary(c, d, tags, names)
        return c

    # sidetrack: rename the eigenvariable apart from everything, then open the minor
    y = fresh_var(e.eigen, all_variables(d))
    minor = map_formulas(e.children[1], lambda f: substitute(f, e.eigen, Var(y)),
                         lambda v: y if v == e.eigen else v)
    e = replace(e, eigen=y, children=(e.children[0], minor))
    for p in bound_leaves(e):
        minor = _put(minor, p, Derivation("Assumption", minor.at(p).sequent, label=s_label))
    reduced = _put(d, epath, minor)
    c = _interp(reduced, new_tags, names)
    _exists_step(c, set(), names, only={y})
    major = e.children[0]

    def wrap(sub):
        if not any(n.rule == "Assumption" and n.label == s_label for n in sub.nodes()):
            return sub
        b = names("j")
        return Derivation(e.rule, sub.sequent, (major, _discharge(sub, s_label, b)),
                          principal=e.principal, eigen=y, binds=b)

    if tag == "X1":
        c.lefts = {k: wrap(v) for k, v in c.lefts.items()}
    else:
        c.right = wrap(c.right)
    _fix_vocabulary(c, d, tags, names)
    return c


def interpolate(d: Derivation, split: dict) -> InterpolationResult:
    """Interpolating set for the X1 | X2 division of the open premises of ``d``."""
    if not is_normal(d):
        raise NotNormal("interpolation needs a normal derivation (normalize it first)")
    opens = open_premises(d)
    missing = sorted({lab for lab, _ in opens if split.get(lab) not in ("X1", "X2")})
    if missing:
        raise SplitError("open premises without an X1/X2 tag: " + ", ".join(missing))
    taken = labels(d) | set(split)
    c = _interp(d, dict(split), _Names(taken))
    x1 = [s for lab, s in opens if split[lab] == "X1"]
    x2 = [s for lab, s in opens if split[lab] == "X2"]
    rel1 = set().union(*(relations(s) for s in x1)) if x1 else set()
    rel2 = set().union(relations(d.sequent), *(relations(s) for s in x2))
    fv1 = set().union(*(free_vars(s) for s in x1)) if x1 else set()
    fv2 = set().union(free_vars(d.sequent), *(free_vars(s) for s in x2))
    return InterpolationResult(
        interpolant=[s for _, s in c.members],
        d_left=[c.lefts[lab] for lab, _ in c.members],
        d_right=c.right,
        shared_relations=frozenset(rel1 & rel2),
        shared_free_vars=frozenset(fv1 & fv2),
        member_labels=[lab for lab, _ in c.members],
    )


def verify_interpolation(r: InterpolationResult, x1, x2, s, problems: list | None = None) -> bool:
    """Re-check both certificates, their endpoints and the vocabulary conditions."""
    problems = [] if problems is None else problems
    x1, x2 = set(x1), set(x2)
    members = list(r.interpolant)
    if len(r.d_left) != len(members):
        problems.append("endpoint mismatch: one left derivation per member is needed")
    for i, (m, dl) in enumerate(zip(members, r.d_left)):
        try:
            rep = check(dl, "mqst")
        except Exception as err:  # RuleViolation or malformed node
            problems.append(f"left derivation {i + 1} rejected: {err}")
            continue
        if rep.conclusion != m:
            problems.append(f"endpoint mismatch: left derivation {i + 1} does not conclude its member")
        extra = [p for _, p in rep.open_premises if p not in x1]
        if extra:
            problems.append(f"left derivation {i + 1} uses premises outside X1")
    try:
        rep = check(r.d_right, "mqst")
    except Exception as err:
        problems.append(f"right derivation rejected: {err}")
    else:
        if rep.conclusion != s:
            problems.append("endpoint mismatch: right derivation does not conclude S")
        allowed = x2 | set(members)
        if any(p not in allowed for _, p in rep.open_premises):
            problems.append("right derivation uses premises outside the interpolant and X2")
    rel1 = set().union(*(relations(p) for p in x1)) if x1 else set()
    rel2 = set().union(relations(s), *(relations(p) for p in x2))
    fv1 = set().union(*(free_vars(p) for p in x1)) if x1 else set()
    fv2 = set().union(free_vars(s), *(free_vars(p) for p in x2))
    for m in members:
        bad = relations(m) - (rel1 & rel2)
        if bad:
            problems.append("vocabulary violation: relation(s) " + ", ".join(sorted(bad))
                            + " not shared")
        bad = free_vars(m) - (fv1 & fv2)
        if bad:
            problems.append("vocabulary violation: free variable(s) " + ", ".join(sorted(bad))
                            + " not shared")
    return not problems
