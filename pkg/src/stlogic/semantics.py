"""Finite three-valued models and brute-force consequence checking.

Truth values are exposed as Fractions 0, 1/2, 1.  Internally they are coded as
the integers 0, 1, 2 (twice the value) so that the enumeration loops stay cheap.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .syntax import (
    App, Atom, Conj, Disj, EWitness, Exists, Forall, Neg,
    ParseError, Signature, UWitness, Var, _children, free_vars,
    henkin_level, parse_term, show, witnesses,
)

HALF = Fraction(1, 2)
VALUES = (Fraction(0), HALF, Fraction(1))
_CODE = {Fraction(0): 0, HALF: 1, Fraction(1): 2}

DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


class UnsupportedOpenWitness(ValueError):
    pass


class NonPropositional(ValueError):
    pass


@dataclass
class FiniteSTModel:
    domain: tuple
    fn_tables: dict = field(default_factory=dict)
    rel_tables: dict = field(default_factory=dict)  # name -> {args tuple: code 0|1|2}
    witness_tables: dict = field(default_factory=dict)

    def value(self, rel, args) -> Fraction:
        return VALUES[self.rel_tables[rel][tuple(args)]]


@dataclass
class Countermodel:
    model: FiniteSTModel
    assignment: dict


@dataclass
class NoneUpToBound:
    bound: int
    exact: bool = False
    models_checked: int = 0


# ---------------------------------------------------------------- evaluation

def _term(m, a, t):
    if isinstance(t, Var):
        if t.name not in a:
            raise KeyError(f"unassigned variable {t.name}")
        return a[t.name]
    if isinstance(t, App):
        return m.fn_tables[t.fn][tuple(_term(m, a, s) for s in t.args)]
    if isinstance(t, (UWitness, EWitness)):
        if t not in m.witness_tables:
            raise KeyError(f"no interpretation for witness {show(t)}")
        return m.witness_tables[t]
    raise ValueError(f"epsilon terms have no finite-model interpretation here: {show(t)}")


def _ev(m, a, f) -> int:
    if isinstance(f, Atom):
        return m.rel_tables[f.rel][tuple(_term(m, a, t) for t in f.args)]
    if isinstance(f, Neg):
        return 2 - _ev(m, a, f.sub)
    if isinstance(f, Conj):
        left = _ev(m, a, f.left)
        return 0 if left == 0 else min(left, _ev(m, a, f.right))
    if isinstance(f, Disj):
        left = _ev(m, a, f.left)
        return 2 if left == 2 else max(left, _ev(m, a, f.right))
    inner = dict(a)
    if isinstance(f, Forall):
        best = 2
        for d in m.domain:
            inner[f.var] = d
            best = min(best, _ev(m, inner, f.body))
            if best == 0:
                break
        return best
    best = 0
    for d in m.domain:
        inner[f.var] = d
        best = max(best, _ev(m, inner, f.body))
        if best == 2:
            break
    return best


def evaluate(m: FiniteSTModel, a: dict, f) -> Fraction:
    """Strong Kleene value of ``f`` under assignment ``a``."""
    return VALUES[_ev(m, a or {}, f)]


def _sat(m, a, s) -> bool:
    return any(_ev(m, a, g) < 2 for g in s.left) or any(_ev(m, a, d) > 0 for d in s.right)


def satisfies(m: FiniteSTModel, s, a: dict | None = None) -> bool:
    """Some antecedent is not strictly true or some succedent is tolerantly true."""
    return _sat(m, a or {}, s)


# ---------------------------------------------------------------- Henkin expansion

def _closure(constants) -> list:
    out = set()
    for c in constants:
        out |= witnesses(c)
    return sorted(out, key=lambda w: (henkin_level(w), show(w)))


def _optimizers(m, w):
    if free_vars(w.body) - {w.var}:
        raise UnsupportedOpenWitness(f"witness body has extra free variables: {show(w)}")
    vals = [(_ev(m, {w.var: d}, w.body), d) for d in m.domain]
    target = min(v for v, _ in vals) if isinstance(w, UWitness) else max(v for v, _ in vals)
    return [d for v, d in vals if v == target]


def henkin_expand(m: FiniteSTModel, constants) -> FiniteSTModel:
    """Interpret witness constants so the Henkin equations hold; least optimizer wins."""
    out = FiniteSTModel(m.domain, m.fn_tables, m.rel_tables, dict(m.witness_tables))
    for w in _closure(constants):
        out.witness_tables[w] = _optimizers(out, w)[0]
    return out


def henkin_expansions(m: FiniteSTModel, constants):
    """Every Henkin expansion of ``m`` restricted to the given constants."""
    order = _closure(constants)

    def go(i, model):
        if i == len(order):
            yield model
            return
        for d in _optimizers(model, order[i]):
            nxt = FiniteSTModel(model.domain, model.fn_tables, model.rel_tables,
                                {**model.witness_tables, order[i]: d})
            yield from go(i + 1, nxt)

    yield from go(0, FiniteSTModel(m.domain, m.fn_tables, m.rel_tables, dict(m.witness_tables)))


def henkin_equations_hold(m: FiniteSTModel) -> bool:
    for w, d in m.witness_tables.items():
        q = (Forall if isinstance(w, UWitness) else Exists)(w.var, w.body)
        if _ev(m, {w.var: d}, w.body) != _ev(m, {}, q):
            return False
    return True


# ---------------------------------------------------------------- enumeration

def element_names(n: int) -> tuple:
    letters = "abcdefghijklmnopqrstuvwxyz"
    return tuple(letters[i] if i < 26 else f"e{i}" for i in range(n))


def enumerate_models(sig: Signature, max_domain: int, two_valued=False, min_domain=1):
    """All models over ``sig`` in canonical order: domain size, then function
    tables, then relation tables (each lexicographic)."""
    codes = (0, 2) if two_valued else (0, 1, 2)
    fns = sorted(sig.functions.items())
    rels = sorted(sig.relations.items())
    for n in range(min_domain, max_domain + 1):
        dom = element_names(n)
        fn_keys = [(name, list(itertools.product(dom, repeat=k))) for name, k in fns]
        rel_keys = [(name, list(itertools.product(dom, repeat=k))) for name, k in rels]
        fn_choices = itertools.product(*(itertools.product(dom, repeat=len(keys))
                                         for _, keys in fn_keys))
        for fvals in fn_choices:
            fn_tables = {name: dict(zip(keys, vals)) for (name, keys), vals in zip(fn_keys, fvals)}
            for rvals in itertools.product(*(itertools.product(codes, repeat=len(keys))
                                             for _, keys in rel_keys)):
                rel_tables = {name: dict(zip(keys, vals))
                              for (name, keys), vals in zip(rel_keys, rvals)}
                yield FiniteSTModel(dom, fn_tables, rel_tables)


def count_models(sig: Signature, max_domain: int, two_valued=False) -> int:
    c = 2 if two_valued else 3
    total = 0
    for n in range(1, max_domain + 1):
        k = 1
        for _, a in sig.functions.items():
            k *= n ** (n ** a)
        for _, a in sig.relations.items():
            k *= c ** (n ** a)
        total += k
    return total


def _quantifier_free(f) -> bool:
    if isinstance(f, (Forall, Exists)):
        return False
    if isinstance(f, Atom):
        return True
    return all(_quantifier_free(c) for c in _children(f))


def consequence_bounded(X, s, max_domain: int, two_valued=False, sig=None,
                        budget=DEFAULT_BUDGET, all_expansions=True):
    """Search for a model satisfying every sequent of ``X`` but not ``s``.

    Sequents with witness constants are checked against Henkin expansions of
    each candidate (all of them, unless ``all_expansions`` is false).
    """
    X = list(X)
    seqs = X + [s]
    sig = sig or Signature.infer(seqs)
    if not sig.relations:
        sig = Signature({"R0": 0}, dict(sig.functions))
    fv = sorted(set().union(*(free_vars(q) for q in seqs)))
    consts = set()
    for q in seqs:
        consts |= witnesses(q)
    checked = 0
    for m in enumerate_models(sig, max_domain, two_valued):
        checked += 1
        if checked > budget:
            raise BudgetExceeded(f"more than {budget} candidate models")
        models = henkin_expansions(m, consts) if all_expansions else [henkin_expand(m, consts)]
        for hm in models:
            for vals in itertools.product(hm.domain, repeat=len(fv)):
                a = dict(zip(fv, vals))
                if all(_sat(hm, a, q) for q in X) and not _sat(hm, a, s):
                    return Countermodel(hm, a)
    exact = not sig.functions and not consts and all(
        _quantifier_free(f) for q in seqs for f in q.formulas())
    return NoneUpToBound(max_domain, exact, checked)


# ---------------------------------------------------------------- propositional deciders

def _atoms(f, out):
    if isinstance(f, Atom):
        if f.args:
            raise NonPropositional(f"atom with arguments: {show(f)}")
        out.add(f.rel)
        return
    if isinstance(f, (Forall, Exists)):
        raise NonPropositional(f"quantifier in propositional input: {show(f)}")
    for c in _children(f):
        _atoms(c, out)


def _valuations(formulas):
    atoms: set = set()
    for f in formulas:
        _atoms(f, atoms)
    names = sorted(atoms)
    for vals in itertools.product((0, 1, 2), repeat=len(names)):
        tables = {n: {(): v} for n, v in zip(names, vals)}
        yield FiniteSTModel(("a",), {}, tables)


def decide_st_propositional(X, s) -> bool:
    """Local metainferential validity over all 3-valuations of the atoms."""
    seqs = list(X) + [s]
    fs = [f for q in seqs for f in q.formulas()]
    for m in _valuations(fs):
        if all(_sat(m, {}, q) for q in X) and not _sat(m, {}, s):
            return False
    return True


def lp_consequence(premises, phi) -> bool:
    """Every valuation designating all premises designates ``phi``."""
    premises = list(premises)
    for m in _valuations(premises + [phi]):
        if all(_ev(m, {}, p) > 0 for p in premises) and _ev(m, {}, phi) == 0:
            return False
    return True


def st_valid_classically(s) -> bool:
    """Two-valued validity of a propositional sequent."""
    fs = list(s.formulas())
    atoms: set = set()
    for f in fs:
        _atoms(f, atoms)
    names = sorted(atoms)
    for vals in itertools.product((0, 2), repeat=len(names)):
        m = FiniteSTModel(("a",), {}, {n: {(): v} for n, v in zip(names, vals)})
        if not _sat(m, {}, s):
            return False
    return True


# ---------------------------------------------------------------- model files

def _fmt_value(code) -> str:
    return ("0", "1/2", "1")[code]


def dump_model(m: FiniteSTModel, assignment: dict | None = None) -> str:
    lines = ["domain: " + " ".join(m.domain)]
    for name in sorted(m.fn_tables):
        table = m.fn_tables[name]
        lines.append(f"fn {name}: " + " ".join(f"({','.join(k)})->{v}" for k, v in table.items()))
    for name in sorted(m.rel_tables):
        table = m.rel_tables[name]
        lines.append(f"rel {name}: " + " ".join(f"({','.join(k)})->{_fmt_value(v)}"
                                               for k, v in table.items()))
    for w in sorted(m.witness_tables, key=show):
        lines.append(f"witness {show(w)} -> {m.witness_tables[w]}")
    for v in sorted(assignment or {}):
        lines.append(f"var {v} -> {assignment[v]}")
    return "\n".join(lines) + "\n"


def _parse_entries(text, lineno):
    out = []
    for tok in text.split():
        key, sep, val = tok.partition("->")
        if not sep or not (key.startswith("(") and key.endswith(")")):
            raise ParseError(f"line {lineno}: bad table entry {tok!r}")
        inner = key[1:-1].strip()
        out.append((tuple(x.strip() for x in inner.split(",")) if inner else (), val.strip()))
    return out


def load_model(text: str):
    """Parse a model file; returns (model, assignment)."""
    dom, fns, rels, wits, assign = None, {}, {}, {}, {}
    codes = {"0": 0, "1/2": 1, "1": 2}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("domain:"):
            dom = tuple(line[len("domain:"):].split())
        elif line.startswith("fn ") or line.startswith("rel "):
            kind, rest = line.split(None, 1)
            name, sep, entries = rest.partition(":")
            if not sep:
                raise ParseError(f"line {n}: missing ':'")
            table = {}
            for k, v in _parse_entries(entries, n):
                if kind == "rel":
                    if v not in codes:
                        raise ParseError(f"line {n}: truth value must be 0, 1/2 or 1")
                    table[k] = codes[v]
                else:
                    table[k] = v
            (rels if kind == "rel" else fns)[name.strip()] = table
        elif line.startswith("witness "):
            term, sep, elem = line[len("witness "):].rpartition("->")
            if not sep:
                raise ParseError(f"line {n}: expected 'witness TERM -> ELEMENT'")
            wits[parse_term(term.strip())] = elem.strip()
        elif line.startswith("var "):
            v, sep, elem = line[len("var "):].partition("->")
            assign[v.strip()] = elem.strip()
        else:
            raise ParseError(f"line {n}: unrecognised model line")
    if not dom:
        raise ParseError("model file needs a nonempty 'domain:' line")
    m = FiniteSTModel(dom, fns, rels, wits)
    _validate(m)
    return m, assign


def _validate(m):
    for name, table in list(m.fn_tables.items()) + list(m.rel_tables.items()):
        arities = {len(k) for k in table}
        if len(arities) > 1:
            raise ParseError(f"table {name} mixes arities")
        k = arities.pop() if arities else 0
        if set(table) != set(itertools.product(m.domain, repeat=k)):
            raise ParseError(f"table {name} is not total over the domain")
    for name, table in m.fn_tables.items():
        if not set(table.values()) <= set(m.domain):
            raise ParseError(f"function {name} leaves the domain")
