"""First-order syntax with Henkin witness constants and epsilon terms.

Terms and formulas are immutable trees.  Three dialects share one set of
constructors: base syntax (no witnesses, no epsilon terms), Henkin syntax
(witnesses allowed) and epsilon syntax (epsilon terms allowed).  A single
term may not mix witnesses with epsilon terms.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union


class ParseError(ValueError):
    def __init__(self, message: str, pos: int = -1):
        super().__init__(f"{message} (at position {pos})" if pos >= 0 else message)
        self.pos = pos


class CaptureError(ValueError):
    pass


class DialectError(ValueError):
    pass


# ---------------------------------------------------------------- terms

@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    fn: str
    args: tuple = ()

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class UWitness:
    """The universal Henkin constant for ``forall var. body``."""
    var: str
    body: "Formula"

    def __post_init__(self):
        if _contains_eps(self.body):
            raise DialectError("witness body may not contain epsilon terms")

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class EWitness:
    """The existential Henkin constant for ``exists var. body``."""
    var: str
    body: "Formula"

    def __post_init__(self):
        if _contains_eps(self.body):
            raise DialectError("witness body may not contain epsilon terms")

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Eps:
    var: str
    body: "Formula"

    def __post_init__(self):
        if _contains_witness(self.body):
            raise DialectError("epsilon body may not contain witness constants")

    def __str__(self):
        return show(self)


Term = Union[Var, App, UWitness, EWitness, Eps]


# ---------------------------------------------------------------- formulas

@dataclass(frozen=True, slots=True)
class Atom:
    rel: str
    args: tuple = ()

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Neg:
    sub: "Formula"

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Conj:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Disj:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"

    def __str__(self):
        return show(self)


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"

    def __str__(self):
        return show(self)


Formula = Union[Atom, Neg, Conj, Disj, Forall, Exists]
BINDER_TERMS = (UWitness, EWitness, Eps)
QUANTIFIERS = (Forall, Exists)


def implies(a: Formula, b: Formula) -> Formula:
    return Disj(Neg(a), b)


def big_disj(fs: list) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Disj(out, f)
    return out


def big_conj(fs: list) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Conj(out, f)
    return out


# ---------------------------------------------------------------- traversal helpers

@lru_cache(maxsize=None)
def _contains_eps(x) -> bool:
    if isinstance(x, Var):
        return False
    if isinstance(x, Eps):
        return True
    if isinstance(x, (App, Atom)):
        return any(_contains_eps(a) for a in x.args)
    if isinstance(x, (UWitness, EWitness)):
        return False  # checked at construction
    return any(_contains_eps(c) for c in _children(x))


@lru_cache(maxsize=None)
def _contains_witness(x) -> bool:
    if isinstance(x, Var):
        return False
    if isinstance(x, (UWitness, EWitness)):
        return True
    if isinstance(x, (App, Atom)):
        return any(_contains_witness(a) for a in x.args)
    if isinstance(x, Eps):
        return False
    return any(_contains_witness(c) for c in _children(x))


def _children(f):
    if isinstance(f, Neg):
        return (f.sub,)
    if isinstance(f, (Conj, Disj)):
        return (f.left, f.right)
    if isinstance(f, QUANTIFIERS) or isinstance(f, BINDER_TERMS):
        return (f.body,)
    if isinstance(f, (Atom, App)):
        return f.args
    return ()


def dialect(x) -> str:
    """Return 'base', 'henkin' or 'epsilon' for a term, formula or sequent."""
    if isinstance(x, (SetSequent, MultisetSequent)):
        w = any(_contains_witness(f) for f in x.formulas())
        e = any(_contains_eps(f) for f in x.formulas())
    else:
        w, e = _contains_witness(x), _contains_eps(x)
    if w and e:
        raise DialectError("mixed witness and epsilon syntax")
    return "henkin" if w else "epsilon" if e else "base"


@lru_cache(maxsize=None)
def henkin_level(x) -> int:
    """Level 0 has no witnesses; a witness sits one level above its body."""
    if isinstance(x, Var):
        return 0
    if isinstance(x, (UWitness, EWitness)):
        return henkin_level(x.body) + 1
    return max((henkin_level(c) for c in _children(x)), default=0)


@lru_cache(maxsize=None)
def free_vars(x) -> frozenset:
    if isinstance(x, Var):
        return frozenset((x.name,))
    if isinstance(x, (App, Atom)):
        return frozenset().union(*(free_vars(a) for a in x.args))
    if isinstance(x, QUANTIFIERS) or isinstance(x, BINDER_TERMS):
        return free_vars(x.body) - {x.var}
    if isinstance(x, (SetSequent, MultisetSequent)):
        return frozenset().union(*(free_vars(f) for f in x.formulas()))
    return frozenset().union(*(free_vars(c) for c in _children(x)))


@lru_cache(maxsize=None)
def all_vars(x) -> frozenset:
    """Every variable name occurring anywhere, bound or free."""
    if isinstance(x, Var):
        return frozenset((x.name,))
    if isinstance(x, QUANTIFIERS) or isinstance(x, BINDER_TERMS):
        return all_vars(x.body) | {x.var}
    if isinstance(x, (SetSequent, MultisetSequent)):
        return frozenset().union(*(all_vars(f) for f in x.formulas()))
    return frozenset().union(*(all_vars(c) for c in _children(x)))


def relations(x) -> frozenset:
    if isinstance(x, (SetSequent, MultisetSequent)):
        return frozenset().union(*(relations(f) for f in x.formulas()))
    return _relations(x)


@lru_cache(maxsize=None)
def _relations(x) -> frozenset:
    if isinstance(x, Var):
        return frozenset()
    own = frozenset((x.rel,)) if isinstance(x, Atom) else frozenset()
    return own.union(*(_relations(c) for c in _children(x)))


@lru_cache(maxsize=None)
def functions(x) -> frozenset:
    if isinstance(x, Var):
        return frozenset()
    own = frozenset(((x.fn, len(x.args)),)) if isinstance(x, App) else frozenset()
    return own.union(*(functions(c) for c in _children(x)))


@lru_cache(maxsize=None)
def logical_size(f) -> int:
    """Number of connectives and quantifiers, witness and epsilon bodies excluded."""
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Neg):
        return 1 + logical_size(f.sub)
    if isinstance(f, (Conj, Disj)):
        return 1 + logical_size(f.left) + logical_size(f.right)
    return 1 + logical_size(f.body)


@lru_cache(maxsize=None)
def depth(f) -> int:
    if isinstance(f, Atom):
        return 0
    return 1 + max(depth(c) for c in _children(f) if not isinstance(c, (Var, App) + BINDER_TERMS))


def witnesses(x) -> set:
    """All witness subterms, including those nested in witness bodies."""
    out: set = set()

    def walk(y):
        if isinstance(y, (UWitness, EWitness)):
            out.add(y)
        if not isinstance(y, Var):
            for c in _children(y):
                walk(c)

    if isinstance(x, (SetSequent, MultisetSequent)):
        for f in x.formulas():
            walk(f)
    else:
        walk(x)
    return out


# ---------------------------------------------------------------- substitution

def fresh_var(base: str, avoid) -> str:
    """Least ``base`` + numeric suffix not in ``avoid``; ``base`` itself if free."""
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789") or "v"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def substitute(f, x: str, t):
    """Replace free occurrences of variable ``x`` by ``t``; raise on capture."""
    if x not in free_vars(f):
        return f
    return _subst(f, x, t, free_vars(t))


def _subst(f, x, t, tv):
    if isinstance(f, Var):
        return t if f.name == x else f
    if x not in free_vars(f):
        return f
    if isinstance(f, App):
        return App(f.fn, tuple(_subst(a, x, t, tv) for a in f.args))
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(_subst(a, x, t, tv) for a in f.args))
    if isinstance(f, Neg):
        return Neg(_subst(f.sub, x, t, tv))
    if isinstance(f, (Conj, Disj)):
        return type(f)(_subst(f.left, x, t, tv), _subst(f.right, x, t, tv))
    # binders: x is free in f, so f.var != x
    if f.var in tv:
        raise CaptureError(f"substituting {show(t)} for {x} would capture {f.var} in {show(f)}")
    return type(f)(f.var, _subst(f.body, x, t, tv))


def substitutable(f, x: str, t) -> bool:
    try:
        substitute(f, x, t)
    except CaptureError:
        return False
    return True


def replace_term(f, old, new):
    """Replace every occurrence of the closed term ``old`` by ``new``."""
    if f == old:
        return new
    if isinstance(f, Var):
        return f
    if isinstance(f, App):
        return App(f.fn, tuple(replace_term(a, old, new) for a in f.args))
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(replace_term(a, old, new) for a in f.args))
    if isinstance(f, Neg):
        return Neg(replace_term(f.sub, old, new))
    if isinstance(f, (Conj, Disj)):
        return type(f)(replace_term(f.left, old, new), replace_term(f.right, old, new))
    return type(f)(f.var, replace_term(f.body, old, new))


def alpha_fresh(f, avoid) -> Formula:
    """Rename bound variables so none lies in ``avoid`` or among the free variables.

    Witness and epsilon bodies are left literal: a witness constant is keyed
    by its exact body.
    """
    used = set(avoid) | set(free_vars(f))
    return _alpha(f, used)


def _alpha(f, used):
    if isinstance(f, (Atom, Var, App) + BINDER_TERMS):
        return f
    if isinstance(f, Neg):
        return Neg(_alpha(f.sub, used))
    if isinstance(f, (Conj, Disj)):
        left = _alpha(f.left, used)
        return type(f)(left, _alpha(f.right, used))
    new = fresh_var(f.var, used)
    used.add(new)
    body = substitute(f.body, f.var, Var(new)) if new != f.var else f.body
    return type(f)(new, _alpha(body, used))


def alpha_equivalent(a, b) -> bool:
    return _alpha_eq(a, b, {}, {})


def _alpha_eq(a, b, ma, mb):
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        if a.name in ma or b.name in mb:
            return ma.get(a.name) == b.name and mb.get(b.name) == a.name
        return a.name == b.name
    if isinstance(a, (App, Atom)):
        head = (a.fn, b.fn) if isinstance(a, App) else (a.rel, b.rel)
        return head[0] == head[1] and len(a.args) == len(b.args) and all(
            _alpha_eq(x, y, ma, mb) for x, y in zip(a.args, b.args))
    if isinstance(a, Neg):
        return _alpha_eq(a.sub, b.sub, ma, mb)
    if isinstance(a, (Conj, Disj)):
        return _alpha_eq(a.left, b.left, ma, mb) and _alpha_eq(a.right, b.right, ma, mb)
    if isinstance(a, BINDER_TERMS):
        return a == b
    return _alpha_eq(a.body, b.body, {**ma, a.var: b.var}, {**mb, b.var: a.var})


# ---------------------------------------------------------------- printing

def _pr_term(t) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, App):
        return f"{t.fn}({', '.join(_pr_term(a) for a in t.args)})"
    tag = {UWitness: "wA", EWitness: "wE", Eps: "eps"}[type(t)]
    return f"{tag}[{t.var}. {_pr(t.body, True)}]"


_LEVEL = {Disj: 1, Conj: 2}


def _level(f) -> int:
    if isinstance(f, QUANTIFIERS):
        return 0
    return _LEVEL.get(type(f), 3)


def _operand(g, minlevel, final):
    if isinstance(g, QUANTIFIERS):
        return _pr(g, True) if final else f"({_pr(g, True)})"
    if _level(g) < minlevel:
        return f"({_pr(g, True)})"
    return _pr(g, final)


def _pr(f, final) -> str:
    if isinstance(f, Atom):
        return f.rel if not f.args else f"{f.rel}({', '.join(_pr_term(a) for a in f.args)})"
    if isinstance(f, Neg):
        return "~" + _operand(f.sub, 3, final)
    if isinstance(f, Conj):
        return f"{_operand(f.left, 2, False)} /\\ {_operand(f.right, 3, final)}"
    if isinstance(f, Disj):
        return f"{_operand(f.left, 1, False)} \\/ {_operand(f.right, 2, final)}"
    q = "forall" if isinstance(f, Forall) else "exists"
    text = f"{q} {f.var}. {_pr(f.body, True)}"
    return text if final else f"({text})"


@lru_cache(maxsize=None)
def show(x) -> str:
    if isinstance(x, (Var, App) + BINDER_TERMS):
        return _pr_term(x)
    return _pr(x, True)


# ---------------------------------------------------------------- sequents

def _fkey(f):
    return show(f)


@dataclass(frozen=True, slots=True)
class SetSequent:
    """Pair of finite formula sets; both sides kept sorted by printed text."""
    left: tuple = ()
    right: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(sorted(set(self.left), key=_fkey)))
        object.__setattr__(self, "right", tuple(sorted(set(self.right), key=_fkey)))

    multiset = False

    def formulas(self):
        return self.left + self.right

    def map(self, fn) -> "SetSequent":
        return SetSequent(tuple(fn(f) for f in self.left), tuple(fn(f) for f in self.right))

    def __str__(self):
        return show_sequent(self)


@dataclass(frozen=True, slots=True)
class MultisetSequent:
    """Pair of finite formula multisets, kept as sorted tuples with repetition."""
    left: tuple = ()
    right: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(sorted(self.left, key=_fkey)))
        object.__setattr__(self, "right", tuple(sorted(self.right, key=_fkey)))

    multiset = True

    def formulas(self):
        return self.left + self.right

    def map(self, fn) -> "MultisetSequent":
        return MultisetSequent(tuple(fn(f) for f in self.left), tuple(fn(f) for f in self.right))

    def __str__(self):
        return show_sequent(self)


Sequent = Union[SetSequent, MultisetSequent]


def show_sequent(s) -> str:
    left = ", ".join(show(f) for f in s.left)
    right = ", ".join(show(f) for f in s.right)
    return f"{left} |- {right}".strip()


def sequent_join(s1, s2):
    """Componentwise union (sets) or multiset sum."""
    if type(s1) is not type(s2):
        raise TypeError("cannot join sequents of different flavors")
    return type(s1)(s1.left + s2.left, s1.right + s2.right)


def support(s) -> SetSequent:
    return SetSequent(s.left, s.right)


def as_multiset(s) -> MultisetSequent:
    return MultisetSequent(s.left, s.right)


def subst_sequent(s, x: str, t):
    return s.map(lambda f: substitute(f, x, t))


def multiset_sub(big: tuple, small) -> tuple | None:
    """``big`` minus ``small`` as multisets, or None if ``small`` is not contained."""
    c = Counter(big)
    c.subtract(Counter(small))
    if any(v < 0 for v in c.values()):
        return None
    return tuple(c.elements())


# ---------------------------------------------------------------- signatures

@dataclass
class Signature:
    relations: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    phi0: Formula | None = None

    def __post_init__(self):
        clash = set(self.relations) & set(self.functions)
        if clash:
            raise ValueError(f"symbols used both as relation and function: {sorted(clash)}")

    def validate(self):
        if not self.relations:
            raise ValueError("a signature needs at least one relation symbol")

    @classmethod
    def infer(cls, *objs) -> "Signature":
        rels: dict = {}
        fns: dict = {}

        def walk(y):
            if isinstance(y, Var):
                return
            if isinstance(y, Atom):
                _record(rels, y.rel, len(y.args))
            if isinstance(y, App):
                _record(fns, y.fn, len(y.args))
            for c in _children(y):
                walk(c)

        for o in objs:
            if isinstance(o, (SetSequent, MultisetSequent)):
                for f in o.formulas():
                    walk(f)
            elif isinstance(o, (list, tuple, set, frozenset)):
                for p in o:
                    for f in (p.formulas() if hasattr(p, "formulas") else (p,)):
                        walk(f)
            else:
                walk(o)
        return cls(rels, fns)

    def distinguished_atom(self) -> Formula:
        """The fixed atom used by ``tau`` for the empty sequent."""
        if self.phi0 is not None:
            return self.phi0
        nullary = sorted(r for r, n in self.relations.items() if n == 0)
        if nullary:
            return Atom(nullary[0])
        if self.relations:
            r = min(self.relations)
            return Atom(r, (Var("x"),) * self.relations[r])
        return Atom("R0")


def _record(table, name, arity):
    if table.setdefault(name, arity) != arity:
        raise ValueError(f"symbol {name} used with arities {table[name]} and {arity}")


def tau(s, sig: Signature | None = None) -> Formula:
    """Formula translation of a sequent: negated antecedents then succedents, joined by
    left-associated disjunction; the empty sequent maps to phi0 /\\ ~phi0."""
    parts = [Neg(g) for g in s.left] + list(s.right)
    if not parts:
        phi0 = (sig or Signature()).distinguished_atom()
        return Conj(phi0, Neg(phi0))
    return big_disj(parts)


# ---------------------------------------------------------------- dialect translations

def to_epsilon(x):
    """Henkin syntax to epsilon syntax: wE[x.A] -> eps[x.A], wA[x.A] -> eps[x.~A]."""
    if isinstance(x, (SetSequent, MultisetSequent)):
        return x.map(to_epsilon)
    if _contains_eps(x):
        raise DialectError("to_epsilon expects Henkin syntax")
    return _to_e(x)


@lru_cache(maxsize=None)
def _to_e(x):
    if isinstance(x, Var):
        return x
    if isinstance(x, EWitness):
        return Eps(x.var, _to_e(x.body))
    if isinstance(x, UWitness):
        return Eps(x.var, Neg(_to_e(x.body)))
    return _rebuild(x, _to_e)


def to_henkin(x):
    """Epsilon syntax to Henkin syntax: eps[x.A] -> wE[x.A]."""
    if isinstance(x, (SetSequent, MultisetSequent)):
        return x.map(to_henkin)
    if _contains_witness(x):
        raise DialectError("to_henkin expects epsilon syntax")
    return _to_w(x)


@lru_cache(maxsize=None)
def _to_w(x):
    if isinstance(x, Var):
        return x
    if isinstance(x, Eps):
        return EWitness(x.var, _to_w(x.body))
    return _rebuild(x, _to_w)


def _rebuild(x, fn):
    if isinstance(x, App):
        return App(x.fn, tuple(fn(a) for a in x.args))
    if isinstance(x, Atom):
        return Atom(x.rel, tuple(fn(a) for a in x.args))
    if isinstance(x, Neg):
        return Neg(fn(x.sub))
    if isinstance(x, (Conj, Disj)):
        return type(x)(fn(x.left), fn(x.right))
    return type(x)(x.var, fn(x.body))


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\|-)|(/\\|\\/|->|~|\(|\)|\[|\]|,|\.)|([A-Za-z][A-Za-z0-9_]*))")
_KEYWORDS = {"forall", "exists", "wA", "wE", "eps"}


def _tokenize(text: str):
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(1) or m.group(2) or m.group(3)
        out.append((tok, m.start(m.lastindex)))
        pos = m.end()
    out.append(("<end>", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok

    def end(self):
        if self.peek() != "<end>":
            raise ParseError(f"unexpected trailing {self.peek()!r}", self.pos())

    def formula(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Disj(Neg(left), self.formula())
        return left

    def disj(self):
        left = self.conj()
        while self.peek() == "\\/":
            self.take()
            left = Disj(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek() == "/\\":
            self.take()
            left = Conj(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Neg(self.unary())
        if tok in ("forall", "exists"):
            self.take()
            v = self.variable()
            self.take(".")
            body = self.formula()
            return Forall(v, body) if tok == "forall" else Exists(v, body)
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok[:1].isupper() and tok not in _KEYWORDS:
            pos = self.pos()
            self.take()
            args = self.arglist() if self.peek() == "(" else ()
            self._check(self.sig.relations if self.sig else None, tok, len(args), pos, "relation")
            return Atom(tok, args)
        raise ParseError(f"expected a formula, found {tok!r}", self.pos())

    def variable(self):
        tok, pos = self.toks[self.i]
        if not (tok[:1].islower() and tok not in _KEYWORDS and tok[:1].isalpha()):
            raise ParseError(f"expected a variable, found {tok!r}", pos)
        self.take()
        return tok

    def arglist(self):
        self.take("(")
        args = []
        if self.peek() != ")":
            args.append(self.term())
            while self.peek() == ",":
                self.take()
                args.append(self.term())
        self.take(")")
        return tuple(args)

    def term(self):
        tok, pos = self.toks[self.i]
        if tok in ("wA", "wE", "eps"):
            self.take()
            self.take("[")
            v = self.variable()
            self.take(".")
            body = self.formula()
            self.take("]")
            return {"wA": UWitness, "wE": EWitness, "eps": Eps}[tok](v, body)
        if tok[:1].islower() and tok[:1].isalpha() and tok not in _KEYWORDS:
            self.take()
            fns = self.sig.functions if self.sig else None
            if self.peek() == "(":
                args = self.arglist()
                self._check(fns, tok, len(args), pos, "function")
                return App(tok, args)
            if fns is not None and fns.get(tok) == 0:
                return App(tok, ())
            return Var(tok)
        raise ParseError(f"expected a term, found {tok!r}", pos)

    def _check(self, table, name, arity, pos, kind):
        if table is None:
            return
        if name not in table:
            raise ParseError(f"unknown {kind} symbol {name}", pos)
        if table[name] != arity:
            raise ParseError(f"{kind} {name} has arity {table[name]}, got {arity}", pos)

    def side(self, stop):
        out = []
        if self.peek() in stop:
            return out
        out.append(self.formula())
        while self.peek() == ",":
            self.take()
            out.append(self.formula())
        return out

    def sequent(self, multiset):
        left = self.side(("|-",))
        self.take("|-")
        right = self.side(("<end>",))
        cls = MultisetSequent if multiset else SetSequent
        return cls(tuple(left), tuple(right))


def parse(text: str, sig: Signature | None = None, kind: str = "formula", multiset: bool = False):
    """Parse a term, formula or sequent.  Without a signature, bare lowercase
    names are variables and arities are not checked."""
    p = _Parser(text, sig)
    if kind == "formula":
        out = p.formula()
    elif kind == "term":
        out = p.term()
    elif kind == "sequent":
        out = p.sequent(multiset)
    else:
        raise ValueError(f"unknown kind {kind}")
    p.end()
    return out


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    return parse(text, sig, "formula")


def parse_term(text: str, sig: Signature | None = None):
    return parse(text, sig, "term")


def parse_sequent(text: str, sig: Signature | None = None, multiset: bool = False):
    return parse(text, sig, "sequent", multiset)


def formulas_of(items: Iterable) -> list:
    return [parse_formula(t) if isinstance(t, str) else t for t in items]
