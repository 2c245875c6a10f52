import pytest
from hypothesis import given, settings, strategies as st

from stlogic.syntax import (
    App, Atom, CaptureError, Conj, Disj, EWitness, Exists, Forall, Neg, ParseError, SetSequent, Signature,
    UWitness, Var, alpha_equivalent, alpha_fresh, free_vars, parse_formula, parse_sequent,
    show, substitute, tau, to_epsilon, to_henkin, witnesses,
)

from conftest import F, S, T

P = lambda *a: Atom("P", tuple(Var(x) if isinstance(x, str) else x for x in a))


class TestParse:
    def test_conjunction(self):
        assert F("P(x) /\\ ~Q") == Conj(P("x"), Neg(Atom("Q")))

    def test_implication_is_sugar(self):
        assert F("P(x) -> forall x. P(x)") == Disj(Neg(P("x")), Forall("x", P("x")))

    def test_witness(self):
        assert T("wA[x. P(x)]") == UWitness("x", P("x"))

    def test_precedence(self):
        assert F("~P /\\ Q \\/ R") == Disj(Conj(Neg(Atom("P")), Atom("Q")), Atom("R"))
        assert F("P -> Q -> R") == F("P -> (Q -> R)")

    def test_binder_extends_right(self):
        assert F("forall x. P(x) /\\ Q") == Forall("x", Conj(P("x"), Atom("Q")))

    def test_errors(self):
        with pytest.raises(ParseError):
            F("P(x")
        with pytest.raises(ParseError):
            F("P(x) /\\")
        sig = Signature({"P": 1}, {})
        for bad in ("P(x, y)", "Q(x)", "P(f(x))"):
            with pytest.raises(ParseError):
                parse_formula(bad, sig)

    def test_sequent(self):
        s = S("P, Q |- R")
        assert set(s.left) == {Atom("P"), Atom("Q")} and s.right == (Atom("R"),)
        m = parse_sequent("P, P |- ", multiset=True)
        assert len(m.left) == 2


class TestFreeVars:
    def test_examples(self):
        assert free_vars(F("forall x. P(x, y)")) == {"y"}
        assert free_vars(T("eps[x. P(x, y)]")) == {"y"}
        assert free_vars(F("P(wA[x. Q(x, z)])")) == {"z"}


class TestSubstitute:
    def test_examples(self):
        assert substitute(F("P(x)"), "x", T("f(y)")) == F("P(f(y))")
        with pytest.raises(CaptureError):
            substitute(F("exists y. R(x, y)"), "x", Var("y"))
        assert substitute(F("P(x) \\/ forall x. Q(x)"), "x", T("c")) == F("P(c) \\/ forall x. Q(x)")


class TestAlpha:
    def test_examples(self):
        assert alpha_fresh(F("forall x. P(x)"), {"x"}) == F("forall x1. P(x1)")
        assert alpha_fresh(F("P(y)"), {"y"}) == F("P(y)")
        g = alpha_fresh(F("exists x. (P(x) /\\ forall x. Q(x))"), {"x", "t0"})
        assert isinstance(g, Exists) and isinstance(g.body.right, Forall)
        assert g.var not in {"x", "t0"} and g.body.right.var not in {"x", "t0", g.var}
        assert alpha_equivalent(g, F("exists x. (P(x) /\\ forall x. Q(x))"))


class TestTau:
    def test_cases(self):
        assert tau(S("A |- B")) == F("~A \\/ B")
        assert tau(S("A, B |- ")) == F("~A \\/ ~B")
        assert tau(S(" |- B")) == F("B")
        assert tau(S(" |- ")) == F("R0 /\\ ~R0")
        sig = Signature({"Q": 0, "P": 1}, {})
        assert tau(S(" |- "), sig) == F("Q /\\ ~Q")

    def test_left_association(self):
        assert tau(S("A |- B, C")) == Disj(Disj(Neg(Atom("A")), Atom("B")), Atom("C"))


class TestDialects:
    def test_to_epsilon(self):
        assert to_epsilon(T("wE[x. P(x)]")) == T("eps[x. P(x)]")
        assert to_epsilon(T("wA[x. P(x)]")) == T("eps[x. ~P(x)]")
        assert to_epsilon(Var("y")) == Var("y")

    def test_to_henkin(self):
        assert to_henkin(T("eps[x. P(x)]")) == T("wE[x. P(x)]")
        assert to_henkin(T("eps[x. ~P(x)]")) == T("wE[x. ~P(x)]")
        assert to_henkin(T("f(y, eps[x. Q(x)])")) == T("f(y, wE[x. Q(x)])")


# ---------------------------------------------------------------- properties

VARS = ("x", "y", "z")


def terms(depth=2):
    base = st.sampled_from([Var(v) for v in VARS])
    if depth == 0:
        return base
    return st.one_of(base, st.builds(lambda t: App("f", (t,)), terms(depth - 1)))


def formulas(depth=3, henkin=False):
    atom = st.one_of(st.builds(lambda t: Atom("P", (t,)), terms(1)),
                     st.builds(lambda a, b: Atom("R", (a, b)), terms(1), terms(1)),
                     st.just(Atom("Q")))
    if depth == 0:
        return atom
    sub = formulas(depth - 1, henkin)
    opts = [atom, st.builds(Neg, sub), st.builds(Conj, sub, sub), st.builds(Disj, sub, sub),
            st.builds(Forall, st.sampled_from(VARS), sub),
            st.builds(Exists, st.sampled_from(VARS), sub)]
    if henkin:
        opts.append(st.builds(lambda v, b, k: Atom("P", ((UWitness if k else EWitness)(v, b),)),
                              st.sampled_from(VARS), sub, st.booleans()))
    return st.one_of(*opts)


@given(formulas(henkin=True))
@settings(max_examples=300)
def test_print_parse_identity(f):
    assert parse_formula(show(f)) == f


@given(formulas(), st.sampled_from(VARS), terms())
@settings(max_examples=300)
def test_free_vars_of_substitution(f, x, t):
    try:
        g = substitute(f, x, t)
    except CaptureError:
        return
    if x in free_vars(f):
        assert free_vars(g) == (free_vars(f) - {x}) | free_vars(t)
    else:
        assert g == f


@given(formulas(henkin=True))
@settings(max_examples=200)
def test_dialect_stratification(f):
    e = to_epsilon(f)
    assert not witnesses(e)
    w = to_henkin(e)
    assert "eps[" not in show(w)


@given(formulas(henkin=True), st.sampled_from(VARS), terms(1))
@settings(max_examples=200)
def test_substitution_commutes_with_epsilon(f, x, t):
    try:
        lhs = to_epsilon(substitute(f, x, t))
    except CaptureError:
        return
    assert lhs == substitute(to_epsilon(f), x, to_epsilon(t))


@given(formulas())
@settings(max_examples=200)
def test_base_dialect_round_trip(f):
    assert to_henkin(to_epsilon(f)) == f


@given(st.lists(formulas(2), max_size=3), st.lists(formulas(2), max_size=3))
@settings(max_examples=200)
def test_tau_free_vars(left, right):
    s = SetSequent(tuple(left), tuple(right))
    if s.left or s.right:
        fv = set().union(*(free_vars(g) for g in s.formulas()))
        assert free_vars(tau(s)) == fv


@given(formulas(), st.sets(st.sampled_from(VARS + ("t0",))))
@settings(max_examples=200)
def test_alpha_fresh_props(f, avoid):
    g = alpha_fresh(f, avoid)
    assert alpha_equivalent(f, g)
    assert free_vars(g) == free_vars(f)
