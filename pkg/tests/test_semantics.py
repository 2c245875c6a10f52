import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stlogic.semantics import (
    BudgetExceeded, Countermodel, FiniteSTModel, NoneUpToBound, UnsupportedOpenWitness,
    consequence_bounded, decide_st_propositional, dump_model, enumerate_models, evaluate,
    henkin_equations_hold, henkin_expand, henkin_expansions, load_model, lp_consequence,
    satisfies,
)
from stlogic.syntax import Atom, Conj, Disj, Neg, SetSequent, Signature

from conftest import F, S, T

HALF = Fraction(1, 2)
DRINKER = F("exists x. (P(x) -> forall x. P(x))")


def unary(values):
    dom = tuple(values)
    return FiniteSTModel(dom, {}, {"P": {(d,): v for d, v in values.items()}})


def prop(**vals):
    return FiniteSTModel(("a",), {}, {k: {(): v} for k, v in vals.items()})


class TestEvaluate:
    def test_negation(self):
        assert evaluate(prop(P=2), {}, F("~P")) == 0

    def test_drinker_values(self):
        # frozen from the brute-force oracle in test_evaluate_matches_oracle
        assert evaluate(unary({"a": 2, "b": 0}), {}, DRINKER) == 1
        assert evaluate(unary({"a": 2, "b": 1}), {}, DRINKER) == HALF

    def test_connective_tables(self):
        vals = (0, 1, 2)
        for u, v in itertools.product(vals, vals):
            m = prop(A=u, B=v)
            a, b = Fraction(u, 2), Fraction(v, 2)
            assert evaluate(m, {}, F("~A")) == 1 - a
            assert evaluate(m, {}, F("A /\\ B")) == min(a, b)
            assert evaluate(m, {}, F("A \\/ B")) == max(a, b)

    def test_unassigned_variable(self):
        with pytest.raises(KeyError):
            evaluate(unary({"a": 2}), {}, F("P(x)"))


class TestSatisfies:
    def test_transitivity_failure(self):
        m = prop(P=2, L=1, Q=0)
        assert satisfies(m, S("P |- L"))
        assert satisfies(m, S("L |- Q"))
        assert not satisfies(m, S("P |- Q"))

    def test_identity_and_empty(self):
        for v in (0, 1, 2):
            assert satisfies(prop(P=v), S("P |- P"))
        assert not satisfies(prop(P=1), S(" |- "))


class TestConsequence:
    def test_transitivity_countermodel(self):
        r = consequence_bounded([S("P |- L"), S("L |- Q")], S("P |- Q"), 1)
        assert isinstance(r, Countermodel)
        tables = r.model.rel_tables
        assert (tables["P"][()], tables["L"][()], tables["Q"][()]) == (2, 1, 0)

    def test_identity(self):
        for n in (1, 2, 3):
            assert isinstance(consequence_bounded([], S("P(x) |- P(x)"), n), NoneUpToBound)

    def test_drinker_domain_3(self):
        r = consequence_bounded([], S(" |- exists x. (P(x) -> forall x. P(x))"), 3)
        assert isinstance(r, NoneUpToBound) and r.bound == 3

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            consequence_bounded([], S(" |- exists x. (P(x) -> forall x. P(x))"), 3, budget=5)

    def test_two_valued_restricts(self):
        # transitivity holds classically
        r = consequence_bounded([S("P |- L"), S("L |- Q")], S("P |- Q"), 1, two_valued=True)
        assert isinstance(r, NoneUpToBound) and r.exact

    def test_first_order_counter(self):
        r = consequence_bounded([], S("exists x. P(x) |- forall x. P(x)"), 2)
        assert isinstance(r, Countermodel) and len(r.model.domain) == 2


class TestHenkin:
    def test_witness_choice(self):
        m = henkin_expand(unary({"a": 2, "b": 0}), [T("wA[x. P(x)]"), T("wE[x. P(x)]")])
        assert m.witness_tables[T("wA[x. P(x)]")] == "b"
        assert m.witness_tables[T("wE[x. P(x)]")] == "a"
        assert henkin_equations_hold(m)

    def test_tie_breaks_to_least(self):
        m = henkin_expand(unary({"a": 2, "b": 2}), [T("wA[x. P(x)]")])
        assert m.witness_tables[T("wA[x. P(x)]")] == "a"
        assert len(list(henkin_expansions(unary({"a": 2, "b": 2}), [T("wA[x. P(x)]")]))) == 2

    def test_nested(self):
        m = FiniteSTModel(("a", "b"), {}, {"P": {("a",): 0, ("b",): 2}, "Q": {("a",): 1, ("b",): 2}})
        w = T("wE[x. P(x) /\\ forall y. Q(y)]")
        m2 = henkin_expand(m, [w])
        assert m2.witness_tables[w] == "b"
        assert henkin_equations_hold(m2)

    def test_open_witness_rejected(self):
        with pytest.raises(UnsupportedOpenWitness):
            henkin_expand(unary({"a": 2}), [T("wA[x. R(x, y)]")])


class TestPropositional:
    def test_st_examples(self):
        assert decide_st_propositional([S(" |- P /\\ Q")], S(" |- P"))
        assert not decide_st_propositional([S("P |- Q"), S("Q |- R")], S("P |- R"))
        assert decide_st_propositional([], S(" |- P \\/ ~P"))

    def test_lp_examples(self):
        assert not lp_consequence([F("P"), F("~P \\/ Q")], F("Q"))
        assert lp_consequence([F("P /\\ Q")], F("P"))
        assert lp_consequence([], F("P \\/ ~P"))


class TestModelFiles:
    def test_round_trip(self):
        m = FiniteSTModel(("a", "b"), {"f": {("a",): "b", ("b",): "a"}},
                          {"P": {("a",): 1, ("b",): 2}, "Q": {(): 0}})
        m = henkin_expand(m, [T("wA[x. P(f(x))]")])
        text = dump_model(m, {"y": "a"})
        m2, a2 = load_model(text)
        assert a2 == {"y": "a"}
        assert dump_model(m2, a2) == text
        assert evaluate(m2, a2, F("P(f(y)) /\\ P(f(wA[x. P(f(x))]))")) == HALF


# ---------------------------------------------------------------- properties

def oracle_value(model, assignment, f):
    """Independent evaluator: recursion on the printed structure with plain floats."""
    from stlogic.syntax import Forall
    if isinstance(f, Atom):
        args = tuple(assignment[t.name] for t in f.args)
        return model.rel_tables[f.rel][args] / 2
    if isinstance(f, Neg):
        return 1 - oracle_value(model, assignment, f.sub)
    if isinstance(f, (Conj, Disj)):
        pick = min if isinstance(f, Conj) else max
        return pick(oracle_value(model, assignment, f.left), oracle_value(model, assignment, f.right))
    vals = [oracle_value(model, {**assignment, f.var: d}, f.body) for d in model.domain]
    return min(vals) if isinstance(f, Forall) else max(vals)


def fo_formulas(depth=3):
    from stlogic.syntax import Exists, Forall, Var
    atom = st.builds(lambda v: Atom("P", (Var(v),)), st.sampled_from("xy"))
    if depth == 0:
        return atom
    sub = fo_formulas(depth - 1)
    return st.one_of(atom, st.builds(Neg, sub), st.builds(Conj, sub, sub), st.builds(Disj, sub, sub),
                     st.builds(Forall, st.sampled_from("xy"), sub),
                     st.builds(Exists, st.sampled_from("xy"), sub))


@given(fo_formulas(), st.lists(st.sampled_from((0, 1, 2)), min_size=1, max_size=3),
       st.sampled_from("abc"), st.sampled_from("abc"))
@settings(max_examples=300)
def test_evaluate_matches_oracle(f, vals, ex, ey):
    dom = tuple("abc"[: len(vals)])
    m = FiniteSTModel(dom, {}, {"P": {(d,): v for d, v in zip(dom, vals)}})
    a = {"x": ex if ex in dom else dom[0], "y": ey if ey in dom else dom[0]}
    assert float(evaluate(m, a, f)) == oracle_value(m, a, f)


@given(st.lists(fo_formulas(2), max_size=2), st.lists(fo_formulas(2), max_size=2), fo_formulas(2),
       st.booleans())
@settings(max_examples=100)
def test_weakening_semantically_sound(left, right, extra, on_left):
    s = SetSequent(tuple(left), tuple(right))
    t = SetSequent(tuple(left) + ((extra,) if on_left else ()), tuple(right) + (() if on_left else (extra,)))
    sig = Signature({"P": 1}, {})
    for m in enumerate_models(sig, 2):
        for d1 in m.domain:
            for d2 in m.domain:
                a = {"x": d1, "y": d2}
                if satisfies(m, s, a):
                    assert satisfies(m, t, a)


def test_henkin_equations_property():
    sig = Signature({"P": 1, "Q": 1}, {})
    ws = [T("wA[x. P(x)]"), T("wE[x. P(x) /\\ ~Q(x)]"), T("wA[y. Q(y) \\/ P(wE[x. P(x)])]")]
    for m in enumerate_models(sig, 2):
        assert henkin_equations_hold(henkin_expand(m, ws))
