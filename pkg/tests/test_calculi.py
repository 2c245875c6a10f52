import pytest
from hypothesis import given, settings, strategies as st

from stlogic.calculi import (
    RuleViolation, accepts, apply_rule, build, check, leaf,
    node, open_premises,
)
from stlogic.fuzz import MQSTFuzzer, prop_formulas
from stlogic.proofio import load_proof, read_proof
from stlogic.semantics import decide_st_propositional
from stlogic.syntax import Var, sequent_join, support

from conftest import F, FIXTURES, M, S, T, mutations, paths, summary


def fixture(name):
    return read_proof(FIXTURES / "proofs" / name)


class TestDrinker:
    @pytest.mark.parametrize("name,nodes", [("drinker_stq.proof", 10), ("drinker_sth.proof", 6)])
    def test_accepted(self, name, nodes):
        d, calc = fixture(name)
        rep = check(d, calc)
        assert rep.conclusion == S(" |- exists x. (P(x) -> forall x. P(x))")
        assert rep.open_premises == [] and rep.node_count == nodes

    def test_sth_uses_ewi(self):
        d, _ = fixture("drinker_sth.proof")
        assert [n.rule for n in d.nodes()].count("EWI") == 1
        assert not accepts(d, "stq")

    @pytest.mark.parametrize("name", ["drinker_stq.proof", "drinker_sth.proof"])
    def test_mutations_rejected(self, name):
        d, calc = fixture(name)
        survivors = [(p, w) for p, w, m in mutations(d, calc) if accepts(m, calc)]
        assert survivors == []

    def test_violation_carries_path(self):
        d, calc = fixture("drinker_stq.proof")
        bad = next(m for p, w, m in mutations(d, calc) if p == (0, 0, 0) and w == "eigen")
        with pytest.raises(RuleViolation) as err:
            check(bad, calc)
        assert err.value.path == (0, 0, 0)


class TestApplyRule:
    def test_and_right(self):
        assert apply_rule("AndR.down", [M("G |- D, P"), M("G |- D, Q")],
                          principal=("R", F("P /\\ Q"))) == M("G |- D, P /\\ Q")

    def test_ewi(self):
        out = apply_rule("EWI", [S("G |- D, P(c)")], principal=("R", F("exists x. P(x)")), term=T("c"))
        assert out == S("G |- D, P(wE[x. P(x)])")

    def test_exle(self):
        out = apply_rule("ExLE", [M("exists x. P(x), G |- D")], principal=("L", F("exists x. P(x)")),
                         term=T("f(y)"))
        assert out == M("P(f(y)), G |- D")

    def test_capture(self):
        with pytest.raises(ValueError):
            apply_rule("ExLE", [M("exists x. exists y. R(x, y) |- ")],
                       principal=("L", F("exists x. exists y. R(x, y)")), term=Var("y"))


class TestEigenvariables:
    def test_allri_eigen_in_context(self):
        prem = leaf(M("|- P(y), Q(y)"), "A")
        d = node("AllRI", M("|- forall x. P(x), Q(y)"), [prem], principal=("R", F("forall x. P(x)")),
                 eigen="y")
        with pytest.raises(RuleViolation, match="eigen"):
            check(d, "mqst")

    def test_allri_eigen_in_open_premise(self):
        # y free in an undischarged premise above the rule
        a = leaf(M("Q(y) |- P(y)"), "A")
        g = build("NegL.down", [a], principal=("L", F("~P(y)")))
        d = node("AllRI", M("Q(y), ~forall x. P(x) |- "), [g], principal=("R", F("forall x. P(x)")),
                 eigen="y")
        assert not accepts(d, "mqst")

    def test_sidetrack_condition_covers_minor_premises(self):
        major = leaf(M("|- exists x. P(x)"), "A")
        hyp = leaf(M("|- P(e)"), "h", discharged=True)
        other = leaf(M("|- Q(e)"), "B")
        minor = build("ExRI", [hyp], principal=("R", F("exists x. P(x)")), term=Var("e"))
        ok = node("ExRE", minor.sequent, [major, minor], principal=("R", F("exists x. P(x)")),
                  eigen="e", binds="h")
        assert summary(ok, "mqst") == ("|- exists x. P(x)", ["|- exists x. P(x)"])
        bad_minor = build("ExRI", [other], principal=("R", F("exists x. Q(x)")), term=Var("e"))
        bad = node("ExRE", bad_minor.sequent, [major, bad_minor], principal=("R", F("exists x. P(x)")),
                   eigen="e", binds="h")
        assert not accepts(bad, "mqst")


class TestDischarge:
    def test_open_premises(self):
        d, _ = load_proof((FIXTURES / "proofs" / "sidetrack_permute.proof").read_text())
        assert [lab for lab, _ in open_premises(d)] == ["A"]

    def test_unbound_discharged_leaf_reported_open(self):
        # a subtree cut below its binder keeps the leaf as an open premise
        d = leaf(M("|- P"), "h", discharged=True)
        assert check(d, "mqst").open_premises == [("h", M("|- P"))]

    def test_weakening_not_primitive_in_mqst(self):
        d = node("WL", M("Q |- P"), [leaf(M("|- P"), "A")], principal=("L", F("Q")))
        with pytest.raises(RuleViolation, match="not in calculus"):
            check(d, "mqst")
        d2 = node("WL", S("Q |- P"), [leaf(S("|- P"), "A")], principal=("L", F("Q")))
        assert accepts(d2, "stp")


class TestSequentOps:
    def test_join(self):
        assert sequent_join(S("P |- Q"), S("R |- U")) == S("P, R |- Q, U")
        assert sequent_join(S("P |- Q"), S("P |- Q")) == S("P |- Q")
        assert sequent_join(M("P |- "), M("P |- ")) == M("P, P |- ")
        with pytest.raises(TypeError):
            sequent_join(S("P |- "), M("P |- "))

    def test_support(self):
        assert support(M("P, P |- Q")) == S("P |- Q")
        assert support(M(" |- ")) == S(" |- ")
        assert support(M("P |- P, P, Q")) == S("P |- P, Q")


# ---------------------------------------------------------------- properties

def _reapply(n):
    params = dict(principal=n.principal, term=n.term, eigen=n.eigen, select=n.select)
    return apply_rule(n.rule, [c.sequent for c in n.children],
                      **{k: v for k, v in params.items() if v is not None})


@pytest.mark.parametrize("seed", range(40))
def test_reapply_reproduces_mqst_nodes(seed):
    d = MQSTFuzzer(seed).derivation()
    check(d, "mqst")
    for _, n in paths(d):
        if n.rule in ("Assumption", "Discharged", "GID"):
            continue
        assert _reapply(n) == n.sequent


@pytest.mark.parametrize("seed", range(20))
def test_subtrees_accepted(seed):
    d = MQSTFuzzer(seed, sidetrack_rate=0.4).derivation()
    labels = {lab for lab, _ in open_premises(d)}
    for p, sub in paths(d):
        rep = check(sub, "mqst")
        # a bound leaf whose sidetrack lies outside the subtree is reported as open
        for lab, _ in rep.open_premises:
            assert lab in labels or lab.startswith("h")


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_stp_derivations_sound(seed):
    """Random propositional ST^P derivations from assumptions are locally valid."""
    import random
    rng = random.Random(seed)
    fs = prop_formulas(("P", "Q", "R"), 1)
    a = leaf(S(f"{rng.choice(fs)} |- {rng.choice(fs)}"), "A")
    d = a
    for _ in range(4):
        g = F(str(rng.choice(["P", "Q", "R"])))
        move = rng.randrange(4)
        if move == 0:
            d = build("WL", [d], principal=("L", g))
        elif move == 1:
            d = build("WR", [d], principal=("R", g))
        elif move == 2 and d.sequent.right:
            d = build("NegL.down", [d], principal=("L", F(f"~({d.sequent.right[0]})")))
        elif d.sequent.left:
            d = build("NegR.down", [d], principal=("R", F(f"~({d.sequent.left[0]})")))
    check(d, "stp")
    assert decide_st_propositional([a.sequent], d.sequent)
