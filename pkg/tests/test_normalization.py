import pytest
from hypothesis import given, settings, strategies as st

from stlogic.calculi import build, check, gid, leaf, node, open_premises
from stlogic.fuzz import MQSTFuzzer
from stlogic.normalization import (
    NormalizationGap, NotNormal, cut_segments, is_normal, main_branch, measure, normalize,
    segments, sequent_rank, tracks,
)
from stlogic.proofio import dump_proof, read_proof
from stlogic.syntax import Var

from conftest import F, FIXTURES, M, summary


def free_vars_of(seq):
    from stlogic.syntax import free_vars
    return set().union(*(free_vars(f) for f in seq.formulas()))


def proof(name):
    return read_proof(FIXTURES / "proofs" / name)[0]


def and_detour():
    a, b = leaf(M("|- P"), "A"), leaf(M("|- Q"), "B")
    conj = build("AndR.down", [a, b], principal=("R", F("P /\\ Q")))
    return build("AndR.up", [conj], principal=("R", F("P /\\ Q")), select=1), a


def nested_chain():
    # ExRE inside the minor of ExRE: the ExRI conclusion runs through both
    b = leaf(M("|- exists x. Q(x)"), "B")
    h2 = leaf(M("|- Q(e2)"), "h2", discharged=True)
    intro = build("ExRI", [h2], principal=("R", F("exists x. Q(x)")), term=Var("e2"))
    inner = node("ExRE", intro.sequent, [b, intro], principal=("R", F("exists x. Q(x)")),
                 eigen="e2", binds="h2")
    a = leaf(M("|- exists x. P(x)"), "A")
    return node("ExRE", inner.sequent, [a, inner], principal=("R", F("exists x. P(x)")),
                eigen="e1", binds="h1")


class TestSegments:
    def test_no_structure(self):
        d = proof("normal_two_premise.proof")
        assert all(len(s) == 1 for s in segments(d))

    def test_partition(self):
        d = proof("nested_sidetracks.proof")
        covered = [p for s in segments(d) for p in s.paths]
        assert sorted(covered) == sorted(set(covered))
        assert len(covered) == d.size()

    def test_contraction_joins(self):
        a = leaf(M("|- P /\\ Q, P /\\ Q"), "A")
        c = build("CR", [a], principal=("R", F("P /\\ Q")))
        e = build("AndR.up", [c], principal=("R", F("P /\\ Q")), select=1)
        seg = next(s for s in segments(e) if len(s) > 1)
        assert seg.paths == ((0, 0), (0,))
        assert not seg.is_cut  # headed by an assumption

    def test_sidetrack_chain(self):
        d = nested_chain()
        check(d, "mqst")
        assert max(len(s) for s in segments(d)) == 3


class TestCutSegments:
    def test_detour(self):
        d, _ = and_detour()
        cuts = cut_segments(d)
        assert len(cuts) == 1
        seg, rank = cuts[0]
        assert rank == sequent_rank(M("|- P /\\ Q")) == 1 and seg.starts_with_intro

    def test_normal(self):
        assert cut_segments(proof("normal_sidetrack.proof")) == []

    def test_gid_head(self):
        g = gid(M("P /\\ Q |- P /\\ Q"), F("P /\\ Q"))
        d = build("AndL.up", [g], principal=("L", F("P /\\ Q")))
        (seg, _), = cut_segments(d)
        assert seg.starts_with_gid


class TestIsNormal:
    def test_examples(self):
        assert is_normal(proof("normal_two_premise.proof"))
        idle = node("ExRE", M("|- Q"), [leaf(M("|- exists x. P(x)"), "A"), leaf(M("|- Q"), "B")],
                    principal=("R", F("exists x. P(x)")), eigen="e", binds="h")
        check(idle, "mqst")
        assert not is_normal(idle)
        assert not is_normal(gid(M("P /\\ Q |- P /\\ Q"), F("P /\\ Q")))


class TestNormalize:
    def test_and_detour(self):
        d, a = and_detour()
        trace = []
        assert normalize(d, trace) == a
        assert [t.kind for t in trace] == ["detour"] and trace[0].after == (0, 0)

    def test_sidetrack_permutation(self):
        d = proof("sidetrack_permute.proof")
        trace = []
        out = normalize(d, trace)
        assert trace[0].kind == "permute-sidetrack"
        assert summary(out, "mqst") == summary(d, "mqst")
        assert is_normal(out) and out.rule == "ExRE"
        assert out.eigen not in free_vars_of(out.sequent)

    def test_normal_unchanged(self):
        for name in ("normal_two_premise.proof", "normal_sidetrack.proof", "normal_nested.proof"):
            d = proof(name)
            assert dump_proof(normalize(d)) == dump_proof(d)

    def test_nested_fixture(self):
        d = proof("nested_sidetracks.proof")
        out = normalize(d)
        assert is_normal(out)
        check(out, "mqst")

    def test_gap_reported(self):
        with pytest.raises(NormalizationGap, match="cannot be permuted"):
            normalize(MQSTFuzzer(40).derivation())


class TestTracks:
    def test_intro_only(self):
        d = proof("normal_two_premise.proof")
        ts = tracks(d)
        assert len(ts) == 2 and all(t.midsegment == 0 for t in ts)

    def test_sidetrack_passes_to_discharged_leaf(self):
        d = proof("normal_sidetrack.proof")
        ts = tracks(d)
        through = [t for t in ts if (0,) in t.paths]
        assert through and any(p[:1] == (1,) for t in through for p in t.paths)

    def test_not_normal(self):
        with pytest.raises(NotNormal):
            tracks(and_detour()[0])


class TestMainBranch:
    def test_single(self):
        d = build("AndL.up", [leaf(M("P /\\ Q |- R"), "A")], principal=("L", F("P /\\ Q")))
        assert main_branch(d) == [(), (0,)]

    def test_chain(self):
        d = leaf(M("|- ~~(P /\\ Q)"), "A")
        d = build("NegR.up", [d], principal=("R", F("~~(P /\\ Q)")))
        d = build("NegL.up", [d], principal=("L", F("~(P /\\ Q)")))
        d = build("AndR.up", [d], principal=("R", F("P /\\ Q")), select=2)
        assert main_branch(d) == [(), (0,), (0, 0), (0, 0, 0)]
        assert main_branch(d)[-1] in [p for t in tracks(d) for p in t.paths]

    def test_intro_root(self):
        with pytest.raises(ValueError):
            main_branch(proof("normal_two_premise.proof"))


@pytest.mark.parametrize("seed", range(60))
def test_normalize_fuzz(seed):
    d = MQSTFuzzer(seed).derivation()
    trace = []
    try:
        out = normalize(d, trace)
    except NormalizationGap:
        return  # documented limitation; counted by the acceptance suite
    check(out, "mqst")
    assert is_normal(out)
    assert out.sequent == d.sequent
    assert {s for _, s in open_premises(out)} <= {s for _, s in open_premises(d)}
    assert all(t.after < t.before for t in trace)
    assert dump_proof(normalize(out)) == dump_proof(out)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_measure_zero_iff_cut_free(seed):
    d = MQSTFuzzer(seed).derivation()
    assert (measure(d) == (0, 0)) == (cut_segments(d) == [])
