"""Regenerate the files under fixtures/.  Run from the repository root."""
from pathlib import Path

from stlogic.calculi import build, check, leaf, node, gid
from stlogic.fuzz import MQSTFuzzer, STHCFuzzer
from stlogic.normalization import normalize
from stlogic.proofio import dump_proof, dump_sequents, dump_split
from stlogic.transformations import derivation_to_epsilon
from stlogic.semantics import consequence_bounded, dump_model
from stlogic.syntax import (EWitness, Var, parse_formula, parse_sequent,
                            parse_term, show)

ROOT = Path("fixtures")
F = parse_formula


def S(text, multiset=False):
    return parse_sequent(text, multiset=multiset)


def M(text):
    return parse_sequent(text, multiset=True)


def save_proof(name, d, calc):
    check(d, calc)
    (ROOT / "proofs" / name).write_text(dump_proof(d, calc))


def drinker_stq():
    D = F("exists x. (P(x) -> forall x. P(x))")
    n = node("ID", S("P(x) |- P(x)"))
    n = node("WL", S("P(y), P(x) |- P(x)"), [n], principal=("L", F("P(y)")))
    n = node("WR", S("P(y), P(x) |- P(x), forall x. P(x)"), [n], principal=("R", F("forall x. P(x)")))
    n = node("NegR.down", S("P(y) |- P(x), ~P(x), forall x. P(x)"), [n], principal=("R", F("~P(x)")))
    n = node("OrR.down", S("P(y) |- P(x), P(x) -> forall x. P(x)"), [n],
             principal=("R", F("P(x) -> forall x. P(x)")))
    n = node("ExR", S("P(y) |- P(x), exists x. (P(x) -> forall x. P(x))"), [n], principal=("R", D),
             term=Var("x"))
    n = node("AllR", S("P(y) |- forall x. P(x), exists x. (P(x) -> forall x. P(x))"), [n],
             principal=("R", F("forall x. P(x)")), eigen="x")
    n = node("NegR.down", S("|- ~P(y), forall x. P(x), exists x. (P(x) -> forall x. P(x))"), [n],
             principal=("R", F("~P(y)")))
    n = node("OrR.down", S("|- P(y) -> forall x. P(x), exists x. (P(x) -> forall x. P(x))"), [n],
             principal=("R", F("P(y) -> forall x. P(x)")))
    return node("ExR", S("|- exists x. (P(x) -> forall x. P(x))"), [n], principal=("R", D),
                term=Var("y"))


def drinker_sth():
    D = F("exists x. (P(x) -> forall x. P(x))")
    w = "wA[x. P(x)]"
    m = node("ID", S(f"P({w}) |- P({w})"))
    m = node("AllRW.down", S(f"P({w}) |- forall x. P(x)"), [m], principal=("R", F("forall x. P(x)")))
    m = node("NegR.down", S(f"|- ~P({w}), forall x. P(x)"), [m], principal=("R", F(f"~P({w})")))
    m = node("OrR.down", S(f"|- P({w}) -> forall x. P(x)"), [m],
             principal=("R", F(f"P({w}) -> forall x. P(x)")))
    we = show(EWitness("x", D.body))
    m = node("EWI", S(f"|- P({we}) -> forall x. P(x)"), [m], principal=("R", D), term=parse_term(w))
    return node("ExRW.down", S("|- exists x. (P(x) -> forall x. P(x))"), [m], principal=("R", D))


def and_detour():
    # conjunction introduced and immediately eliminated: normalizes to the A leaf
    a, b = leaf(M("|- P"), "A"), leaf(M("|- Q"), "B")
    conj = build("AndR.down", [a, b], principal=("R", F("P /\\ Q")))
    return build("AndR.up", [conj], principal=("R", F("P /\\ Q")), select=1)


def sidetrack_permute():
    # ExRE whose minor ends in an AllRI, followed by AllRE on that formula
    major = leaf(M("|- exists x. P(x)"), "A")
    hyp = leaf(M("|- P(e)"), "h", discharged=True)
    g = gid(M("P(y) |- P(y)"), F("P(y)"))
    g = build("NegR.down", [g], principal=("R", F("~P(y)")))
    g = build("OrR.down", [g], principal=("R", F("~P(y) \\/ P(y)")))
    body = F("P(e) /\\ (~P(y) \\/ P(y))")
    m = build("AndR.down", [hyp, g], principal=("R", body))
    ex = F("exists x. (P(x) /\\ (~P(y) \\/ P(y)))")
    m = build("ExRI", [m], principal=("R", ex), term=Var("e"))
    al = F("forall y. exists x. (P(x) /\\ (~P(y) \\/ P(y)))")
    m = build("AllRI", [m], principal=("R", al), eigen="y")
    st = node("ExRE", m.sequent, [major, m], principal=("R", F("exists x. P(x)")), eigen="e",
              binds="h")
    return build("AllRE", [st], principal=("R", al), term=parse_term("f(u)"))


def one_intro():
    # X1 = {|- P(y)}, conclusion |- exists x. P(x)
    a = leaf(M("|- P(y)"), "A")
    return build("ExRI", [a], principal=("R", F("exists x. P(x)")), term=Var("y"))


def two_premise():
    # additive conjunction over a shared context
    a = leaf(M("|- P(u), Q(u)"), "A")
    b = leaf(M("|- R, Q(u)"), "B")
    c = build("AndR.down", [a, b], principal=("R", F("P(u) /\\ R")))
    return build("ExRI", [c], principal=("R", F("exists x. (P(x) /\\ R)")), term=Var("u"))


def main():
    for sub in ("proofs", "models", "sequents", "splits"):
        (ROOT / sub).mkdir(parents=True, exist_ok=True)
    save_proof("drinker_stq.proof", drinker_stq(), "stq")
    save_proof("drinker_sth.proof", drinker_sth(), "sth")
    save_proof("and_detour.proof", and_detour(), "mqst")
    save_proof("sidetrack_permute.proof", sidetrack_permute(), "mqst")
    nested = MQSTFuzzer(2, sidetrack_rate=0.6).derivation(14)
    save_proof("nested_sidetracks.proof", nested, "mqst")
    save_proof("normal_one_intro.proof", one_intro(), "mqst")
    save_proof("normal_two_premise.proof", two_premise(), "mqst")
    save_proof("normal_sidetrack.proof", normalize(sidetrack_permute()), "mqst")
    save_proof("normal_nested.proof", normalize(nested), "mqst")
    sthc = STHCFuzzer(5).derivation()
    save_proof("sthc_sample.proof", sthc, "sthc")
    save_proof("epsilon_sample.proof", derivation_to_epsilon(sthc), "e")

    (ROOT / "splits" / "one_intro.split").write_text(dump_split({"A": "X1"}))
    (ROOT / "splits" / "two_premise.split").write_text(dump_split({"A": "X1", "B": "X2"}))

    seqs = {
        "transitivity.seq": ([S("P |- L"), S("L |- Q")], S("P |- Q")),
        "identity.seq": ([], S("P |- P")),
        "drinker.seq": ([], S("|- exists x. (P(x) -> forall x. P(x))")),
        "excluded_middle.seq": ([], S("|- P \\/ ~P")),
        "explosion.seq": ([], S("P /\\ ~P |- ")),
    }
    for name, (prem, goal) in seqs.items():
        (ROOT / "sequents" / name).write_text(dump_sequents(prem, goal))
    prem, goal = seqs["transitivity.seq"]
    cm = consequence_bounded(prem, goal, 1)
    (ROOT / "models" / "transitivity_counter.model").write_text(dump_model(cm.model, cm.assignment))


if __name__ == "__main__":
    main()
