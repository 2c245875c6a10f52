"""Translate a Henkin-witness derivation to epsilon terms and back, then
relate a formula with its round-tripped version in both directions."""
from stlogic.calculi import check
from stlogic.fuzz import STHCFuzzer
from stlogic.syntax import parse_formula, show, show_sequent, to_epsilon, to_henkin
from stlogic.transformations import derivation_to_epsilon, derivation_to_sthc, ew_roundtrip

d = STHCFuzzer(1).derivation()
e = derivation_to_epsilon(d)
w = derivation_to_sthc(e)
for name, x, calc in (("witness", d, "sthc"), ("epsilon", e, "e"), ("back", w, "sthc")):
    print(f"{name:8} {calc:5} {x.size():3} nodes  {show_sequent(check(x, calc).conclusion)}")

phi = parse_formula("Q(wA[x. Q(x)]) \\/ P(wE[x. ~Q(x) /\\ Q(wE[x. P(x)])])")
print("\nphi      ", show(phi))
print("phi^E    ", show(to_epsilon(phi)))
print("phi^EW   ", show(to_henkin(to_epsilon(phi))))
pair = ew_roundtrip(phi)
print("forward ", show_sequent(check(pair.forward, "sthc").conclusion))
print("backward", show_sequent(check(pair.backward, "sthc").conclusion))
