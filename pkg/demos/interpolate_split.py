"""Split the premises of a normal derivation and compute a sequent-set interpolant."""
import pathlib

from stlogic.calculi import check
from stlogic.interpolation import interpolate, verify_interpolation
from stlogic.proofio import load_split, read_proof
from stlogic.syntax import show_sequent

FIX = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

d, _ = read_proof(FIX / "proofs" / "normal_two_premise.proof")
split = load_split((FIX / "splits" / "two_premise.split").read_text())
rep = check(d, "mqst")
x1 = [s for lab, s in rep.open_premises if split[lab] == "X1"]
x2 = [s for lab, s in rep.open_premises if split[lab] == "X2"]
print("X1:", "; ".join(map(show_sequent, x1)))
print("X2:", "; ".join(map(show_sequent, x2)))
print("S: ", show_sequent(rep.conclusion))

r = interpolate(d, split)
for line in r.lines():
    print(line)

problems = []
print("verified:", verify_interpolation(r, x1, x2, rep.conclusion, problems), problems or "")
for i, left in enumerate(r.d_left):
    print(f"  X1 derives member {i} in {left.size()} nodes")
print(f"  members and X2 derive S in {r.d_right.size()} nodes")
