"""Normalize a derivation with three nested sidetracks and print each reduction."""
import pathlib

from stlogic.calculi import check
from stlogic.normalization import cut_segments, is_normal, measure, normalize
from stlogic.proofio import read_proof

d, _ = read_proof(pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "proofs" / "nested_sidetracks.proof")
print(f"input: {d.size()} nodes, measure {measure(d)}, {len(cut_segments(d))} cut segments")

trace = []
out = normalize(d, trace)
for step in trace:
    print("  " + step.line())

rep = check(out, "mqst")
print(f"output: {out.size()} nodes, normal={is_normal(out)}, "
      f"{len(rep.open_premises)} open premises, same conclusion={rep.conclusion == d.sequent}")
