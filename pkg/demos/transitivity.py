"""Transitivity fails in strict-tolerant logic, and the countermodel is tiny.

From P |- L and L |- Q we may not infer P |- Q: a middle atom at 1/2 is
tolerated on the right of the first premise and on the left of the second.
Classically (two values only) the inference is fine.
"""
from stlogic.semantics import NoneUpToBound, consequence_bounded, dump_model, evaluate
from stlogic.syntax import parse_formula, parse_sequent

premises = [parse_sequent("P |- L"), parse_sequent("L |- Q")]
goal = parse_sequent("P |- Q")

found = consequence_bounded(premises, goal, max_domain=1)
print("three values:")
print(dump_model(found.model).rstrip())
for atom in "PLQ":
    print(f"  {atom} = {evaluate(found.model, {}, parse_formula(atom))}")

classical = consequence_bounded(premises, goal, max_domain=2, two_valued=True)
assert isinstance(classical, NoneUpToBound)
print(f"\ntwo values: no countermodel up to {classical.bound} elements "
      f"({classical.models_checked} models checked)")
