"""Check both drinker derivations, then break one of them and watch the checker say where."""
import pathlib
from dataclasses import replace

from stlogic.calculi import RuleViolation, check
from stlogic.proofio import read_proof

PROOFS = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "proofs"


def walk(d, path=()):
    yield path, d
    for i, c in enumerate(d.children):
        yield from walk(c, path + (i,))


def put(d, path, new):
    if not path:
        return new
    kids = list(d.children)
    kids[path[0]] = put(kids[path[0]], path[1:], new)
    return d.with_children(kids)


for name in ("drinker_stq.proof", "drinker_sth.proof"):
    d, calc = read_proof(PROOFS / name)
    print(f"== {name}")
    for line in check(d, calc).lines():
        print("   " + line)

# give the first eigenvariable rule a variable that is free below it
d, calc = read_proof(PROOFS / "drinker_stq.proof")
path, n = next((p, n) for p, n in walk(d) if n.eigen is not None)
print(f"\n== {n.rule} at {path}: eigenvariable {n.eigen} -> z9")
try:
    check(put(d, path, replace(n, eigen="z9")), calc)
except RuleViolation as e:
    print(f"   rejected at {e.path}: {e.reason}")
