from pathlib import Path

import pytest

from stlogic.calculi import check
from stlogic.syntax import parse_formula, parse_sequent, parse_term, show_sequent

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def F(text):
    return parse_formula(text)


def T(text):
    return parse_term(text)


def S(text):
    return parse_sequent(text)


def M(text):
    return parse_sequent(text, multiset=True)


def summary(d, calc):
    """(conclusion text, sorted open premise texts) after checking."""
    rep = check(d, calc)
    return show_sequent(rep.conclusion), sorted(show_sequent(s) for _, s in rep.open_premises)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def replace_at(d, path, new):
    if not path:
        return new
    kids = list(d.children)
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return d.with_children(kids)


def paths(d, prefix=()):
    yield prefix, d
    for i, c in enumerate(d.children):
        yield from paths(c, prefix + (i,))


def mutations(d, calc):
    """Every single-parameter mutation of every node: (path, what, mutated derivation)."""
    from dataclasses import replace as dc_replace

    from stlogic.calculi import CALCULI
    from stlogic.syntax import Var, parse_formula

    alt_formula = parse_formula("Z0")
    for path, n in paths(d):
        variants = []
        for r in sorted(CALCULI[calc]):
            if r != n.rule and r not in ("Assumption", "Discharged"):
                variants.append((f"rule->{r}", dc_replace(n, rule=r)))
        if n.term is not None:
            variants.append(("term", dc_replace(n, term=Var("z9"))))
        if n.eigen is not None:
            variants.append(("eigen", dc_replace(n, eigen="z9")))
        if n.principal is not None:
            side, f = n.principal
            variants.append(("side", dc_replace(n, principal=("L" if side == "R" else "R", f))))
            variants.append(("formula", dc_replace(n, principal=(side, alt_formula))))
        if n.select is not None:
            variants.append(("select", dc_replace(n, select=3 - n.select)))
        for what, m in variants:
            yield path, what, replace_at(d, path, m)


# ---------------------------------------------------------------- acceptance report

ACCEPTANCE = []


def record(number, ok, detail):
    line = f"CRITERION {number} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
