"""Reading and writing proof, sequent-list, split and signature files."""
from __future__ import annotations

import json

from .calculi import MULTISET_CALCULI, Derivation
from .syntax import (
    ParseError, Signature, parse_formula, parse_sequent, parse_term, show,
    show_sequent,
)


# ---------------------------------------------------------------- proofs

def node_to_dict(d: Derivation) -> dict:
    params = {}
    if d.term is not None:
        params["term"] = show(d.term)
    if d.eigen is not None:
        params["eigen"] = d.eigen
    if d.principal is not None:
        params["principal"] = f"{d.principal[0]}:{show(d.principal[1])}"
    if d.select is not None:
        params["select"] = d.select
    if d.label is not None:
        params["label"] = d.label
    if d.binds is not None:
        params["binds"] = d.binds
    out = {"rule": d.rule, "sequent": show_sequent(d.sequent)}
    if params:
        out["params"] = params
    if d.children:
        out["children"] = [node_to_dict(c) for c in d.children]
    return out


def node_from_dict(obj: dict, multiset: bool, sig: Signature | None = None) -> Derivation:
    if not isinstance(obj, dict) or "rule" not in obj or "sequent" not in obj:
        raise ParseError("proof node needs 'rule' and 'sequent'")
    params = dict(obj.get("params", {}))
    unknown = set(params) - {"term", "eigen", "principal", "select", "label", "binds"}
    if unknown:
        raise ParseError(f"unknown parameters {sorted(unknown)}")
    kw = {}
    if "term" in params:
        kw["term"] = parse_term(params["term"], sig)
    if "eigen" in params:
        kw["eigen"] = str(params["eigen"])
    if "principal" in params:
        side, _, text = str(params["principal"]).partition(":")
        if side not in ("L", "R"):
            raise ParseError(f"principal must start with L: or R:, got {params['principal']!r}")
        kw["principal"] = (side, parse_formula(text, sig))
    if "select" in params:
        if params["select"] not in (1, 2):
            raise ParseError("select must be 1 or 2")
        kw["select"] = params["select"]
    for k in ("label", "binds"):
        if k in params:
            kw[k] = str(params[k])
    children = tuple(node_from_dict(c, multiset, sig) for c in obj.get("children", []))
    return Derivation(str(obj["rule"]), parse_sequent(obj["sequent"], sig, multiset), children, **kw)


def dump_proof(d: Derivation, calculus: str | None = None) -> str:
    obj = node_to_dict(d)
    if calculus is not None:
        obj = {"calculus": calculus, **obj}
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def load_proof(text: str, calculus: str | None = None, sig: Signature | None = None):
    """Return (derivation, calculus).  The explicit argument wins over the file's key."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid proof file: {e.msg}", e.pos) from None
    calc = calculus or obj.get("calculus")
    return node_from_dict(obj, calc in MULTISET_CALCULI, sig), calc


def read_proof(path, calculus=None, sig=None):
    with open(path, encoding="utf-8") as fh:
        return load_proof(fh.read(), calculus, sig)


# ---------------------------------------------------------------- sequent lists

def load_sequents(text: str, sig: Signature | None = None, multiset: bool = False):
    """Lines ``premise: S`` and one ``conclusion: S``; ``#`` starts a comment."""
    premises, conclusion = [], None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep or key.strip() not in ("premise", "conclusion"):
            raise ParseError(f"line {n}: expected 'premise:' or 'conclusion:'")
        s = parse_sequent(rest, sig, multiset)
        if key.strip() == "premise":
            premises.append(s)
        elif conclusion is not None:
            raise ParseError(f"line {n}: more than one conclusion")
        else:
            conclusion = s
    if conclusion is None:
        raise ParseError("no conclusion line")
    return premises, conclusion


def dump_sequents(premises, conclusion) -> str:
    lines = [f"premise: {show_sequent(p)}" for p in premises]
    lines.append(f"conclusion: {show_sequent(conclusion)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- splits and signatures

def load_split(text: str) -> dict:
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label, sep, tag = line.partition(":")
        tag = tag.strip()
        if not sep or tag not in ("X1", "X2"):
            raise ParseError(f"line {n}: expected 'label: X1' or 'label: X2'")
        out[label.strip()] = tag
    return out


def dump_split(split: dict) -> str:
    return "".join(f"{k}: {v}\n" for k, v in sorted(split.items()))


def load_signature(text: str) -> Signature:
    """Lines ``rel NAME ARITY``, ``fn NAME ARITY`` and optionally ``phi0 FORMULA``."""
    rels, fns, phi0_text = {}, {}, None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if parts[0] == "phi0" and len(parts) == 2:
            phi0_text = parts[1]
            continue
        bits = line.split()
        if len(bits) != 3 or bits[0] not in ("rel", "fn") or not bits[2].isdigit():
            raise ParseError(f"line {n}: expected 'rel NAME ARITY' or 'fn NAME ARITY'")
        table = rels if bits[0] == "rel" else fns
        if bits[1] in table:
            raise ParseError(f"line {n}: duplicate symbol {bits[1]}")
        table[bits[1]] = int(bits[2])
    sig = Signature(rels, fns)
    sig.validate()
    if phi0_text is not None:
        sig.phi0 = parse_formula(phi0_text, sig)
    return sig
