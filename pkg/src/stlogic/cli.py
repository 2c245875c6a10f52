"""Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative verdict (proof rejected,
countermodel found, verification failed), 2 usage, parse or budget error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import proofio
from .calculi import CALCULI, RuleViolation, check
from .syntax import ParseError, parse_formula, parse_sequent, show, show_sequent

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _sig(args):
    return proofio.load_signature(_read(args.sig)) if getattr(args, "sig", None) else None


def _emit(fields: list, as_json: bool, out=None):
    """Print (key, value) pairs as ``key: value`` lines or as one JSON object."""
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(dict(fields), indent=2, ensure_ascii=False) + "\n")
        return
    for key, value in fields:
        if isinstance(value, list):
            out.write(f"{key}: {len(value)}\n")
            for item in value:
                out.write(f"  {item}\n")
        else:
            out.write(f"{key}: {value}\n")


def _load_proof(args, calculus=None):
    d, calc = proofio.load_proof(_read(args.proof), calculus or getattr(args, "calculus", None),
                                 _sig(args))
    if calc is None:
        raise UsageError("no calculus given (use --calculus or a 'calculus' key in the file)")
    if calc not in CALCULI:
        raise UsageError(f"unknown calculus {calc!r}; choose from {', '.join(sorted(CALCULI))}")
    return d, calc


def _report_fields(rep):
    return [("calculus", rep.calculus), ("conclusion", show_sequent(rep.conclusion)),
            ("nodes", rep.node_count), ("depth", rep.max_depth),
            ("open premises", [f"{lab}: {show_sequent(s)}" for lab, s in rep.open_premises])]


# ---------------------------------------------------------------- commands

def cmd_check(args):
    d, calc = _load_proof(args)
    try:
        rep = check(d, calc)
    except RuleViolation as err:
        _emit([("verdict", "rejected"), ("path", "/".join(map(str, err.path)) or "root"),
               ("reason", err.reason)], args.json)
        return EXIT_NO
    _emit([("verdict", "accepted")] + _report_fields(rep), args.json)
    return EXIT_OK


def cmd_normalize(args):
    from .normalization import MeasureViolation, NormalizationGap, normalize
    d, calc = _load_proof(args, "mqst")
    if calc != "mqst":
        raise UsageError("normalization is defined for MQST proofs")
    try:
        check(d, "mqst")
    except RuleViolation as err:
        print(f"input rejected: {err}", file=sys.stderr)
        return EXIT_NO
    trace = []
    try:
        n = normalize(d, trace=trace, strict=args.strict)
    except (NormalizationGap, MeasureViolation) as err:
        print(f"normalization failed: {err}", file=sys.stderr)
        return EXIT_NO
    check(n, "mqst")
    if args.trace:
        where = sys.stdout if args.output not in (None, "-") else sys.stderr
        for step in trace:
            print(step.line(), file=where)
        print(f"steps: {len(trace)}", file=where)
    _write(args.output, proofio.dump_proof(n, "mqst"))
    return EXIT_OK


def cmd_interpolate(args):
    from .calculi import open_premises
    from .interpolation import interpolate, verify_interpolation
    from .normalization import NormalizationGap, is_normal, normalize
    d, calc = _load_proof(args, "mqst")
    if calc != "mqst":
        raise UsageError("interpolation is defined for MQST proofs")
    split = proofio.load_split(_read(args.split))
    try:
        check(d, "mqst")
    except RuleViolation as err:
        print(f"input rejected: {err}", file=sys.stderr)
        return EXIT_NO
    if not is_normal(d):
        if args.strict:
            print("input is not normal (run without --strict to normalize first)", file=sys.stderr)
            return EXIT_NO
        print("notice: input is not normal; normalizing first", file=sys.stderr)
        try:
            d = normalize(d)
        except NormalizationGap as err:
            print(f"normalization failed: {err}", file=sys.stderr)
            return EXIT_NO
    opens = open_premises(d)
    unknown = sorted(set(split) - {lab for lab, _ in opens})
    if unknown:
        print("notice: split labels not used by the proof: " + ", ".join(unknown), file=sys.stderr)
    r = interpolate(d, split)
    x1 = [s for lab, s in opens if split.get(lab) == "X1"]
    x2 = [s for lab, s in opens if split.get(lab) == "X2"]
    problems = []
    ok = verify_interpolation(r, x1, x2, d.sequent, problems)
    fields = [("interpolant", [f"{lab}: {show_sequent(s)}"
                               for lab, s in zip(r.member_labels, r.interpolant)]),
              ("shared relations", " ".join(sorted(r.shared_relations))),
              ("shared free variables", " ".join(sorted(r.shared_free_vars))),
              ("verified", "yes" if ok else "no"),
              ("problems", problems)]
    _emit(fields, args.json)
    if args.output:
        for i, dl in enumerate(r.d_left, 1):
            _write(f"{args.output}.left{i}.proof", proofio.dump_proof(dl, "mqst"))
        _write(f"{args.output}.right.proof", proofio.dump_proof(r.d_right, "mqst"))
    return EXIT_OK if ok else EXIT_NO


def cmd_translate(args):
    from .transformations import derivation_to_epsilon, derivation_to_sthc, ew_roundtrip
    if args.roundtrip_ew:
        text = args.input
        try:
            phi = parse_formula(text, _sig(args))
        except ParseError:
            phi = parse_formula(_read(text).strip(), _sig(args))
        pair = ew_roundtrip(phi)
        for part in (pair.forward, pair.backward):
            check(part, "sthc")
        if args.output:
            _write(f"{args.output}.forward.proof", proofio.dump_proof(pair.forward, "sthc"))
            _write(f"{args.output}.backward.proof", proofio.dump_proof(pair.backward, "sthc"))
        else:
            obj = {"forward": proofio.node_to_dict(pair.forward),
                   "backward": proofio.node_to_dict(pair.backward)}
            sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")
        return EXIT_OK
    if args.to is None:
        raise UsageError("translate needs --to epsilon|sthc or --roundtrip-ew")
    args.proof = args.input
    source = "sthc" if args.to == "epsilon" else "e"
    d, calc = _load_proof(args, source)
    try:
        check(d, calc)
    except RuleViolation as err:
        print(f"input rejected: {err}", file=sys.stderr)
        return EXIT_NO
    if calc != source:
        raise UsageError(f"--to {args.to} expects a {source} proof, got {calc}")
    out = derivation_to_epsilon(d) if args.to == "epsilon" else derivation_to_sthc(d)
    target = "e" if args.to == "epsilon" else "sthc"
    check(out, target)
    _write(args.output, proofio.dump_proof(out, target))
    return EXIT_OK


def cmd_countermodel(args):
    from .semantics import BudgetExceeded, Countermodel, consequence_bounded, dump_model
    sig = _sig(args)
    premises, goal = proofio.load_sequents(_read(args.sequents), sig)
    try:
        res = consequence_bounded(premises, goal, args.max_domain, two_valued=args.two_valued,
                                  sig=sig, budget=args.budget)
    except BudgetExceeded as err:
        print(f"budget exhausted: {err}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(res, Countermodel):
        print("countermodel found", file=sys.stderr if args.output in (None, "-") else sys.stdout)
        _write(args.output, dump_model(res.model, res.assignment))
        return EXIT_NO
    note = " (exact for this fragment)" if res.exact else ""
    print(f"no countermodel up to bound {res.bound}{note}; models checked: {res.models_checked}")
    return EXIT_OK


def cmd_eval(args):
    from .semantics import evaluate, load_model, satisfies
    model, assignment = load_model(_read(args.model))
    for item in args.var or []:
        name, sep, elem = item.partition("=")
        if not sep:
            raise UsageError(f"--var expects NAME=ELEMENT, got {item!r}")
        assignment[name.strip()] = elem.strip()
    text = args.expr
    if "|-" in text:
        s = parse_sequent(text, _sig(args))
        ok = satisfies(model, s, assignment)
        print("satisfied" if ok else "not satisfied")
        return EXIT_OK if ok else EXIT_NO
    f = parse_formula(text, _sig(args))
    print(f"{show(f)} = {evaluate(model, assignment, f)}")
    return EXIT_OK


def cmd_roundtrip(args):
    from .semantics import dump_model, load_model
    text = _read(args.file)
    if args.kind == "proof":
        d, calc = proofio.load_proof(text, args.calculus)
        again = proofio.dump_proof(d, calc if '"calculus"' in text else None)
    elif args.kind == "sequents":
        again = proofio.dump_sequents(*proofio.load_sequents(text))
    else:
        again = dump_model(*load_model(text))
    if again == text:
        print("identical")
        return EXIT_OK
    print("differs; re-printed form follows")
    sys.stdout.write(again)
    return EXIT_NO


# ---------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="stlogic",
                                description="Proof checking, normalization and semantics "
                                            "for strict-tolerant first-order logic")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check a proof file")
    c.add_argument("proof")
    c.add_argument("--calculus", choices=sorted(CALCULI))
    c.add_argument("--sig", help="signature file")
    c.add_argument("--json", action="store_true", help="structured report")
    c.set_defaults(func=cmd_check)

    n = sub.add_parser("normalize", help="normalize an MQST proof")
    n.add_argument("proof")
    n.add_argument("--trace", action="store_true", help="print the (r, m) trace")
    n.add_argument("--strict", action="store_true", help="fail if a step does not lower (r, m)")
    n.add_argument("-o", "--output")
    n.add_argument("--sig")
    n.set_defaults(func=cmd_normalize)

    i = sub.add_parser("interpolate", help="interpolating set for a split of the premises")
    i.add_argument("proof")
    i.add_argument("split", help="file with 'label: X1' / 'label: X2' lines")
    i.add_argument("--strict", action="store_true", help="refuse non-normal input")
    i.add_argument("-o", "--output", help="prefix for the certificate proof files")
    i.add_argument("--sig")
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_interpolate)

    t = sub.add_parser("translate", help="translate between ST^HC and E, or witness round trip")
    t.add_argument("input", help="proof file, or a formula (file) with --roundtrip-ew")
    t.add_argument("--to", choices=("epsilon", "sthc"))
    t.add_argument("--roundtrip-ew", action="store_true")
    t.add_argument("-o", "--output")
    t.add_argument("--sig")
    t.set_defaults(func=cmd_translate)

    m = sub.add_parser("countermodel", help="bounded search for a countermodel")
    m.add_argument("sequents", help="file with 'premise:' and 'conclusion:' lines")
    m.add_argument("--max-domain", type=int, default=2)
    m.add_argument("--two-valued", action="store_true")
    m.add_argument("--budget", type=int, default=10 ** 7, help="maximum candidate models")
    m.add_argument("-o", "--output", help="model file to write")
    m.add_argument("--sig")
    m.set_defaults(func=cmd_countermodel)

    e = sub.add_parser("eval", help="evaluate a formula or sequent in a model file")
    e.add_argument("model")
    e.add_argument("expr")
    e.add_argument("--var", action="append", help="NAME=ELEMENT (repeatable)")
    e.add_argument("--sig")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("roundtrip", help="parse and re-print a file, comparing bytes")
    r.add_argument("file")
    r.add_argument("--kind", choices=("proof", "sequents", "model"), default="proof")
    r.add_argument("--calculus", choices=sorted(CALCULI))
    r.set_defaults(func=cmd_roundtrip)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ParseError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
