"""Command-line interface.

Exit codes: 0 for affirmative results (valid, provable, proof checks),
1 for negative results, 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import gcalc, nd, sc, signed, translation
from .matrix import (M4, countermodel, degree_consequence, evaluate,
                     load_matrix, matrix_consequence, parse_valuation,
                     render_valuation)
from .sequents import parse_sequent
from .syntax import SyntaxError_, parse, render

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2


class _CliError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tml",
                                 description="four-valued modal logic toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and print it back")
    p.add_argument("formula")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("eval", help="evaluate a formula under a valuation")
    p.add_argument("--valuation", required=True, help='e.g. "p=n,q=b"')
    p.add_argument("formula")

    p = sub.add_parser("valid", help="is the formula designated under every valuation")
    p.add_argument("formula")

    p = sub.add_parser("consequence", help='does G entail D for "G => D"')
    p.add_argument("sequent")
    p.add_argument("--relation", choices=["matrix", "degree"], default="matrix")

    p = sub.add_parser("countermodel", help="find a refuting valuation")
    p.add_argument("sequent", nargs="+",
                   help='either "G => D" or two arguments G and D')

    p = sub.add_parser("prove", help="search for a proof of a sequent")
    p.add_argument("sequent")
    p.add_argument("--calculus", choices=["sc", "g", "sf4"], default="sc")
    p.add_argument("--depth", type=int, default=12,
                   help="height bound for the cut-free G search")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("check", help="check a proof file")
    p.add_argument("file")
    p.add_argument("--calculus", choices=["sc", "g", "sf4", "nd"], required=True)
    p.add_argument("--allow-cut", action="store_true")

    p = sub.add_parser("translate", help="transform a proof file")
    p.add_argument("mode", choices=["contrapose", "sc2nd", "nd2sc", "necessitate"])
    p.add_argument("file")

    p = sub.add_parser("gen-rules", help="emit signed or translated rule sheets")
    p.add_argument("--matrix", help="matrix JSON file (defaults to the bundled one)")
    p.add_argument("--spec", help="expressiveness spec JSON file")
    p.add_argument("--stage", choices=["sf", "two"], default="two")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("probe-cut", help="probe cut necessity for => #(a | ~#a)")
    p.add_argument("--alpha", default="p")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--format", choices=["text", "json"], default="text")

    return ap


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _cmd_parse(args) -> int:
    f = parse(args.formula)
    if args.format == "json":
        print(json.dumps({"ascii": render(f), "unicode": render(f, "unicode")}))
    else:
        print(render(f))
    return EXIT_YES


def _cmd_eval(args) -> int:
    f = parse(args.formula)
    v = parse_valuation(args.valuation)
    print(evaluate(f, v, M4))
    return EXIT_YES


def _cmd_valid(args) -> int:
    f = parse(args.formula)
    ok = matrix_consequence([], [f], M4)
    print("valid" if ok else "not valid")
    return EXIT_YES if ok else EXIT_NO


def _cmd_consequence(args) -> int:
    seq = parse_sequent(args.sequent)
    if args.relation == "degree":
        if len(seq.right) != 1:
            raise _CliError("degree consequence needs exactly one conclusion")
        (phi,) = seq.right
        ok = degree_consequence(seq.left, phi, M4)
    else:
        ok = matrix_consequence(seq.left, seq.right, M4)
    print("holds" if ok else "does not hold")
    return EXIT_YES if ok else EXIT_NO


def _cmd_countermodel(args) -> int:
    if len(args.sequent) == 1:
        seq = parse_sequent(args.sequent[0])
    elif len(args.sequent) == 2:
        gamma, delta = args.sequent
        seq = parse_sequent(f"{gamma} => {delta}")
    else:
        raise _CliError("countermodel takes one sequent or two sides")
    v = countermodel(seq.left, seq.right, M4)
    if v is None:
        print("none")
        return EXIT_YES
    print(render_valuation(v))
    return EXIT_NO


def _cmd_prove(args) -> int:
    seq = parse_sequent(args.sequent)
    if args.calculus == "sc":
        proof = sc.prove(seq)
        if proof is None:
            print("not provable")
            return EXIT_NO
        if args.format == "json":
            print(json.dumps(sc.proof_to_json(proof), indent=2))
        else:
            print(sc.render_proof(proof))
        return EXIT_YES
    if args.calculus == "g":
        if len(seq.right) != 1:
            raise _CliError("the G calculus is single-conclusion")
        (phi,) = seq.right
        proof = gcalc.g_search_cutfree(gcalc.GSequent(seq.left, phi), args.depth)
        if proof is None:
            print(f"no cut-free proof within height {args.depth}")
            return EXIT_NO
        if args.format == "json":
            print(json.dumps(gcalc.g_proof_to_json(proof), indent=2))
        else:
            print(gcalc.render_g_proof(proof))
        return EXIT_YES
    # sf4: embed the two-sided sequent as a 4-sequent goal
    goal = signed.embed_two_sided(seq.left, seq.right, M4).signed_set(M4)
    derivation = signed.sf_prove(goal, M4)
    if derivation is None:
        print("not provable")
        return EXIT_NO
    if args.format == "json":
        print(json.dumps(signed.derivation_to_json(derivation), indent=2))
    else:
        print(signed.render_sf_derivation(derivation))
    return EXIT_YES


def _cmd_check(args) -> int:
    doc = _load_json(args.file)
    if args.calculus == "sc":
        proof = sc.proof_from_json(doc)
        try:
            sc.verify_sc_proof(proof, allow_cut=args.allow_cut)
        except sc.ScCheckError as e:
            print(f"invalid: {e}")
            return EXIT_NO
    elif args.calculus == "g":
        gp = gcalc.g_proof_from_json(doc)
        try:
            gcalc.verify_g_proof(gp, allow_cut=args.allow_cut)
        except gcalc.GCheckError as e:
            print(f"invalid: {e}")
            return EXIT_NO
    elif args.calculus == "sf4":
        sf = signed.derivation_from_json(doc)
        try:
            signed.verify_sf_derivation(sf, M4)
        except signed.SFCheckError as e:
            print(f"invalid: {e}")
            return EXIT_NO
    else:
        ded = nd.nd_from_json(doc)
        result = nd.check_nd(ded)
        if not result.ok:
            print(f"invalid: {result.error}")
            return EXIT_NO
        opens = ", ".join(sorted(f.text for f in result.open)) or "(none)"
        print(f"valid: concludes {result.conclusion.text}; open assumptions: {opens}")
        return EXIT_YES
    print("valid")
    return EXIT_YES


def _cmd_translate(args) -> int:
    doc = _load_json(args.file)
    if args.mode == "contrapose":
        out = sc.proof_to_json(sc.contrapose(sc.proof_from_json(doc)))
    elif args.mode == "necessitate":
        out = sc.proof_to_json(sc.necessitate(sc.proof_from_json(doc)))
    elif args.mode == "sc2nd":
        out = nd.nd_to_json(nd.sc_to_nd(sc.proof_from_json(doc)))
    else:
        out = sc.proof_to_json(nd.nd_to_sc(nd.nd_from_json(doc)))
    print(json.dumps(out, indent=2))
    return EXIT_YES


def _cmd_gen_rules(args) -> int:
    m = load_matrix(args.matrix) if args.matrix else M4
    rules = signed.generate_sf_rules(m)
    if args.stage == "sf":
        doc = [
            {"name": r.name, "kind": r.kind, "connective": r.connective,
             "arg_signs": list(r.arg_signs), "out_sign": r.out_sign}
            for r in rules
        ]
        if args.format == "json":
            print(json.dumps(doc, indent=2))
        else:
            for r in rules:
                if r.kind == "logical":
                    prem = "   ".join(f"W, {s}:x{i}" for i, s in enumerate(r.arg_signs))
                    print(f"[{r.name}]  {prem}  /  W, {r.out_sign}:{r.connective}(...)")
                else:
                    print(f"[{r.name}]  ({r.kind})")
        return EXIT_YES
    spec = translation.spec_from_json(_load_json(args.spec)) if args.spec \
        else translation.m4_spec()
    if not spec.condition_ii_holds(m):
        raise _CliError("expressiveness spec fails its defining condition for this matrix")
    calc = translation.two_of_calculus(rules, spec, m)
    if args.format == "json":
        print(json.dumps(translation.rule_sheet_json(calc), indent=2))
    else:
        print(translation.render_rule_sheet(calc))
    return EXIT_YES


def _cmd_probe_cut(args) -> int:
    alpha = parse(args.alpha)
    report = gcalc.cut_necessity_probe(alpha, args.depth)
    if args.format == "json":
        print(json.dumps({
            "alpha": alpha.text,
            "depth": report.depth,
            "valid": report.valid,
            "g_cutfree_found": report.g_cutfree_found,
            "sc_cutfree_found": report.sc_cutfree_found,
            "vacuous_bound": report.vacuous_bound,
        }, indent=2))
    else:
        print(report)
    supported = report.valid and report.sc_cutfree_found and not report.g_cutfree_found
    return EXIT_YES if supported else EXIT_NO


_COMMANDS = {
    "parse": _cmd_parse,
    "eval": _cmd_eval,
    "valid": _cmd_valid,
    "consequence": _cmd_consequence,
    "countermodel": _cmd_countermodel,
    "prove": _cmd_prove,
    "check": _cmd_check,
    "translate": _cmd_translate,
    "gen-rules": _cmd_gen_rules,
    "probe-cut": _cmd_probe_cut,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (SyntaxError_, ValueError, OSError, KeyError, _CliError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream consumer (head, less) closed the pipe; exit quietly
        import os
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_YES
    sys.exit(code)


if __name__ == "__main__":
    main()
