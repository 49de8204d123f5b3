"""Command-line front end.

Exit codes: 0 success, 1 negative result (countermodel, violation, failed
check), 2 usage or input error, 3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Sequence

from .algebra import FiniteAlgebra, algebra_from_json, check_algebra_json, lukasiewicz
from .decide import MODES, VALIDITY, bounded_validity, onestep_sound_bounded, prop_consequence
from .errors import BlowUp, ModalLogicError
from .filtration import check_filtration_lemma, filtrate, fmp_bound
from .proof import (check_proof, congruence_rule, monotonicity_rule, proof_document_from_json,
                    rule_from_json, system_from_json)
from .semantics.functors import KINDS
from .semantics.liftings import FLOOR, STRICT, ProbPolicy
from .semantics.model import evaluate, model_from_json, model_to_json
from .syntax import Flavor, closure, parse, parse_any, to_text

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


_SHORTHAND = re.compile(r"^(?:L|Ł|lukasiewicz:?)(\d+)$")


def _algebra(spec: str) -> FiniteAlgebra:
    """An algebra file, or the shorthand ``L3`` / ``lukasiewicz:3``."""
    m = _SHORTHAND.match(spec)
    if m and not Path(spec).exists():
        return lukasiewicz(int(m.group(1)))
    return algebra_from_json(_read_json(spec))


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _formula_texts(inline: Sequence[str] | None, path: str | None) -> list[str]:
    texts = list(inline or [])
    if path:
        try:
            lines = Path(path).read_text(encoding="utf-8").splitlines()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from None
        texts += [t for t in map(_strip_comment, lines) if t]
    return texts


def _one_formula(args) -> str:
    texts = _formula_texts([args.formula] if args.formula else None, args.formula_file)
    if len(texts) != 1:
        raise InputError("give exactly one formula with --formula or --formula-file")
    return texts[0]


def _policy(args) -> ProbPolicy:
    return ProbPolicy(args.prob_mode, floored=[] if args.prob_mode == FLOOR else None)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_algebra_check(args) -> int:
    report = check_algebra_json(_read_json(args.algebra))
    payload = {"ok": report.ok, "laws": [
        {"law": c.law, "passed": c.passed, "witness": list(c.witness) if c.witness else None}
        for c in report.checks]}
    _emit(args, payload, f"{report}\nalgebra: {'PASS' if report.ok else 'FAIL'}")
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def _load_model(path: str):
    obj = _read_json(path)
    if isinstance(obj, dict) and "witness" in obj and "model" in obj.get("witness", {}):
        obj = obj["witness"]["model"]  # a verdict written by `validity --json`
    return model_from_json(obj)


def cmd_eval(args) -> int:
    model = _load_model(args.model)
    alg = model.algebra
    phi = parse_any(_one_formula(args), alg)
    policy = _policy(args)
    ext = evaluate(model, phi, policy)
    payload = {"formula": to_text(phi), "values": {s: alg.json_value(v) for s, v in zip(model.states, ext)}}
    if policy.floored:
        payload["floored_sums"] = sorted({str(q) for q in policy.floored})
    _emit(args, payload, "\n".join(f"{s}: {alg.format_value(v)}" for s, v in zip(model.states, ext)))
    return EXIT_OK


def cmd_taut(args) -> int:
    alg = _algebra(args.algebra)
    phi = parse(_one_formula(args), flavor=args.flavor, algebra=alg)
    hyps = [parse(h, flavor=args.flavor, algebra=alg) for h in args.hyp or []]
    res = prop_consequence(alg, hyps, phi, args.flavor)
    payload = {"formula": to_text(phi), "hypotheses": [to_text(h) for h in hyps], "holds": res.holds,
               "assignments": res.assignments}
    if res.holds:
        text = f"valid: {to_text(phi)} holds in every assignment ({res.assignments} checked)"
    else:
        payload["witness"] = {p: alg.json_value(v) for p, v in res.witness.items()}
        payload["value"] = alg.json_value(res.value)
        w = ", ".join(f"{p}={alg.format_value(v)}" for p, v in res.witness.items())
        text = f"not valid: value {alg.format_value(res.value)} at {w or 'the empty assignment'}"
    _emit(args, payload, text)
    return EXIT_OK if res.holds else EXIT_NEGATIVE


def cmd_filter(args) -> int:
    model = _load_model(args.model)
    alg = model.algebra
    texts = _formula_texts(args.formula, args.formulas)
    phi = closure([parse_any(t, alg) for t in texts], args.flavor, alg)
    policy = _policy(args)
    result = filtrate(model, phi, policy=policy)
    mapping = result.mapping(model)
    quotient = model_to_json(result.quotient)
    payload = {"closure_size": len(phi), "classes": len(result.classes), "quotient": quotient,
               "mapping": mapping}
    lines = [f"closure size {len(phi)}; {model.n} states -> {len(result.classes)} classes"]
    lines += [f"  {s} -> {c}" for s, c in mapping.items()]
    status = EXIT_OK
    if args.verify:
        report = check_filtration_lemma(model, phi, result, policy)
        payload["filtration_lemma"] = {
            "ok": report.ok, "checked": report.checked, "bound": report.bound,
            "violations": [{"formula": to_text(f), "state": s, "model": alg.json_value(v),
                            "quotient": alg.json_value(w)} for f, s, v, w in report.violations]}
        lines.append(report.describe(alg))
        status = EXIT_OK if report.ok else EXIT_NEGATIVE
    if args.output:
        out = Path(args.output)
        out.write_text(json.dumps(quotient, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        side = out.with_name(out.stem + ".map.json")
        side.write_text(json.dumps(mapping, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        lines.append(f"quotient written to {out}, mapping to {side}")
    else:
        lines.append(json.dumps(quotient, indent=2, ensure_ascii=False))
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_fmp_bound(args) -> int:
    alg = _algebra(args.algebra)
    phi = parse(_one_formula(args), flavor=args.flavor, algebra=alg)
    b = fmp_bound(phi, alg, args.flavor)
    payload = {"formula": to_text(phi), "flavor": Flavor.parse(args.flavor).value, "k": b.k,
               "closure_size": b.closure_size, "formula_size": b.formula_size, "bound": b.bound,
               "convention": b.convention}
    _emit(args, payload, f"bound {b.bound} = {b.k}^{b.closure_size} (closure size {b.closure_size}; "
                         f"{b.convention})")
    return EXIT_OK


def cmd_validity(args) -> int:
    alg = _algebra(args.algebra)
    phi = parse(_one_formula(args), flavor=args.flavor, algebra=alg)
    verdict = bounded_validity(phi, args.functor, alg, args.max_states, mode=args.mode,
                               policy=_policy(args), eval_cap=args.max_evaluations,
                               granularity=args.granularity, flavor=args.flavor)
    _emit(args, verdict.to_json(), verdict.describe())
    return EXIT_NEGATIVE if verdict.negative else EXIT_OK


def _rule(spec: str, alg: FiniteAlgebra):
    m = re.fullmatch(r"([CM])_(\w+)", spec)
    if m and not Path(spec).exists():
        make = congruence_rule if m.group(1) == "C" else monotonicity_rule
        return make(m.group(2))
    return rule_from_json(_read_json(spec), alg)


def cmd_onestep_sound(args) -> int:
    alg = _algebra(args.algebra)
    rule = _rule(args.rule, alg)
    verdict = onestep_sound_bounded(rule, args.functor, alg, args.max_states, policy=_policy(args),
                                    eval_cap=args.max_evaluations, granularity=args.granularity)
    _emit(args, verdict.to_json(), f"{rule}\n{verdict.describe()}")
    return EXIT_NEGATIVE if verdict.negative else EXIT_OK


def cmd_proof_check(args) -> int:
    alg = _algebra(args.algebra)
    system = system_from_json(_read_json(args.system), alg)
    hyps, tree = proof_document_from_json(_read_json(args.proof), alg)
    hyps += [parse_any(h, alg) for h in args.hyp or []]
    result = check_proof(system, hyps, tree, alg)
    payload = {"ok": result.ok, "nodes": tree.nodes(), "root": to_text(tree.formula)}
    if result.ok:
        text = f"proof OK: {tree.nodes()} nodes, root {to_text(tree.formula)}"
    else:
        e = result.error
        payload["error"] = {"path": list(e.path), "index": e.index, "kind": e.kind, "message": e.message}
        text = f"proof REJECTED at {e}"
    _emit(args, payload, text)
    return EXIT_OK if result.ok else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="accepted for uniformity; the CLI is deterministic")

    formula = argparse.ArgumentParser(add_help=False)
    formula.add_argument("--formula", help="formula text")
    formula.add_argument("--formula-file", help="file holding the formula (# starts a comment)")

    flavor = argparse.ArgumentParser(add_help=False)
    flavor.add_argument("--flavor", default="basic", choices=[f.value for f in Flavor])

    prob = argparse.ArgumentParser(add_help=False)
    prob.add_argument("--prob-mode", default=STRICT, choices=[STRICT, FLOOR],
                      help="what prob does with sums outside the algebra (default: strict, an error)")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--functor", required=True, choices=KINDS)
    search.add_argument("--algebra", required=True, help="algebra JSON file or shorthand such as L3")
    search.add_argument("--max-states", type=int, default=2)
    search.add_argument("--granularity", type=int, default=2, help="denominator for enumerated distributions")
    search.add_argument("--max-evaluations", type=int, default=None,
                        help="evaluation cap (default from $MVMODAL_MAX_EVALUATIONS or 5e7)")

    p = argparse.ArgumentParser(prog="mvmodal", description="Finitely many-valued coalgebraic modal logic.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("algebra-check", parents=[common], help="validate an algebra file")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_algebra_check)

    s = sub.add_parser("eval", parents=[common, formula, prob], help="evaluate a formula in a model")
    s.add_argument("--model", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("taut", parents=[common, formula, flavor], help="propositional consequence")
    s.add_argument("--algebra", required=True)
    s.add_argument("--hyp", action="append", help="hypothesis (repeatable)")
    s.set_defaults(func=cmd_taut)

    s = sub.add_parser("filter", parents=[common, flavor, prob], help="filtrate a model")
    s.add_argument("--model", required=True)
    s.add_argument("--formulas", help="file with one formula per line")
    s.add_argument("--formula", action="append", help="formula (repeatable)")
    s.add_argument("--verify", action="store_true", help="check the filtration lemma")
    s.add_argument("--output", help="write the quotient here and the mapping next to it")
    s.set_defaults(func=cmd_filter)

    s = sub.add_parser("fmp-bound", parents=[common, formula, flavor], help="finite-model bound")
    s.add_argument("--algebra", required=True)
    s.set_defaults(func=cmd_fmp_bound)

    s = sub.add_parser("validity", parents=[common, formula, flavor, prob, search],
                       help="bounded countermodel search")
    s.add_argument("--mode", default=VALIDITY, choices=MODES)
    s.set_defaults(func=cmd_validity)

    s = sub.add_parser("onestep-sound", parents=[common, prob, search], help="bounded one-step soundness")
    s.add_argument("--rule", required=True, help="rule JSON file, or C_<lifting> / M_<lifting>")
    s.set_defaults(func=cmd_onestep_sound)

    s = sub.add_parser("proof-check", parents=[common], help="check a proof tree")
    s.add_argument("--system", required=True)
    s.add_argument("--proof", required=True)
    s.add_argument("--algebra", required=True)
    s.add_argument("--hyp", action="append", help="extra hypothesis (repeatable)")
    s.set_defaults(func=cmd_proof_check)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except BlowUp as e:
        print(f"error: cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, ModalLogicError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
