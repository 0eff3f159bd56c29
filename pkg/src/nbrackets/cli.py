"""Command-line front end: parse a structure file, run the verification
pipeline, print a human summary, and optionally write a structured report.

Exit codes: 0 every axiom passed, 1 at least one failed, 2 the input did
not parse against the documented schema.

Reports are deterministic: identical input, seed, bound, and sample count
produce byte-identical JSON regardless of the worker count, so the worker
flag is deliberately not recorded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import __version__
from .bialgebroid import (
    check_anchor_morphism,
    check_morphism,
    check_strong_compatibility,
    check_weak,
    induce_base_nambu_with_report,
)
from .exterior import MultiVector, cotangent_frame
from .extension import extend_bracket, GradedBracket
from .filippov import check_alternating, check_fundamental_identity
from .linear_nambu import (
    check_defining_equation,
    check_linear,
    induce_dual_anchor,
    induce_dual_bracket,
    verify_dual_algebroid,
)
from .nambu import InternalConsistencyError, check_nambu_poisson, form_bracket
from .report import VerificationReport
from .serialize import (
    InputFormatError,
    dump_anchor,
    dump_multivector,
    dump_nambu_tensor,
    dump_structure_constants,
    parse_anchor,
    parse_bialgebroid,
    parse_frame,
    parse_linear_nambu,
    parse_morphism,
    parse_multivector,
    parse_nambu_tensor,
    parse_structure_constants,
    parse_structure_input,
    _get,
)

SCHEMA_VERSION = "1"

COMMANDS = (
    "check-nlie",
    "check-nambu",
    "extend-bracket",
    "form-bracket",
    "check-linear",
    "induce-dual",
    "check-bialgebroid",
    "induce-base",
    "check-morphism",
)


def _report_json(command: str, args, report: VerificationReport, result: Any = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "nbrackets", "version": __version__},
        "command": command,
        "options": {
            "degree_bound": args.degree_bound,
            "seed": args.seed,
            "samples": args.samples,
        },
        "verdict": report.verdict,
        "axioms": [
            {
                "id": item.axiom,
                "identity": item.description,
                "verdict": "pass" if item.passed else "fail",
                "checked": item.checked,
                "scope": item.scope,
                "witness": None
                if item.witness is None
                else {"inputs": list(item.witness.inputs), "defect": item.witness.defect},
            }
            for item in report.items
        ],
    }
    if result is not None:
        doc["result"] = result
    return doc


def _emit(command: str, args, report: VerificationReport, result: Any = None) -> int:
    print(report.summary())
    doc = _report_json(command, args, report, result)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n")
    if result is not None:
        print("result:", json.dumps(result, sort_keys=True))
    return 0 if report.passed else 1


def _load(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputFormatError("$", f"cannot read input file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputFormatError("$", f"invalid JSON: {exc}") from None


def _run_check_nlie(args) -> int:
    sc = parse_structure_input(_load(args.input))
    report = check_alternating(sc).merged(check_fundamental_identity(sc))
    return _emit("check-nlie", args, report)


def _run_check_nambu(args) -> int:
    tensor = parse_nambu_tensor(_load(args.input))
    report = check_nambu_poisson(
        tensor,
        max_degree=args.degree_bound,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
    )
    return _emit("check-nambu", args, report)


def _run_form_bracket(args) -> int:
    doc = _load(args.input)
    tensor = parse_nambu_tensor(_get(doc, "tensor", "$"), "$.tensor")
    ct = cotangent_frame(tensor.base_dim)
    forms_doc = _get(doc, "forms", "$")
    if not isinstance(forms_doc, list) or len(forms_doc) != tensor.order:
        raise InputFormatError("$.forms", f"expected {tensor.order} degree-1 forms")
    forms = [
        parse_multivector(rec, ct, f"$.forms[{i}]") for i, rec in enumerate(forms_doc)
    ]
    value = form_bracket(tensor, forms)
    report = VerificationReport(())
    return _emit("form-bracket", args, report, result=dump_multivector(value))


def _run_extend_bracket(args) -> int:
    doc = _load(args.input)
    frame = parse_frame(_get(doc, "frame", "$"), "$.frame")
    arity = _get(doc, "arity", "$", int)
    generator = parse_structure_constants(
        _get(doc, "generator", "$"), frame.base_dim, "$.generator"
    )
    anchor = parse_anchor(doc.get("anchor", []), frame, arity - 1, "$.anchor")
    try:
        gb = GradedBracket(arity, generator, anchor, frame)
    except ValueError as exc:
        raise InputFormatError("$", str(exc)) from None
    args_doc = _get(doc, "arguments", "$")
    if not isinstance(args_doc, list) or len(args_doc) != arity:
        raise InputFormatError("$.arguments", f"expected {arity} multivectors")
    elements = [
        parse_multivector(rec, frame, f"$.arguments[{i}]") for i, rec in enumerate(args_doc)
    ]
    value = extend_bracket(gb, *elements)
    report = VerificationReport(())
    return _emit("extend-bracket", args, report, result=dump_multivector(value))


def _run_check_linear(args) -> int:
    ld = parse_linear_nambu(_load(args.input))
    report = check_nambu_poisson(
        ld.tensor,
        max_degree=args.degree_bound,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
    ).merged(check_linear(ld, max_degree=args.degree_bound))
    return _emit("check-linear", args, report)


def _run_induce_dual(args) -> int:
    ld = parse_linear_nambu(_load(args.input))
    report = check_linear(ld, max_degree=args.degree_bound)
    result = None
    if report.passed:
        bracket = induce_dual_bracket(ld)
        anchor = induce_dual_anchor(ld)
        report = report.merged(
            verify_dual_algebroid(
                ld, degree_bound=args.degree_bound, samples=args.samples, seed=args.seed
            )
        ).merged(
            check_defining_equation(
                ld, samples=min(args.samples, 50), seed=args.seed, degree_bound=args.degree_bound
            )
        )
        result = {
            "dual_bracket": dump_structure_constants(bracket),
            "dual_anchor": dump_anchor(anchor),
        }
    return _emit("induce-dual", args, report, result=result)


def _run_check_bialgebroid(args) -> int:
    bd = parse_bialgebroid(_load(args.input))
    report = check_weak(
        bd, degree_bound=args.degree_bound, samples=args.samples, seed=args.seed
    )
    if report.passed:
        report = report.merged(
            check_strong_compatibility(
                bd, degree_bound=args.degree_bound, samples=args.samples, seed=args.seed
            )
        )
    return _emit("check-bialgebroid", args, report)


def _run_induce_base(args) -> int:
    bd = parse_bialgebroid(_load(args.input))
    tensor, report = induce_base_nambu_with_report(
        bd, degree_bound=args.degree_bound, samples=args.samples, seed=args.seed
    )
    result = dump_nambu_tensor(tensor) if tensor is not None else None
    return _emit("induce-base", args, report, result=result)


def _run_check_morphism(args) -> int:
    doc = _load(args.input)
    src = parse_bialgebroid(_get(doc, "source", "$"), "$.source")
    dst = parse_bialgebroid(_get(doc, "target", "$"), "$.target")
    morphism = parse_morphism(
        _get(doc, "morphism", "$"), src.algebroid.frame.base_dim, "$.morphism"
    )
    if morphism.source_rank != src.algebroid.frame.fiber_rank:
        raise InputFormatError("$.morphism.matrix", "column count must match the source rank")
    if morphism.target_rank != dst.algebroid.frame.fiber_rank:
        raise InputFormatError("$.morphism.matrix", "row count must match the target rank")
    report = check_morphism(
        src,
        dst,
        morphism,
        degree_bound=args.degree_bound,
        samples=args.samples,
        seed=args.seed,
    )
    return _emit("check-morphism", args, report)


_RUNNERS = {
    "check-nlie": _run_check_nlie,
    "check-nambu": _run_check_nambu,
    "extend-bracket": _run_extend_bracket,
    "form-bracket": _run_form_bracket,
    "check-linear": _run_check_linear,
    "induce-dual": _run_induce_dual,
    "check-bialgebroid": _run_check_bialgebroid,
    "induce-base": _run_induce_base,
    "check-morphism": _run_check_morphism,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nbrackets",
        description="Exact verification of n-ary bracket structures on polynomial patches.",
    )
    parser.add_argument("command", choices=COMMANDS, help="verification pipeline to run")
    parser.add_argument("--input", required=True, help="path to the JSON structure file")
    parser.add_argument(
        "--degree-bound", type=int, default=3, help="monomial degree bound for sweeps"
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized families")
    parser.add_argument(
        "--samples", type=int, default=200, help="sample count for randomized families"
    )
    parser.add_argument(
        "--workers", type=int, default=1, help="worker hint for parallel sweeps"
    )
    parser.add_argument("--report", help="write the structured JSON report to this path")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.degree_bound < 1:
        parser.error("--degree-bound must be >= 1")
    if args.samples < 1:
        parser.error("--samples must be >= 1")
    try:
        return _RUNNERS[args.command](args)
    except InputFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
