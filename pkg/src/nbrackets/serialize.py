"""JSON input parsing and canonical JSON rendering for the CLI.

All container formats are UTF-8 JSON.  Polynomials are literal strings
(``"2*x1^2*x2 - 1/3*x3"``); multivectors are lists of
``{"indices": [i1 < i2 < ...], "coeff": "<poly>"}`` records with 1-based
frame indices; bracket tables and anchors follow the same pattern.

Parse errors raise InputFormatError with a JSON-path style location, which
the CLI maps to exit code 2.
"""

from __future__ import annotations

from typing import Any

from .bialgebroid import AlgebroidData, BialgebroidData, BundleMorphism
from .exterior import Frame, MultiVector, tangent_frame
from .extension import AnchorMap
from .filippov import StructureConstants
from .linear_nambu import LinearNambuData
from .nambu import NambuTensor
from .poly import Poly, format_poly, parse_poly

_FRAME_KINDS = {"tangent", "cotangent", "bundle", "dual-bundle"}


class InputFormatError(ValueError):
    """Schema violation in an input document, with a JSON-path location."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _expect(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise InputFormatError(path, message)


def _get(obj: dict, key: str, path: str, kind=None) -> Any:
    _expect(isinstance(obj, dict), path, "expected an object")
    if key not in obj:
        raise InputFormatError(f"{path}.{key}", "missing required field")
    value = obj[key]
    if kind is not None:
        _expect(isinstance(value, kind), f"{path}.{key}", f"expected {kind.__name__}")
    return value


def parse_poly_field(text: Any, num_vars: int, path: str) -> Poly:
    _expect(isinstance(text, str), path, "expected a polynomial literal string")
    try:
        return parse_poly(text, num_vars)
    except ValueError as exc:
        raise InputFormatError(path, str(exc)) from None


def parse_multivector(records: Any, frame: Frame, path: str) -> MultiVector:
    _expect(isinstance(records, list), path, "expected a list of term records")
    acc = MultiVector.zero(frame)
    for pos, rec in enumerate(records):
        rec_path = f"{path}[{pos}]"
        indices = _get(rec, "indices", rec_path, list)
        for i in indices:
            _expect(isinstance(i, int), f"{rec_path}.indices", "indices must be integers")
            _expect(1 <= i <= frame.fiber_rank, f"{rec_path}.indices", f"index {i} out of range 1..{frame.fiber_rank}")
        _expect(
            all(a < b for a, b in zip(indices, indices[1:])),
            f"{rec_path}.indices",
            "indices must be strictly increasing",
        )
        coeff = parse_poly_field(_get(rec, "coeff", rec_path), frame.base_dim, f"{rec_path}.coeff")
        acc = acc + MultiVector(frame, {tuple(i - 1 for i in indices): coeff})
    return acc


def dump_multivector(mv: MultiVector) -> list[dict]:
    return [
        {"indices": [i + 1 for i in key], "coeff": format_poly(coeff)}
        for key, coeff in mv.sorted_terms()
    ]


def parse_structure_constants(obj: Any, num_vars: int, path: str) -> StructureConstants:
    dim = _get(obj, "dim", path, int)
    arity = _get(obj, "arity", path, int)
    entries = obj.get("entries", [])
    _expect(isinstance(entries, list), f"{path}.entries", "expected a list")
    table: dict[tuple[int, ...], tuple[Poly, ...]] = {}
    for pos, rec in enumerate(entries):
        rec_path = f"{path}.entries[{pos}]"
        indices = _get(rec, "indices", rec_path, list)
        _expect(len(indices) == arity, f"{rec_path}.indices", f"expected {arity} indices")
        for i in indices:
            _expect(isinstance(i, int) and 1 <= i <= dim, f"{rec_path}.indices", f"index out of range 1..{dim}")
        _expect(
            all(a < b for a, b in zip(indices, indices[1:])),
            f"{rec_path}.indices",
            "indices must be strictly increasing",
        )
        value = _get(rec, "value", rec_path, list)
        _expect(len(value) == dim, f"{rec_path}.value", f"expected {dim} components")
        vec = tuple(
            parse_poly_field(v, num_vars, f"{rec_path}.value[{i}]") for i, v in enumerate(value)
        )
        key = tuple(i - 1 for i in indices)
        _expect(key not in table, f"{rec_path}.indices", "duplicate entry")
        table[key] = vec
    try:
        return StructureConstants(dim, arity, num_vars, table)
    except ValueError as exc:
        raise InputFormatError(path, str(exc)) from None


def dump_structure_constants(sc: StructureConstants) -> dict:
    return {
        "dim": sc.dim,
        "arity": sc.arity,
        "entries": [
            {
                "indices": [i + 1 for i in key],
                "value": [format_poly(p) for p in value],
            }
            for key, value in sorted(sc.table.items())
        ],
    }


def parse_anchor(obj: Any, frame: Frame, arity_in: int, path: str) -> AnchorMap:
    entries = obj.get("entries", []) if isinstance(obj, dict) else obj
    _expect(isinstance(entries, list), path, "expected a list of anchor entries")
    tangent = tangent_frame(frame.base_dim)
    table: dict[tuple[int, ...], MultiVector] = {}
    for pos, rec in enumerate(entries):
        rec_path = f"{path}[{pos}]"
        indices = _get(rec, "indices", rec_path, list)
        _expect(len(indices) == arity_in, f"{rec_path}.indices", f"expected {arity_in} indices")
        for i in indices:
            _expect(
                isinstance(i, int) and 1 <= i <= frame.fiber_rank,
                f"{rec_path}.indices",
                f"index out of range 1..{frame.fiber_rank}",
            )
        _expect(
            all(a < b for a, b in zip(indices, indices[1:])),
            f"{rec_path}.indices",
            "indices must be strictly increasing",
        )
        value = parse_multivector(_get(rec, "value", rec_path, list), tangent, f"{rec_path}.value")
        _expect(
            value.is_zero() or value.is_homogeneous(1),
            f"{rec_path}.value",
            "anchor values must be degree-1 vector fields",
        )
        key = tuple(i - 1 for i in indices)
        _expect(key not in table, f"{rec_path}.indices", "duplicate entry")
        if not value.is_zero():
            table[key] = value
    try:
        return AnchorMap(arity_in, frame, table)
    except ValueError as exc:
        raise InputFormatError(path, str(exc)) from None


def dump_anchor(anchor: AnchorMap) -> dict:
    return {
        "entries": [
            {"indices": [i + 1 for i in key], "value": dump_multivector(value)}
            for key, value in sorted(anchor.table.items())
        ]
    }


def parse_frame(obj: Any, path: str, default_kind: str = "bundle") -> Frame:
    base_dim = _get(obj, "base_dim", path, int)
    fiber_rank = _get(obj, "fiber_rank", path, int)
    kind = obj.get("kind", default_kind)
    _expect(kind in _FRAME_KINDS, f"{path}.kind", f"kind must be one of {sorted(_FRAME_KINDS)}")
    try:
        return Frame(base_dim, fiber_rank, kind)
    except ValueError as exc:
        raise InputFormatError(path, str(exc)) from None


def parse_nambu_tensor(obj: Any, path: str = "$") -> NambuTensor:
    base_dim = _get(obj, "base_dim", path, int)
    order = _get(obj, "order", path, int)
    frame = tangent_frame(base_dim)
    tensor = parse_multivector(_get(obj, "tensor", path, list), frame, f"{path}.tensor")
    try:
        return NambuTensor(tensor, order)
    except ValueError as exc:
        raise InputFormatError(path, str(exc)) from None


def dump_nambu_tensor(t: NambuTensor) -> dict:
    return {
        "base_dim": t.base_dim,
        "order": t.order,
        "tensor": dump_multivector(t.tensor),
    }


def parse_linear_nambu(obj: Any, path: str = "$") -> LinearNambuData:
    base_dim = _get(obj, "base_dim", path, int)
    fiber_rank = _get(obj, "fiber_rank", path, int)
    order = _get(obj, "order", path, int)
    total = base_dim + fiber_rank
    frame = tangent_frame(total)
    tensor = parse_multivector(_get(obj, "tensor", path, list), frame, f"{path}.tensor")
    try:
        return LinearNambuData(base_dim, fiber_rank, NambuTensor(tensor, order))
    except ValueError as exc:
        raise InputFormatError(path, str(exc)) from None


def parse_structure_input(obj: Any, path: str = "$") -> StructureConstants:
    structure = _get(obj, "structure", path)
    num_vars = obj.get("num_vars", 0)
    _expect(isinstance(num_vars, int) and num_vars >= 0, f"{path}.num_vars", "expected a non-negative integer")
    return parse_structure_constants(structure, num_vars, f"{path}.structure")


def parse_algebroid(obj: Any, path: str) -> AlgebroidData:
    frame = parse_frame(_get(obj, "frame", path), f"{path}.frame")
    bracket = parse_structure_constants(
        _get(obj, "bracket", path), frame.base_dim, f"{path}.bracket"
    )
    anchor = parse_anchor(_get(obj, "anchor", path), frame, 1, f"{path}.anchor")
    try:
        return AlgebroidData(frame, bracket, anchor)
    except ValueError as exc:
        raise InputFormatError(path, str(exc)) from None


def parse_bialgebroid(obj: Any, path: str = "$") -> BialgebroidData:
    algebroid = parse_algebroid(_get(obj, "algebroid", path), f"{path}.algebroid")
    dual = algebroid.dual_frame()
    dual_obj = _get(obj, "dual_bracket", path)
    arity = _get(dual_obj, "arity", f"{path}.dual_bracket", int)
    dual_bracket = parse_structure_constants(dual_obj, dual.base_dim, f"{path}.dual_bracket")
    rho = parse_anchor(_get(obj, "rho", path), dual, arity - 1, f"{path}.rho")
    try:
        return BialgebroidData(algebroid, dual_bracket, rho)
    except ValueError as exc:
        raise InputFormatError(path, str(exc)) from None


def dump_bialgebroid(bd: BialgebroidData) -> dict:
    ad = bd.algebroid
    return {
        "algebroid": {
            "frame": {
                "base_dim": ad.frame.base_dim,
                "fiber_rank": ad.frame.fiber_rank,
                "kind": ad.frame.kind,
            },
            "bracket": dump_structure_constants(ad.lie_bracket),
            "anchor": dump_anchor(ad.anchor1),
        },
        "dual_bracket": dump_structure_constants(bd.dual_bracket),
        "rho": dump_anchor(bd.rho),
    }


def parse_morphism(obj: Any, base_dim: int, path: str) -> BundleMorphism:
    matrix = _get(obj, "matrix", path, list)
    _expect(len(matrix) > 0, f"{path}.matrix", "matrix must be non-empty")
    rows = []
    width = None
    for i, row in enumerate(matrix):
        _expect(isinstance(row, list), f"{path}.matrix[{i}]", "expected a list")
        if width is None:
            width = len(row)
        _expect(len(row) == width, f"{path}.matrix[{i}]", "ragged matrix")
        rows.append(
            tuple(
                parse_poly_field(entry, base_dim, f"{path}.matrix[{i}][{j}]")
                for j, entry in enumerate(row)
            )
        )
    return BundleMorphism(tuple(rows))
