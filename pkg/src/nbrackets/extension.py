"""Extension of an n-bracket from degree-1 generators to the exterior algebra.

A GradedBracket packages the generator table (bracket of frame sections),
the anchor (action of n-1 sections on functions), and the frame.  The
extension to arbitrary graded arguments is forced by graded antisymmetry
and the graded Leibniz rule:

    [a_1, ..., a_{n-1}, b ^ c]
        = [a_1, ..., a_{n-1}, b] ^ c
          + (-1)^{(sum (|a_j| - 1)) |b|} b ^ [a_1, ..., a_{n-1}, c].

The recursion normal form peels the highest-degree slot (rightmost among
ties) after moving it to the last position with the antisymmetry signs;
non-constant coefficients on degree >= 1 terms peel as degree-0 wedge
factors, which is exactly how the anchor-Leibniz law enters.  Peeling
order does not change the result; the confluence test locks that in.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .exterior import (
    Frame,
    MultiVector,
    TANGENT,
    apply_vector_field,
    sort_with_sign,
    tangent_frame,
    vf_bracket,
    wedge,
)
from .filippov import StructureConstants, sc_bracket, unit_vector
from .poly import Poly, monomials_upto, poly_det
from .report import CheckItem, VerificationReport, VerificationError, Witness
from .sampling import monomial_sections, rng_for, sweep_tuples


@dataclass(frozen=True)
class AnchorMap:
    """Alternating multilinear bundle map from (n-1)-fold wedges to vector fields.

    ``table`` maps strictly increasing (n-1)-tuples of frame indices to
    degree-1 tangent multivectors over the base coordinates.
    """

    arity_in: int
    frame: Frame
    table: dict[tuple[int, ...], MultiVector] = field(default_factory=dict)

    def __post_init__(self):
        if self.arity_in < 1:
            raise ValueError("anchor arity must be >= 1")
        for key, value in self.table.items():
            if len(key) != self.arity_in:
                raise ValueError(f"anchor key {key} does not have arity {self.arity_in}")
            if any(a >= b for a, b in zip(key, key[1:])):
                raise ValueError(f"anchor key {key} is not strictly increasing")
            if value.frame.kind != TANGENT or value.frame.base_dim != self.frame.base_dim:
                raise ValueError("anchor values must be tangent fields over the base")
            if not value.is_homogeneous(1):
                raise ValueError("anchor values must be degree-1 vector fields")

    def zero_field(self) -> MultiVector:
        return MultiVector.zero(tangent_frame(self.frame.base_dim))

    def on_frame_tuple(self, indices: tuple[int, ...]) -> MultiVector:
        key, sign = sort_with_sign(indices)
        if sign == 0:
            return self.zero_field()
        value = self.table.get(key)
        if value is None:
            return self.zero_field()
        return value if sign > 0 else -value

    def on_sections(self, sections: Sequence[MultiVector]) -> MultiVector:
        """C-infinity multilinear extension to degree-1 sections."""
        if len(sections) != self.arity_in:
            raise ValueError(f"anchor expects {self.arity_in} sections")
        result = self.zero_field()
        if not self.table:
            return result
        for key, value in self.table.items():
            rows = [[s.component(i) for i in key] for s in sections]
            det = poly_det(rows)
            if not det.is_zero():
                result = result + value * det
        return result

    def apply(self, indices: tuple[int, ...], f: Poly) -> Poly:
        field_ = self.on_frame_tuple(indices)
        if field_.is_zero():
            return Poly.zero(self.frame.base_dim)
        return apply_vector_field(field_, f)


def zero_anchor(frame: Frame, arity_in: int) -> AnchorMap:
    return AnchorMap(arity_in, frame, {})


@dataclass(frozen=True)
class GradedBracket:
    """Arity-n graded bracket data: generator table plus anchor over a frame."""

    arity: int
    generator: StructureConstants
    anchor: AnchorMap
    frame: Frame

    def __post_init__(self):
        if self.generator.arity != self.arity:
            raise ValueError("generator arity must match the bracket arity")
        if self.anchor.arity_in != self.arity - 1:
            raise ValueError("anchor arity must be one less than the bracket arity")
        if self.generator.dim != self.frame.fiber_rank:
            raise ValueError("generator dimension must match the frame rank")
        if self.generator.num_vars != self.frame.base_dim:
            raise ValueError("generator coefficients must live over the base coordinates")
        if self.anchor.frame != self.frame:
            raise ValueError("anchor frame must match the bracket frame")


_Term = tuple[Poly, tuple[int, ...]]  # coefficient and increasing index tuple


def _swap_sign(deg_moved: int, deg_passed: int) -> int:
    # Graded antisymmetry for adjacent slots of degrees p, q.
    return -1 if ((deg_moved - 1) * (deg_passed - 1)) % 2 == 0 else 1


def extend_bracket(gb: GradedBracket, *args: MultiVector, _peel_leftmost: bool = False) -> MultiVector:
    """Evaluate the extended bracket on multivectors over gb.frame.

    ``_peel_leftmost`` switches the slot-selection tie-break and exists only
    so the confluence property can be exercised from tests.
    """
    if len(args) != gb.arity:
        raise ValueError(f"bracket expects {gb.arity} arguments, got {len(args)}")
    for a in args:
        if a.frame != gb.frame:
            raise ValueError("argument frame does not match the bracket frame")
    result = MultiVector.zero(gb.frame)
    for combo in itertools.product(*(a.terms.items() for a in args)):
        terms = [(coeff, key) for key, coeff in combo]
        result = result + _bracket_terms(gb, terms, _peel_leftmost)
    return result


def _bracket_terms(gb: GradedBracket, terms: list[_Term], peel_leftmost: bool) -> MultiVector:
    n = gb.arity
    degrees = [len(key) for _, key in terms]
    if sum(degrees) - (n - 1) < 0:
        return MultiVector.zero(gb.frame)

    # A slot is atomic when it is a plain function (degree 0) or a frame
    # element with constant coefficient.  Anything else gets peeled.
    def needs_peel(i: int) -> bool:
        coeff, key = terms[i]
        return len(key) >= 2 or (len(key) == 1 and not coeff.is_constant())

    candidates = [i for i in range(n) if needs_peel(i)]
    if candidates:
        top = max(degrees[i] for i in candidates)
        tied = [i for i in candidates if degrees[i] == top]
        pick = tied[0] if peel_leftmost else tied[-1]
        return _peel(gb, terms, pick, peel_leftmost)

    zero_slots = [i for i in range(n) if degrees[i] == 0]
    if len(zero_slots) >= 2:
        return MultiVector.zero(gb.frame)
    if len(zero_slots) == 1:
        pos = zero_slots[0]
        sign = 1
        for q in range(pos + 1, n):
            sign *= _swap_sign(0, degrees[q])
        f = terms[pos][0]
        rest = [terms[i] for i in range(n) if i != pos]
        scalar = Poly.const(gb.frame.base_dim, 1)
        for coeff, _ in rest:
            scalar = scalar * coeff
        indices = tuple(key[0] for _, key in rest)
        value = gb.anchor.apply(indices, f)
        out = scalar * value if not value.is_zero() else Poly.zero(gb.frame.base_dim)
        result = MultiVector.from_poly(gb.frame, out)
        return result if sign > 0 else -result

    # All slots are frame elements with constant coefficients.
    scalar = Poly.const(gb.frame.base_dim, 1)
    for coeff, _ in terms:
        scalar = scalar * coeff
    indices = tuple(key[0] for _, key in terms)
    vector = gb.generator.bracket_of_frame_tuple(indices)
    out: dict[tuple[int, ...], Poly] = {}
    for l, p in enumerate(vector):
        if not p.is_zero():
            out[(l,)] = p * scalar
    return MultiVector(gb.frame, out)


def _peel(gb: GradedBracket, terms: list[_Term], pos: int, peel_leftmost: bool) -> MultiVector:
    n = gb.arity
    degrees = [len(key) for _, key in terms]
    sign = 1
    moved = list(terms)
    for q in range(pos + 1, n):
        sign *= _swap_sign(degrees[pos], degrees[q])
    moved = [terms[i] for i in range(n) if i != pos] + [terms[pos]]

    coeff, key = moved[-1]
    head = moved[:-1]
    theta = sum(len(k) - 1 for _, k in head)
    if len(key) >= 2:
        b: _Term = (coeff, key[:-1])
        c: _Term = (Poly.const(gb.frame.base_dim, 1), key[-1:])
        deg_b = len(key) - 1
    else:
        # Degree-1 slot with non-constant coefficient: split off the function.
        b = (coeff, ())
        c = (Poly.const(gb.frame.base_dim, 1), key)
        deg_b = 0

    left = _bracket_terms(gb, head + [b], peel_leftmost)
    first = wedge(left, MultiVector.monomial(gb.frame, c[1], c[0])) if c[1] else left * c[0]

    right = _bracket_terms(gb, head + [c], peel_leftmost)
    b_mv = MultiVector.monomial(gb.frame, b[1], b[0]) if b[1] else MultiVector.from_poly(gb.frame, b[0])
    second = wedge(b_mv, right)
    if (theta * deg_b) % 2 != 0:
        second = -second

    total = first + second
    return total if sign > 0 else -total


# -- read-back and axiom checks ---------------------------------------------


def restrict_to_algebroid(
    gb: GradedBracket,
    degree_bound: int = 2,
    samples: int = 100,
    seed: int = 0,
    verify: bool = True,
) -> tuple[StructureConstants, AnchorMap]:
    """Read back the degree-1 bracket table and the anchor from the extension.

    The anchor is recovered from the degree-0 slot: its field applied to
    each coordinate function.  With ``verify`` the algebroid laws (anchor
    compatibility and the Leibniz rule) are checked on the read-back data
    and a violation raises VerificationError with the witness.  Pass
    ``verify=False`` for data that is only a weak structure, where anchor
    compatibility holds for closed sections but not all of them.
    """
    n = gb.arity
    r = gb.frame.fiber_rank
    m = gb.frame.base_dim
    table: dict[tuple[int, ...], tuple[Poly, ...]] = {}
    for key in itertools.combinations(range(r), n):
        value = extend_bracket(gb, *(MultiVector.frame_element(gb.frame, i) for i in key))
        vec = tuple(value.component(l) for l in range(r))
        if any(not p.is_zero() for p in vec):
            table[key] = vec
    sc = StructureConstants(r, n, m, table)

    anchor_table: dict[tuple[int, ...], MultiVector] = {}
    for key in itertools.combinations(range(r), n - 1):
        comps = []
        for k in range(m):
            coord = MultiVector.from_poly(gb.frame, Poly.variable(m, k))
            value = extend_bracket(
                gb, *(MultiVector.frame_element(gb.frame, i) for i in key), coord
            )
            comps.append(value.scalar_part())
        field_ = MultiVector.from_components(tangent_frame(m), comps)
        if not field_.is_zero():
            anchor_table[key] = field_
    anchor = AnchorMap(n - 1, gb.frame, anchor_table)

    if verify:
        report = check_filippov_algebroid(
            GradedBracket(n, sc, anchor, gb.frame),
            degree_bound=degree_bound,
            samples=samples,
            seed=seed,
            include_fi=False,
        )
        if not report.passed:
            raise VerificationError("read-back data violates the algebroid laws", report)
    return sc, anchor


def section_elements(frame: Frame, degree_bound: int) -> list[MultiVector]:
    return monomial_sections(frame, degree_bound)


def check_filippov_algebroid(
    gb: GradedBracket,
    degree_bound: int = 2,
    samples: int = 150,
    seed: int = 0,
    include_fi: bool = True,
) -> VerificationReport:
    """Verify the algebroid laws for bracket-plus-anchor data.

    Checks, on frame sections decorated with monomial coefficients:
      * the fundamental identity of the section bracket;
      * compatibility of the anchor with the bracket of vector fields;
      * the Leibniz rule for a function factor in the last slot.

    Section brackets are evaluated through the graded extension engine, so
    non-constant coefficients pick up their anchor terms.
    """
    n = gb.arity
    frame = gb.frame
    rng = rng_for(seed)
    items: list[CheckItem] = []

    frame_sections = [MultiVector.frame_element(frame, i) for i in range(frame.fiber_rank)]
    decorated = section_elements(frame, degree_bound)

    if include_fi:
        families = [decorated] * (n - 1) + [decorated] * n
        tuples, count, scope = sweep_tuples(families, samples, rng)
        witness = None
        checked = 0
        for tup in tuples:
            checked += 1
            a_elems = list(tup[: n - 1])
            b_elems = list(tup[n - 1 :])
            lhs = extend_bracket(gb, *a_elems, extend_bracket(gb, *b_elems))
            rhs = MultiVector.zero(frame)
            for i in range(n):
                slots = list(b_elems)
                slots[i] = extend_bracket(gb, *a_elems, b_elems[i])
                rhs = rhs + extend_bracket(gb, *slots)
            defect = lhs - rhs
            if not defect.is_zero():
                witness = Witness(tuple(str(e) for e in tup), str(defect))
                break
        items.append(
            CheckItem(
                axiom="fundamental_identity",
                description="section bracket satisfies the fundamental identity",
                passed=witness is None,
                checked=checked,
                witness=witness,
                scope=scope,
            )
        )

    # Anchor compatibility with the vector-field bracket.
    families = [decorated] * (n - 1) + [decorated] * (n - 1)
    tuples, count, scope = sweep_tuples(families, samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        xs = list(tup[: n - 1])
        ys = list(tup[n - 1 :])
        lhs = vf_bracket(gb.anchor.on_sections(xs), gb.anchor.on_sections(ys))
        rhs = gb.anchor.zero_field()
        for i in range(n - 1):
            inner = extend_bracket(gb, *xs, ys[i])
            slots = list(ys)
            slots[i] = inner
            rhs = rhs + gb.anchor.on_sections(slots)
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(e) for e in tup), str(defect))
            break
    items.append(
        CheckItem(
            axiom="anchor_compatibility",
            description="anchor intertwines the section bracket and the vector-field bracket",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    # Leibniz rule with a function factor.
    funcs = [
        Poly.monomial(frame.base_dim, exps)
        for exps in monomials_upto(frame.base_dim, degree_bound, include_constant=False)
    ] or [Poly.const(frame.base_dim, 1)]
    families = [frame_sections] * (n - 1) + [funcs, frame_sections]
    tuples, count, scope = sweep_tuples(families, samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        xs = list(tup[: n - 1])
        f = tup[n - 1]
        y = tup[n]
        lhs = extend_bracket(gb, *xs, y * f)
        anchor_term = gb.anchor.on_sections(xs)
        derivative = (
            apply_vector_field(anchor_term, f)
            if not anchor_term.is_zero()
            else Poly.zero(frame.base_dim)
        )
        rhs = extend_bracket(gb, *xs, y) * f + y * derivative
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(e) for e in xs) + (str(f), str(y)), str(defect))
            break
    items.append(
        CheckItem(
            axiom="leibniz_rule",
            description="[X_1..X_{n-1}, f Y] = f [X_1..X_{n-1}, Y] + anchor(X)(f) Y",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    return VerificationReport(tuple(items))


def check_gerstenhaber_axioms(
    gb: GradedBracket,
    samples_list: Sequence[MultiVector],
    max_tuples: int = 200,
    seed: int = 0,
) -> VerificationReport:
    """Verify the graded bracket axioms on homogeneous sample elements.

    (i) degree bookkeeping, (ii) graded antisymmetry under adjacent swaps,
    (iii) the graded fundamental identity with degree-1 leading slots, and
    (iv) the graded Leibniz rule in the last slot.
    """
    from .filippov import check_graded_fi

    n = gb.arity
    rng = rng_for(seed)
    for s in samples_list:
        if not s.is_homogeneous():
            raise ValueError("samples must be homogeneous multivectors")
    items: list[CheckItem] = []

    # (i) degree formula.
    tuples, count, scope = sweep_tuples([samples_list] * n, max_tuples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        value = extend_bracket(gb, *tup)
        expected = sum(e.degree() for e in tup) - (n - 1)
        if not value.is_zero() and not value.is_homogeneous(expected):
            witness = Witness(tuple(str(e) for e in tup), str(value))
            break
    items.append(
        CheckItem(
            axiom="degree_formula",
            description="output degree is the sum of input degrees minus (n-1)",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    # (ii) graded antisymmetry.
    tuples, count, scope = sweep_tuples([samples_list] * n, max_tuples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        base = extend_bracket(gb, *tup)
        stop = False
        for pos in range(n - 1):
            swapped = list(tup)
            swapped[pos], swapped[pos + 1] = swapped[pos + 1], swapped[pos]
            other = extend_bracket(gb, *swapped)
            p, q = tup[pos].degree(), tup[pos + 1].degree()
            expected = other * _swap_sign(p, q)
            defect = base - expected
            if not defect.is_zero():
                witness = Witness(
                    tuple(str(e) for e in tup) + (f"swap positions {pos + 1},{pos + 2}",),
                    str(defect),
                )
                stop = True
                break
        if stop:
            break
    items.append(
        CheckItem(
            axiom="graded_antisymmetry",
            description="adjacent swap multiplies by -(-1)^((p-1)(q-1))",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    # (iii) graded fundamental identity with degree-1 leading slots.
    degree_one = [s for s in samples_list if s.is_homogeneous(1) and not s.is_zero()]
    fi_report = check_graded_fi(
        lambda *elems: extend_bracket(gb, *elems),
        degree_one,
        list(samples_list),
        n,
        max_tuples=max_tuples,
    )
    items.extend(fi_report.items)

    # (iv) graded Leibniz rule.
    tuples, count, scope = sweep_tuples([samples_list] * (n + 1), max_tuples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        heads = list(tup[: n - 1])
        b, c = tup[n - 1], tup[n]
        lhs = extend_bracket(gb, *heads, wedge(b, c))
        theta = sum(e.degree() - 1 for e in heads)
        sign = -1 if (theta * b.degree()) % 2 else 1
        rhs = wedge(extend_bracket(gb, *heads, b), c) + wedge(b, extend_bracket(gb, *heads, c)) * sign
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(e) for e in tup), str(defect))
            break
    items.append(
        CheckItem(
            axiom="graded_leibniz",
            description="[a_1..a_{n-1}, b ^ c] expands by the graded Leibniz rule",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    return VerificationReport(tuple(items))
