"""Lie algebroid differentials and the paired bracket structures on a dual
frame: the weak axioms, the strong compatibility condition, the induced
tensor on the base, and morphism checks.

An AlgebroidData is a binary bracket on frame sections plus a rank-1
anchor.  The cohomology differential with trivial coefficients acts on
forms over the dual frame by the alternating-sum formula

    d_A phi(X_1, .., X_{k+1}) =
        sum_r (-1)^{r+1} a(X_r)(phi(.. X_r hat ..))
        + sum_{r<s} (-1)^{r+s} phi([X_r, X_s]_A, .. X_r hat .. X_s hat ..),

which degenerates to the de Rham differential on the tangent algebroid.

A BialgebroidData adds an n-ary bracket table and an (n-1)-ary anchor on
the dual frame.  The weak axioms restrict the fundamental identity and
the anchor compatibility to d_A-closed leading slots; on a polynomial
chart the closed generating family is d_A of monomials together with the
constant-coefficient kernel of d_A, computed by exact linear algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exterior import (
    Frame,
    MultiVector,
    apply_vector_field,
    cotangent_frame,
    de_rham_d,
    differential,
    sort_with_sign,
    tangent_frame,
    vf_bracket,
    wedge_all,
)
from .extension import AnchorMap, GradedBracket, check_filippov_algebroid, extend_bracket
from .filippov import StructureConstants
from .linalg import kernel_basis
from .nambu import NambuTensor, form_bracket_structure, nambu_bracket
from .poly import Poly, monomials_upto
from .report import CheckItem, VerificationReport, VerificationError, Witness
from .sampling import monomial_sections, rng_for, sweep_tuples


@dataclass(frozen=True)
class AlgebroidData:
    """Binary bracket on frame sections plus a rank-1 anchor into TM."""

    frame: Frame
    lie_bracket: StructureConstants
    anchor1: AnchorMap

    def __post_init__(self):
        if self.lie_bracket.arity != 2:
            raise ValueError("the section bracket of an algebroid has arity 2")
        if self.lie_bracket.dim != self.frame.fiber_rank:
            raise ValueError("bracket dimension must match the frame rank")
        if self.anchor1.arity_in != 1 or self.anchor1.frame != self.frame:
            raise ValueError("the anchor must be a rank-1 map on the same frame")

    @property
    def graded(self) -> GradedBracket:
        return GradedBracket(2, self.lie_bracket, self.anchor1, self.frame)

    def dual_frame(self) -> Frame:
        return self.frame.dual


def tangent_algebroid(m: int) -> AlgebroidData:
    """TM with the coordinate frame: zero structure constants, identity anchor."""
    frame = tangent_frame(m)
    anchor = AnchorMap(
        1, frame, {(i,): MultiVector.frame_element(frame, i) for i in range(m)}
    )
    return AlgebroidData(frame, StructureConstants(m, 2, m, {}), anchor)


def check_algebroid(
    ad: AlgebroidData, degree_bound: int = 2, samples: int = 150, seed: int = 0
) -> VerificationReport:
    """Jacobi identity, anchor compatibility, and the derivation law."""
    return check_filippov_algebroid(
        ad.graded, degree_bound=degree_bound, samples=samples, seed=seed
    )


def _eval_form_on_frame(phi: MultiVector, indices: tuple[int, ...]) -> Poly:
    """phi(e_{i1}, .., e_{ik}) with sign reconstruction."""
    key, sign = sort_with_sign(indices)
    if sign == 0:
        return Poly.zero(phi.frame.base_dim)
    coeff = phi.terms.get(key)
    if coeff is None:
        return Poly.zero(phi.frame.base_dim)
    return coeff if sign > 0 else -coeff


def algebroid_d(ad: AlgebroidData, phi: MultiVector) -> MultiVector:
    """Cohomology differential with trivial coefficients on dual-frame forms.

    Linear in phi; non-homogeneous inputs are handled part by part.
    """
    dual = ad.dual_frame()
    if phi.frame != dual:
        raise ValueError("form must live over the dual frame of the algebroid")
    m = ad.frame.base_dim
    r = ad.frame.fiber_rank
    result = MultiVector.zero(dual)
    for degree, part in phi.homogeneous_parts().items():
        if part.is_zero():
            continue
        k = degree
        for key in itertools.combinations(range(r), k + 1):
            acc = Poly.zero(m)
            for pos in range(k + 1):
                rest = key[:pos] + key[pos + 1 :]
                value = _eval_form_on_frame(part, rest)
                if not value.is_zero():
                    term = ad.anchor1.apply((key[pos],), value)
                    acc = acc + term if pos % 2 == 0 else acc - term
            for p1 in range(k + 1):
                for p2 in range(p1 + 1, k + 1):
                    rest = tuple(key[q] for q in range(k + 1) if q not in (p1, p2))
                    bracket_vec = ad.lie_bracket.bracket_of_frame_tuple((key[p1], key[p2]))
                    inner = Poly.zero(m)
                    for l, c in enumerate(bracket_vec):
                        if c.is_zero():
                            continue
                        val = _eval_form_on_frame(part, (l,) + rest)
                        if not val.is_zero():
                            inner = inner + c * val
                    # (-1)^{r+s} with 1-based positions r = p1+1, s = p2+1.
                    acc = acc + inner if (p1 + p2) % 2 == 0 else acc - inner
            if not acc.is_zero():
                result = result + MultiVector(dual, {key: acc})
    return result


def algebroid_d_function(ad: AlgebroidData, f: Poly) -> MultiVector:
    """d_A f as a degree-1 section of the dual frame."""
    return algebroid_d(ad, MultiVector.from_poly(ad.dual_frame(), f))


def closed_section_family(
    ad: AlgebroidData, degree_bound: int
) -> list[tuple[str, MultiVector]]:
    """A generating family of d_A-closed degree-1 sections on the chart.

    Exact sections d_A(x^a) for non-constant monomials up to the bound,
    plus the constant-coefficient kernel of d_A computed by exact rational
    elimination on the degree-1 coefficient matrix.
    """
    m = ad.frame.base_dim
    r = ad.frame.fiber_rank
    dual = ad.dual_frame()
    family: list[tuple[str, MultiVector]] = []
    for exps in monomials_upto(m, degree_bound):
        f = Poly.monomial(m, exps)
        section = algebroid_d_function(ad, f)
        if not section.is_zero():
            family.append((f"d({f})", section))

    # Constant sections sum_j c_j e*_j with d_A = 0: assemble the linear
    # system over the coefficients of d_A(e*_j) and solve over Q.
    images = [
        algebroid_d(ad, MultiVector.frame_element(dual, j)) for j in range(r)
    ]
    row_keys: set = set()
    for img in images:
        for key, coeff in img.terms.items():
            for exps in coeff.terms:
                row_keys.add((key, exps))
    ordered_rows = sorted(row_keys)
    if ordered_rows:
        matrix = []
        for key, exps in ordered_rows:
            row = []
            for j in range(r):
                coeff = images[j].terms.get(key)
                row.append(coeff.terms.get(exps, Fraction(0)) if coeff else Fraction(0))
            matrix.append(row)
        basis = kernel_basis(matrix, r)
    else:
        basis = kernel_basis([], r)
    for vec in basis:
        section = MultiVector(
            dual, {(j,): Poly.const(m, c) for j, c in enumerate(vec) if c != 0}
        )
        if not section.is_zero():
            family.append((f"closed({section})", section))
    return family


@dataclass(frozen=True)
class BialgebroidData:
    """An algebroid on A with an n-bracket table and anchor on the dual frame."""

    algebroid: AlgebroidData
    dual_bracket: StructureConstants
    rho: AnchorMap

    def __post_init__(self):
        dual = self.algebroid.dual_frame()
        if self.dual_bracket.dim != dual.fiber_rank:
            raise ValueError("dual bracket dimension must match the dual frame rank")
        if self.rho.frame != dual:
            raise ValueError("rho must live on the dual frame")
        if self.rho.arity_in != self.dual_bracket.arity - 1:
            raise ValueError("rho arity must be one less than the dual bracket arity")

    @property
    def order(self) -> int:
        return self.dual_bracket.arity

    @property
    def dual_graded(self) -> GradedBracket:
        return GradedBracket(
            self.order, self.dual_bracket, self.rho, self.algebroid.dual_frame()
        )


def bialgebroid_from_tensor(t: NambuTensor) -> BialgebroidData:
    """The tangent-cotangent pair of a Nambu tensor: the 1-form bracket as
    the dual table and the sharp map as the anchor."""
    gb = form_bracket_structure(t)
    return BialgebroidData(tangent_algebroid(t.base_dim), gb.generator, gb.anchor)


def check_weak(
    bd: BialgebroidData, degree_bound: int = 2, samples: int = 150, seed: int = 0
) -> VerificationReport:
    """The four weak axioms.

    (1) the base algebroid laws; (2) the fundamental identity with
    d_A-closed leading slots; (3) anchor compatibility with d_A-closed
    leading slots; (4) the Leibniz rule for a function factor, unrestricted.
    """
    n = bd.order
    ad = bd.algebroid
    gb = bd.dual_graded
    m = ad.frame.base_dim
    rng = rng_for(seed)
    items: list[CheckItem] = []

    base = check_algebroid(ad, degree_bound=degree_bound, samples=samples, seed=seed)
    for item in base.items:
        items.append(
            CheckItem(
                axiom=f"base_{item.axiom}",
                description=f"base algebroid: {item.description}",
                passed=item.passed,
                checked=item.checked,
                witness=item.witness,
                scope=item.scope,
            )
        )

    closed = closed_section_family(ad, degree_bound)
    closed_elems = [s for _, s in closed]
    closed_names = {id(s): name for name, s in closed}
    betas = monomial_sections(ad.dual_frame(), degree_bound)

    # (2) restricted fundamental identity.
    families = [closed_elems] * (n - 1) + [betas] * n
    tuples, _, scope = sweep_tuples(families, samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        alphas = list(tup[: n - 1])
        bs = list(tup[n - 1 :])
        lhs = extend_bracket(gb, *alphas, extend_bracket(gb, *bs))
        rhs = MultiVector.zero(gb.frame)
        for i in range(n):
            slots = list(bs)
            slots[i] = extend_bracket(gb, *alphas, bs[i])
            rhs = rhs + extend_bracket(gb, *slots)
        defect = lhs - rhs
        if not defect.is_zero():
            labels = tuple(closed_names.get(id(a), str(a)) for a in alphas) + tuple(
                str(b) for b in bs
            )
            witness = Witness(labels, str(defect))
            break
    items.append(
        CheckItem(
            axiom="restricted_fundamental_identity",
            description="fundamental identity with d_A-closed leading sections",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=f"closed family of {len(closed_elems)}, {scope}",
        )
    )

    # (3) restricted anchor compatibility.
    families = [closed_elems] * (n - 1) + [betas] * (n - 1)
    tuples, _, scope = sweep_tuples(families, samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        alphas = list(tup[: n - 1])
        bs = list(tup[n - 1 :])
        lhs = vf_bracket(bd.rho.on_sections(alphas), bd.rho.on_sections(bs))
        rhs = MultiVector.zero(tangent_frame(m))
        for i in range(n - 1):
            slots = list(bs)
            slots[i] = extend_bracket(gb, *alphas, bs[i])
            rhs = rhs + bd.rho.on_sections(slots)
        defect = lhs - rhs
        if not defect.is_zero():
            labels = tuple(closed_names.get(id(a), str(a)) for a in alphas) + tuple(
                str(b) for b in bs
            )
            witness = Witness(labels, str(defect))
            break
    items.append(
        CheckItem(
            axiom="restricted_anchor_compatibility",
            description="anchor compatibility with d_A-closed leading sections",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=f"closed family of {len(closed_elems)}, {scope}",
        )
    )

    # (4) Leibniz rule, unrestricted monomial inputs.
    frame_sections = [
        MultiVector.frame_element(ad.dual_frame(), i) for i in range(ad.frame.fiber_rank)
    ]
    funcs = [Poly.monomial(m, e) for e in monomials_upto(m, degree_bound)]
    families = [frame_sections] * (n - 1) + [funcs, frame_sections]
    tuples, _, scope = sweep_tuples(families, samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        alphas = list(tup[: n - 1])
        f = tup[n - 1]
        last = tup[n]
        lhs = extend_bracket(gb, *alphas, last * f)
        rho_field = bd.rho.on_sections(alphas)
        derivative = (
            apply_vector_field(rho_field, f) if not rho_field.is_zero() else Poly.zero(m)
        )
        rhs = extend_bracket(gb, *alphas, last) * f + last * derivative
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(
                tuple(str(a) for a in alphas) + (str(f), str(last)), str(defect)
            )
            break
    items.append(
        CheckItem(
            axiom="leibniz_rule",
            description="[a_1, .., f a_n] = f [a_1, .., a_n] + rho(a_1 .. a_{n-1})(f) a_n",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    return VerificationReport(tuple(items))


def check_strong_compatibility(
    bd: BialgebroidData, degree_bound: int = 2, samples: int = 150, seed: int = 0
) -> VerificationReport:
    """d_A is a derivation of the extended dual bracket.

    Checks the n-section compatibility display and its function variant on
    monomial section families; brackets with a 2-form slot go through the
    graded extension.
    """
    n = bd.order
    ad = bd.algebroid
    gb = bd.dual_graded
    m = ad.frame.base_dim
    rng = rng_for(seed)
    items: list[CheckItem] = []

    sections = monomial_sections(ad.dual_frame(), degree_bound)

    tuples, _, scope = sweep_tuples([sections] * n, samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        alphas = list(tup)
        lhs = algebroid_d(ad, extend_bracket(gb, *alphas))
        rhs = MultiVector.zero(gb.frame)
        for i in range(n):
            slots = list(alphas)
            slots[i] = algebroid_d(ad, alphas[i])
            rhs = rhs + extend_bracket(gb, *slots)
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(a) for a in alphas), str(defect))
            break
    items.append(
        CheckItem(
            axiom="differential_compatibility",
            description="d_A[a_1, .., a_n] = sum_i [a_1, .., d_A a_i, .., a_n]",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    funcs = [Poly.monomial(m, e) for e in monomials_upto(m, degree_bound)]
    tuples, _, scope = sweep_tuples([sections] * (n - 1) + [funcs], samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        alphas = list(tup[: n - 1])
        f = tup[n - 1]
        f_elem = MultiVector.from_poly(gb.frame, f)
        lhs = algebroid_d(ad, extend_bracket(gb, *alphas, f_elem))
        rhs = extend_bracket(gb, *alphas, algebroid_d_function(ad, f))
        for i in range(n - 1):
            slots = list(alphas) + [f_elem]
            slots[i] = algebroid_d(ad, alphas[i])
            rhs = rhs + extend_bracket(gb, *slots)
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(a) for a in alphas) + (str(f),), str(defect))
            break
    items.append(
        CheckItem(
            axiom="function_compatibility",
            description="d_A[a_1, .., a_{n-1}, f] expands by the derivation rule",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    return VerificationReport(tuple(items))


def _base_bracket(bd: BialgebroidData, funcs: list[Poly]) -> Poly:
    """{f_1, .., f_n} = rho(d_A f_1 ^ .. ^ d_A f_{n-1})(f_n)."""
    ad = bd.algebroid
    sections = [algebroid_d_function(ad, f) for f in funcs[:-1]]
    field = bd.rho.on_sections(sections)
    if field.is_zero():
        return Poly.zero(ad.frame.base_dim)
    return apply_vector_field(field, funcs[-1])


def induce_base_nambu_with_report(
    bd: BialgebroidData, degree_bound: int = 2, samples: int = 100, seed: int = 0
) -> tuple[NambuTensor | None, VerificationReport]:
    """Assemble the base tensor from coordinate brackets, then verify that
    the defining bracket is skew, a derivation, tensorial, and satisfies
    the fundamental identity on monomial families."""
    n = bd.order
    ad = bd.algebroid
    m = ad.frame.base_dim
    rng = rng_for(seed)
    items: list[CheckItem] = []

    frame = tangent_frame(m)
    tensor_mv = MultiVector.zero(frame)
    for key in itertools.combinations(range(m), n):
        coeff = _base_bracket(bd, [Poly.variable(m, i) for i in key])
        if not coeff.is_zero():
            tensor_mv = tensor_mv + MultiVector(frame, {key: coeff})

    funcs = [Poly.monomial(m, e) for e in monomials_upto(m, degree_bound)]

    # Skew-symmetry, with the last two slots the delicate case.
    tuples, _, scope = sweep_tuples([funcs] * n, samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        base = _base_bracket(bd, list(tup))
        stop = False
        for pos in range(n - 1):
            swapped = list(tup)
            swapped[pos], swapped[pos + 1] = swapped[pos + 1], swapped[pos]
            defect = base + _base_bracket(bd, swapped)
            if not defect.is_zero():
                witness = Witness(
                    tuple(str(f) for f in tup) + (f"swap positions {pos + 1},{pos + 2}",),
                    str(defect),
                )
                stop = True
                break
        if stop:
            break
    items.append(
        CheckItem(
            axiom="skew_symmetry",
            description="the induced bracket is alternating in every pair of slots",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    # Derivation property in the last slot.
    tuples, _, scope = sweep_tuples([funcs] * (n + 1), samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        heads = list(tup[: n - 1])
        f, g = tup[n - 1], tup[n]
        defect = (
            _base_bracket(bd, heads + [f * g])
            - _base_bracket(bd, heads + [g]) * f
            - _base_bracket(bd, heads + [f]) * g
        )
        if not defect.is_zero():
            witness = Witness(tuple(str(x) for x in tup), str(defect))
            break
    items.append(
        CheckItem(
            axiom="derivation",
            description="the induced bracket is a derivation in each slot",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    # Agreement with the assembled tensor.
    candidate = None
    if tensor_mv.is_zero() or tensor_mv.is_homogeneous(n):
        tuples, _, scope = sweep_tuples([funcs] * n, samples, rng)
        witness = None
        checked = 0
        for tup in tuples:
            checked += 1
            via_rho = _base_bracket(bd, list(tup))
            via_tensor = (
                nambu_bracket(NambuTensor(tensor_mv, n), list(tup))
                if not tensor_mv.is_zero()
                else Poly.zero(m)
            )
            defect = via_rho - via_tensor
            if not defect.is_zero():
                witness = Witness(tuple(str(f) for f in tup), str(defect))
                break
        items.append(
            CheckItem(
                axiom="tensor_consistency",
                description="the bracket equals full contraction against the assembled tensor",
                passed=witness is None,
                checked=checked,
                witness=witness,
                scope=scope,
            )
        )
    else:  # pragma: no cover - tensor assembly is degree-n by construction
        items.append(
            CheckItem(
                axiom="tensor_consistency",
                description="the bracket equals full contraction against the assembled tensor",
                passed=False,
                checked=0,
                witness=Witness((str(tensor_mv),), "assembled tensor is not homogeneous"),
            )
        )

    # Fundamental identity, with the Hamiltonian-closure identity alongside.
    tuples, _, scope = sweep_tuples([funcs] * (2 * n - 1), samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        fs = list(tup[: n - 1])
        gs = list(tup[n - 1 :])
        lhs = _base_bracket(bd, fs + [_base_bracket(bd, gs)])
        rhs = Poly.zero(m)
        for i in range(n):
            slots = list(gs)
            slots[i] = _base_bracket(bd, fs + [gs[i]])
            rhs = rhs + _base_bracket(bd, slots)
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(f) for f in tup), str(defect))
            break
    items.append(
        CheckItem(
            axiom="fundamental_identity",
            description="the induced bracket satisfies the fundamental identity",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    # Hamiltonian closure: [X_f, X_g] = sum_i X_{g_1 .. {f, g_i} .. g_{n-1}}.
    tuples, _, scope = sweep_tuples([funcs] * (2 * n - 2), samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        fs = list(tup[: n - 1])
        gs = list(tup[n - 1 :])

        def ham(hs: list[Poly]) -> MultiVector:
            return bd.rho.on_sections([algebroid_d_function(ad, h) for h in hs])

        lhs = vf_bracket(ham(fs), ham(gs))
        rhs = MultiVector.zero(tangent_frame(m))
        for i in range(n - 1):
            slots = list(gs)
            slots[i] = _base_bracket(bd, fs + [gs[i]])
            rhs = rhs + ham(slots)
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(f) for f in tup), str(defect))
            break
    items.append(
        CheckItem(
            axiom="hamiltonian_closure",
            description="brackets of Hamiltonian fields close on Hamiltonian fields",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    report = VerificationReport(tuple(items))
    candidate = None
    if report.passed:
        try:
            candidate = NambuTensor(tensor_mv, n)
        except ValueError:
            candidate = None
    return candidate, report


def induce_base_nambu(
    bd: BialgebroidData, degree_bound: int = 2, samples: int = 100, seed: int = 0
) -> NambuTensor:
    """The base tensor; raises VerificationError if any verification fails."""
    tensor, report = induce_base_nambu_with_report(
        bd, degree_bound=degree_bound, samples=samples, seed=seed
    )
    if not report.passed:
        raise VerificationError("induced base bracket failed verification", report)
    if tensor is None:
        raise VerificationError("induced tensor is degenerate for this order", report)
    return tensor


def anchor_transpose_section(bd: BialgebroidData, alpha: MultiVector) -> MultiVector:
    """Pull back a 1-form on the base through the algebroid anchor."""
    ad = bd.algebroid
    m = ad.frame.base_dim
    if alpha.frame != cotangent_frame(m) or not alpha.is_homogeneous(1):
        raise ValueError("expected a degree-1 form on the base")
    comps = [Poly.zero(m)] * ad.frame.fiber_rank
    for j in range(ad.frame.fiber_rank):
        field = ad.anchor1.on_frame_tuple((j,))
        # <a* alpha, e_j> = <alpha, a(e_j)>.
        acc = Poly.zero(m)
        for (k,), coeff in field.terms.items():
            other = alpha.terms.get((k,))
            if other is not None:
                acc = acc + coeff * other
        comps[j] = acc
    return MultiVector.from_components(ad.dual_frame(), comps)


def check_anchor_morphism(
    bd: BialgebroidData,
    t: NambuTensor,
    degree_bound: int = 2,
    samples: int = 100,
    seed: int = 0,
) -> VerificationReport:
    """The anchor intertwines the pair with the tangent-cotangent pair of the
    induced tensor: it preserves the n-ary brackets and matches the sharp map.
    """
    n = bd.order
    ad = bd.algebroid
    m = ad.frame.base_dim
    rng = rng_for(seed)
    gb_dual = bd.dual_graded
    gb_base = form_bracket_structure(t)
    base_forms = monomial_sections(cotangent_frame(m), degree_bound)
    items: list[CheckItem] = []

    tuples, _, scope = sweep_tuples([base_forms] * n, samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        alphas = list(tup)
        lhs = anchor_transpose_section(bd, extend_bracket(gb_base, *alphas))
        rhs = extend_bracket(gb_dual, *(anchor_transpose_section(bd, a) for a in alphas))
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(a) for a in alphas), str(defect))
            break
    items.append(
        CheckItem(
            axiom="pullback_bracket_compatibility",
            description="the anchor transpose preserves the n-ary brackets",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    tuples, _, scope = sweep_tuples([base_forms] * (n - 1), samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        alphas = list(tup)
        lhs = bd.rho.on_sections([anchor_transpose_section(bd, a) for a in alphas])
        rhs = gb_base.anchor.on_sections(alphas)
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(a) for a in alphas), str(defect))
            break
    items.append(
        CheckItem(
            axiom="anchor_pullback_identity",
            description="rho after the anchor transpose equals the sharp map",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    return VerificationReport(tuple(items))


@dataclass(frozen=True)
class BundleMorphism:
    """Bundle map over the identity base map, as a matrix of polynomials.

    ``matrix[i][j]`` is the e_i-component of the image of source frame
    element j; columns index the source frame.
    """

    matrix: tuple[tuple[Poly, ...], ...]

    @property
    def target_rank(self) -> int:
        return len(self.matrix)

    @property
    def source_rank(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def apply_section(self, target_frame: Frame, section: MultiVector) -> MultiVector:
        """Image of a degree-1 section of the source frame."""
        comps = [Poly.zero(target_frame.base_dim)] * self.target_rank
        for (j,), coeff in section.terms.items():
            for i in range(self.target_rank):
                entry = self.matrix[i][j]
                if not entry.is_zero():
                    comps[i] = comps[i] + entry * coeff
        return MultiVector.from_components(target_frame, comps)

    def transpose_section(self, source_dual: Frame, beta: MultiVector) -> MultiVector:
        """Pullback of a degree-1 dual section of the target."""
        comps = [Poly.zero(source_dual.base_dim)] * self.source_rank
        for (i,), coeff in beta.terms.items():
            for j in range(self.source_rank):
                entry = self.matrix[i][j]
                if not entry.is_zero():
                    comps[j] = comps[j] + entry * coeff
        return MultiVector.from_components(source_dual, comps)


def identity_morphism(rank: int, m: int) -> BundleMorphism:
    one = Poly.const(m, 1)
    zero = Poly.zero(m)
    return BundleMorphism(
        tuple(tuple(one if i == j else zero for j in range(rank)) for i in range(rank))
    )


def check_morphism(
    src: BialgebroidData,
    dst: BialgebroidData,
    f: BundleMorphism,
    degree_bound: int = 2,
    samples: int = 100,
    seed: int = 0,
) -> VerificationReport:
    """A morphism intertwines the algebroid structures, pulls the dual
    brackets back, commutes with the anchors, and identifies the induced
    base tensors."""
    if src.algebroid.frame.base_dim != dst.algebroid.frame.base_dim:
        raise ValueError("morphisms are over a shared base chart")
    if src.order != dst.order:
        raise ValueError("brackets must have the same arity")
    n = src.order
    m = src.algebroid.frame.base_dim
    rng = rng_for(seed)
    items: list[CheckItem] = []

    src_sections = monomial_sections(src.algebroid.frame, degree_bound)
    dst_dual_sections = monomial_sections(dst.algebroid.dual_frame(), degree_bound)

    # Lie algebroid morphism: bracket and anchor intertwined.
    tuples, _, scope = sweep_tuples([src_sections] * 2, samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        x, y = tup
        fx = f.apply_section(dst.algebroid.frame, x)
        fy = f.apply_section(dst.algebroid.frame, y)
        bracket_defect = f.apply_section(
            dst.algebroid.frame, extend_bracket(src.algebroid.graded, x, y)
        ) - extend_bracket(dst.algebroid.graded, fx, fy)
        if not bracket_defect.is_zero():
            witness = Witness((str(x), str(y)), str(bracket_defect))
            break
        anchor_defect = src.algebroid.anchor1.on_sections([x]) - dst.algebroid.anchor1.on_sections([fx])
        if not anchor_defect.is_zero():
            witness = Witness((str(x),), str(anchor_defect))
            break
    items.append(
        CheckItem(
            axiom="algebroid_morphism",
            description="the map intertwines the section brackets and the anchors",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    # Dual bracket preservation under the transpose.
    tuples, _, scope = sweep_tuples([dst_dual_sections] * n, samples, rng)
    witness = None
    checked = 0
    src_dual = src.algebroid.dual_frame()
    for tup in tuples:
        checked += 1
        betas = list(tup)
        lhs = f.transpose_section(src_dual, extend_bracket(dst.dual_graded, *betas))
        rhs = extend_bracket(
            src.dual_graded, *(f.transpose_section(src_dual, b) for b in betas)
        )
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(b) for b in betas), str(defect))
            break
    items.append(
        CheckItem(
            axiom="dual_bracket_preservation",
            description="the transpose preserves the n-ary dual brackets",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    # Anchor intertwining for rho.
    tuples, _, scope = sweep_tuples([dst_dual_sections] * (n - 1), samples, rng)
    witness = None
    checked = 0
    for tup in tuples:
        checked += 1
        betas = list(tup)
        lhs = src.rho.on_sections([f.transpose_section(src_dual, b) for b in betas])
        rhs = dst.rho.on_sections(betas)
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(b) for b in betas), str(defect))
            break
    items.append(
        CheckItem(
            axiom="dual_anchor_intertwine",
            description="the transpose commutes with the dual anchors",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=scope,
        )
    )

    # Induced base tensors agree coefficient for coefficient.
    src_tensor, src_rep = induce_base_nambu_with_report(
        src, degree_bound=degree_bound, samples=samples, seed=seed
    )
    dst_tensor, dst_rep = induce_base_nambu_with_report(
        dst, degree_bound=degree_bound, samples=samples, seed=seed
    )
    if not (src_rep.passed and dst_rep.passed):
        bad = src_rep if not src_rep.passed else dst_rep
        items.append(
            CheckItem(
                axiom="induced_tensor_agreement",
                description="the induced base tensors coincide",
                passed=False,
                checked=0,
                witness=bad.witness,
            )
        )
    else:
        src_mv = src_tensor.tensor if src_tensor else MultiVector.zero(tangent_frame(m))
        dst_mv = dst_tensor.tensor if dst_tensor else MultiVector.zero(tangent_frame(m))
        defect = src_mv - dst_mv
        items.append(
            CheckItem(
                axiom="induced_tensor_agreement",
                description="the induced base tensors coincide",
                passed=defect.is_zero(),
                checked=1,
                witness=None if defect.is_zero() else Witness((str(src_mv), str(dst_mv)), str(defect)),
            )
        )

    return VerificationReport(tuple(items))
