"""Fibre-wise linear Nambu structures on a trivial bundle R^m x R^r.

Total-space coordinates are ordered (x_1 .. x_m, xi_1 .. xi_r); in the
polynomial ring the fiber coordinate xi_i is variable number m + i.  A
dual-frame section with x-only coefficients alpha = sum a_i(x) e^i gives
the linear function l_alpha = sum a_i(x) xi_i, and basic functions are
x-only polynomials pulled up to the total space.

Linearity of the bracket in this sense means: n linear entries produce a
linear function, n-1 linear plus one basic produce a basic function, and
two or more basic entries produce zero.  A structure with these three
properties induces an n-ary bracket and an anchor on the dual frame, and
those are checked to form a Filippov algebroid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .exterior import MultiVector, dual_bundle_frame, tangent_frame
from .extension import AnchorMap, GradedBracket, check_filippov_algebroid
from .filippov import StructureConstants
from .nambu import NambuTensor, nambu_bracket
from .poly import Poly, monomials_upto
from .report import CheckItem, VerificationReport, Witness
from .sampling import rng_for


@dataclass(frozen=True)
class LinearNambuData:
    """A Nambu tensor on the total space of the trivial bundle R^m x R^r."""

    base_dim: int
    fiber_rank: int
    tensor: NambuTensor

    def __post_init__(self):
        if self.tensor.base_dim != self.base_dim + self.fiber_rank:
            raise ValueError("tensor must live on the m + r total space")

    @property
    def order(self) -> int:
        return self.tensor.order

    @property
    def total_dim(self) -> int:
        return self.base_dim + self.fiber_rank

    def dual_frame(self):
        return dual_bundle_frame(self.base_dim, self.fiber_rank)

    def fiber_coordinate(self, i: int) -> Poly:
        """xi_{i+1} as a total-space polynomial."""
        return Poly.variable(self.total_dim, self.base_dim + i)

    def lift_basic(self, f: Poly) -> Poly:
        """Embed an x-only polynomial into the total space."""
        if f.num_vars == self.total_dim:
            return f
        if f.num_vars != self.base_dim:
            raise ValueError("basic functions depend on the base coordinates")
        return f.extend_vars(self.total_dim)


def _xi_degree(exps: tuple[int, ...], base_dim: int) -> int:
    return sum(exps[base_dim:])


def _is_xi_linear(p: Poly, base_dim: int) -> bool:
    return all(_xi_degree(e, base_dim) == 1 for e in p.terms)


def _is_basic(p: Poly, base_dim: int) -> bool:
    return all(_xi_degree(e, base_dim) == 0 for e in p.terms)


def linear_function(ld: LinearNambuData, alpha: MultiVector) -> Poly:
    """l_alpha = sum_i alpha_i(x) xi_i on the total space."""
    if alpha.frame != ld.dual_frame():
        raise ValueError("section must live over the dual bundle frame")
    if not alpha.is_homogeneous(1):
        raise ValueError("linear functions come from degree-1 sections")
    acc = Poly.zero(ld.total_dim)
    for (i,), coeff in alpha.terms.items():
        acc = acc + ld.lift_basic(coeff) * ld.fiber_coordinate(i)
    return acc


def _linear_family(ld: LinearNambuData, max_degree: int) -> list[tuple[str, Poly]]:
    """Linear functions of monomial-coefficient dual sections, with labels."""
    frame = ld.dual_frame()
    out = []
    for exps in monomials_upto(ld.base_dim, max_degree, include_constant=True):
        coeff = Poly.monomial(ld.base_dim, exps)
        for i in range(ld.fiber_rank):
            section = MultiVector(frame, {(i,): coeff})
            out.append((str(section), linear_function(ld, section)))
    return out


def _basic_family(ld: LinearNambuData, max_degree: int) -> list[tuple[str, Poly]]:
    out = []
    for exps in monomials_upto(ld.base_dim, max_degree, include_constant=False):
        f = Poly.monomial(ld.base_dim, exps)
        out.append((f"{f}", ld.lift_basic(f)))
    return out


def check_linear(ld: LinearNambuData, max_degree: int = 2) -> VerificationReport:
    """The three linearity clauses, exhaustively over monomial families.

    The clauses are linear conditions on the multilinear bracket, so the
    monomial-coefficient family is a complete certificate at this
    coefficient degree.
    """
    n = ld.order
    linear = _linear_family(ld, max_degree)
    basic = _basic_family(ld, max_degree)
    items: list[CheckItem] = []

    # (a) n linear entries produce a fibre-wise linear function.
    witness = None
    checked = 0
    for combo in itertools.combinations(linear, n):
        checked += 1
        value = nambu_bracket(ld.tensor, [p for _, p in combo])
        if not value.is_zero() and not _is_xi_linear(value, ld.base_dim):
            witness = Witness(tuple(lbl for lbl, _ in combo), str(value))
            break
    items.append(
        CheckItem(
            axiom="linear_closure",
            description="the bracket of n linear functions is fibre-wise linear",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=f"monomial coefficients of degree <= {max_degree}",
        )
    )

    # (b) n-1 linear entries and one basic entry produce a basic function.
    witness = None
    checked = 0
    for lin_combo in itertools.combinations(linear, n - 1):
        for lbl_b, fb in basic:
            checked += 1
            value = nambu_bracket(ld.tensor, [p for _, p in lin_combo] + [fb])
            if not _is_basic(value, ld.base_dim):
                witness = Witness(tuple(lbl for lbl, _ in lin_combo) + (lbl_b,), str(value))
                break
        if witness:
            break
    items.append(
        CheckItem(
            axiom="basic_closure",
            description="the bracket of n-1 linear functions and a basic function is basic",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=f"monomial coefficients of degree <= {max_degree}",
        )
    )

    # (c) two or more basic entries give zero.
    witness = None
    checked = 0
    for n_basic in range(2, n + 1):
        for basic_combo in itertools.combinations(basic, n_basic):
            for lin_combo in itertools.combinations(linear, n - n_basic):
                checked += 1
                args = [p for _, p in lin_combo] + [p for _, p in basic_combo]
                value = nambu_bracket(ld.tensor, args)
                if not value.is_zero():
                    witness = Witness(
                        tuple(lbl for lbl, _ in lin_combo)
                        + tuple(lbl for lbl, _ in basic_combo),
                        str(value),
                    )
                    break
            if witness:
                break
        if witness:
            break
    items.append(
        CheckItem(
            axiom="basic_annihilation",
            description="any bracket with two or more basic entries vanishes",
            passed=witness is None,
            checked=checked,
            witness=witness,
            scope=f"monomial coefficients of degree <= {max_degree}",
        )
    )

    return VerificationReport(tuple(items))


def _strip_xi_linear(ld: LinearNambuData, p: Poly) -> list[Poly]:
    """Coefficient vector c with p = sum_i c_i(x) xi_i; error if not linear."""
    if not _is_xi_linear(p, ld.base_dim):
        raise ValueError(f"bracket value is not fibre-wise linear: {p}")
    comps = [dict() for _ in range(ld.fiber_rank)]
    for exps, coeff in p.terms.items():
        xi_part = exps[ld.base_dim :]
        i = next(k for k, e in enumerate(xi_part) if e)
        comps[i][exps[: ld.base_dim]] = coeff
    return [Poly(ld.base_dim, c) for c in comps]


def _strip_basic(ld: LinearNambuData, p: Poly) -> Poly:
    if not _is_basic(p, ld.base_dim):
        raise ValueError(f"bracket value depends on the fiber coordinates: {p}")
    return Poly(ld.base_dim, {exps[: ld.base_dim]: c for exps, c in p.terms.items()})


def induce_dual_bracket(ld: LinearNambuData) -> StructureConstants:
    """Read the dual-frame bracket from {xi_{i1}, ..., xi_{in}}."""
    n = ld.order
    table: dict[tuple[int, ...], tuple[Poly, ...]] = {}
    for key in itertools.combinations(range(ld.fiber_rank), n):
        value = nambu_bracket(ld.tensor, [ld.fiber_coordinate(i) for i in key])
        vec = tuple(_strip_xi_linear(ld, value))
        if any(not p.is_zero() for p in vec):
            table[key] = vec
    return StructureConstants(ld.fiber_rank, n, ld.base_dim, table)


def induce_dual_anchor(ld: LinearNambuData) -> AnchorMap:
    """Read the dual-frame anchor from {xi_{i1}, .., xi_{i_{n-1}}, x_k}."""
    n = ld.order
    frame = ld.dual_frame()
    table: dict[tuple[int, ...], MultiVector] = {}
    for key in itertools.combinations(range(ld.fiber_rank), n - 1):
        comps = []
        for k in range(ld.base_dim):
            xk = Poly.variable(ld.total_dim, k)
            value = nambu_bracket(ld.tensor, [ld.fiber_coordinate(i) for i in key] + [xk])
            comps.append(_strip_basic(ld, value))
        field = MultiVector.from_components(tangent_frame(ld.base_dim), comps)
        if not field.is_zero():
            table[key] = field
    return AnchorMap(n - 1, frame, table)


def dual_graded_bracket(ld: LinearNambuData) -> GradedBracket:
    return GradedBracket(ld.order, induce_dual_bracket(ld), induce_dual_anchor(ld), ld.dual_frame())


def verify_dual_algebroid(
    ld: LinearNambuData, degree_bound: int = 2, samples: int = 150, seed: int = 0
) -> VerificationReport:
    """Check that the induced dual data is a Filippov algebroid of order n."""
    return check_filippov_algebroid(
        dual_graded_bracket(ld), degree_bound=degree_bound, samples=samples, seed=seed
    )


def check_defining_equation(
    ld: LinearNambuData, samples: int = 50, seed: int = 0, degree_bound: int = 2
) -> VerificationReport:
    """l_{[a_1, .., a_n]} = {l_{a_1}, .., l_{a_n}} on random dual sections.

    The left side goes through the graded engine (so anchor terms enter
    through coefficient peeling); the right side is the total-space
    bracket.  The two routes are computed independently.
    """
    from .sampling import random_poly

    n = ld.order
    frame = ld.dual_frame()
    gb = dual_graded_bracket(ld)
    rng = rng_for(seed)
    witness = None
    checked = 0
    from .extension import extend_bracket

    for _ in range(samples):
        checked += 1
        sections = []
        for _ in range(n):
            comps = [Poly.zero(ld.base_dim)] * ld.fiber_rank
            for _ in range(2):
                i = rng.randrange(ld.fiber_rank)
                comps[i] = comps[i] + random_poly(rng, ld.base_dim, degree_bound, max_terms=2)
            sections.append(MultiVector.from_components(frame, comps))
        lhs_section = extend_bracket(gb, *sections)
        lhs = linear_function(ld, lhs_section) if not lhs_section.is_zero() else Poly.zero(ld.total_dim)
        rhs = nambu_bracket(ld.tensor, [linear_function(ld, s) for s in sections])
        defect = lhs - rhs
        if not defect.is_zero():
            witness = Witness(tuple(str(s) for s in sections), str(defect))
            break
    return VerificationReport(
        (
            CheckItem(
                axiom="defining_equation",
                description="l_[a_1..a_n] agrees with {l_a1, .., l_an}",
                passed=witness is None,
                checked=checked,
                witness=witness,
                scope=f"{samples} random dual sections",
            ),
        )
    )
