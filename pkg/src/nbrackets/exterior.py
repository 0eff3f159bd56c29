"""Graded exterior algebra over a trivialized frame with polynomial coefficients.

Everything lives on a single coordinate patch R^m.  A Frame names a
trivialized bundle (tangent, cotangent, or an abstract rank-r bundle and
its dual) and a MultiVector is a graded sum of frame monomials

    coeff * e_{i1} ^ ... ^ e_{ik},    i1 < ... < ik,

with Poly coefficients in the base coordinates.  Forms are MultiVectors
over a cotangent or dual-bundle frame; no separate class is needed.

Sign conventions, fixed once and locked by the test suite:

* wedge concatenates index tuples and sorts with the permutation sign;
* contraction by a degree-1 field is the usual degree -1 derivation;
* contraction by a decomposable X1 ^ ... ^ Xk contracts X1 first, then
  X2, and so on (so i_{d1 ^ d2}(dx1 ^ dx2 ^ dx3) = dx3);
* the Lie derivative is the Cartan formula i_X d + d i_X.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .poly import Poly, poly_det

TANGENT = "tangent"
COTANGENT = "cotangent"
BUNDLE = "bundle"
DUAL_BUNDLE = "dual-bundle"

_KINDS = (TANGENT, COTANGENT, BUNDLE, DUAL_BUNDLE)
_DUAL_KIND = {TANGENT: COTANGENT, COTANGENT: TANGENT, BUNDLE: DUAL_BUNDLE, DUAL_BUNDLE: BUNDLE}

# Human-readable frame element prefixes, used in witness rendering.
_ELEMENT_FMT = {TANGENT: "Dx{}", COTANGENT: "dx{}", BUNDLE: "a{}", DUAL_BUNDLE: "a*{}"}


@dataclass(frozen=True)
class Frame:
    """A trivialized frame: m base coordinates and r frame elements."""

    base_dim: int
    fiber_rank: int
    kind: str

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown frame kind {self.kind!r}")
        if self.kind in (TANGENT, COTANGENT) and self.fiber_rank != self.base_dim:
            raise ValueError("tangent/cotangent frames require fiber_rank == base_dim")
        if self.base_dim < 0 or self.fiber_rank < 0:
            raise ValueError("dimensions must be non-negative")

    @property
    def dual(self) -> "Frame":
        return Frame(self.base_dim, self.fiber_rank, _DUAL_KIND[self.kind])

    def is_dual_of(self, other: "Frame") -> bool:
        return self.dual == other

    def element_name(self, index: int) -> str:
        return _ELEMENT_FMT[self.kind].format(index + 1)


def tangent_frame(m: int) -> Frame:
    return Frame(m, m, TANGENT)


def cotangent_frame(m: int) -> Frame:
    return Frame(m, m, COTANGENT)


def bundle_frame(m: int, r: int) -> Frame:
    return Frame(m, r, BUNDLE)


def dual_bundle_frame(m: int, r: int) -> Frame:
    return Frame(m, r, DUAL_BUNDLE)


def sort_with_sign(indices: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sort an index tuple, returning (sorted tuple, permutation sign).

    Sign is 0 when an index repeats.
    """
    idx = list(indices)
    sign = 1
    # Insertion sort; counts transpositions exactly.
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and idx[j - 1] == idx[j]:
            return tuple(idx), 0
    return tuple(idx), sign


class MultiVector:
    """Graded exterior-algebra element: increasing index tuples -> Poly."""

    __slots__ = ("frame", "terms")

    def __init__(self, frame: Frame, terms: Mapping[tuple[int, ...], Poly] | None = None):
        clean: dict[tuple[int, ...], Poly] = {}
        if terms:
            for indices, coeff in terms.items():
                key = tuple(indices)
                if any(not 0 <= i < frame.fiber_rank for i in key):
                    raise ValueError(f"frame index out of range in {key}")
                if any(a >= b for a, b in zip(key, key[1:])):
                    raise ValueError(f"index tuple {key} is not strictly increasing")
                if coeff.num_vars != frame.base_dim:
                    raise ValueError(
                        f"coefficient has {coeff.num_vars} variables, frame base has {frame.base_dim}"
                    )
                if not coeff.is_zero():
                    clean[key] = coeff
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("MultiVector is immutable")

    def __getstate__(self):
        return self.frame, self.terms

    def __setstate__(self, state):
        object.__setattr__(self, "frame", state[0])
        object.__setattr__(self, "terms", state[1])

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, frame: Frame) -> "MultiVector":
        return cls(frame)

    @classmethod
    def from_poly(cls, frame: Frame, p: Poly) -> "MultiVector":
        return cls(frame, {(): p})

    @classmethod
    def frame_element(cls, frame: Frame, index: int) -> "MultiVector":
        return cls(frame, {(index,): Poly.const(frame.base_dim, 1)})

    @classmethod
    def monomial(cls, frame: Frame, indices: Iterable[int], coeff: Poly) -> "MultiVector":
        key, sign = sort_with_sign(tuple(indices))
        if sign == 0:
            return cls(frame)
        return cls(frame, {key: coeff if sign > 0 else -coeff})

    @classmethod
    def from_components(cls, frame: Frame, components: Sequence[Poly]) -> "MultiVector":
        """Degree-1 element with the given frame components."""
        if len(components) != frame.fiber_rank:
            raise ValueError("component count must equal the fiber rank")
        return cls(frame, {(i,): c for i, c in enumerate(components)})

    # -- structure ---------------------------------------------------------

    def _check_frame(self, other: "MultiVector") -> None:
        if self.frame != other.frame:
            raise ValueError(f"frame mismatch: {self.frame} vs {other.frame}")

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = self.degrees()
        if degree is None:
            return len(degs) <= 1
        return degs in (set(), {degree})

    def degree(self) -> int:
        """Degree of a homogeneous element (0 for the zero element)."""
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop()

    def homogeneous_part(self, degree: int) -> "MultiVector":
        return MultiVector(
            self.frame, {k: v for k, v in self.terms.items() if len(k) == degree}
        )

    def homogeneous_parts(self) -> dict[int, "MultiVector"]:
        return {d: self.homogeneous_part(d) for d in sorted(self.degrees())}

    def component(self, index: int) -> Poly:
        """Degree-1 component for a frame index."""
        return self.terms.get((index,), Poly.zero(self.frame.base_dim))

    def components(self) -> list[Poly]:
        return [self.component(i) for i in range(self.frame.fiber_rank)]

    def scalar_part(self) -> Poly:
        return self.terms.get((), Poly.zero(self.frame.base_dim))

    # -- linear arithmetic ---------------------------------------------------

    def __add__(self, other: "MultiVector") -> "MultiVector":
        if not isinstance(other, MultiVector):
            return NotImplemented
        self._check_frame(other)
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = out.get(key)
            acc = coeff if acc is None else acc + coeff
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
        return MultiVector(self.frame, out)

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + (-other)

    def __neg__(self) -> "MultiVector":
        return MultiVector(self.frame, {k: -v for k, v in self.terms.items()})

    def __mul__(self, factor) -> "MultiVector":
        if isinstance(factor, Poly):
            return MultiVector(self.frame, {k: v * factor for k, v in self.terms.items()})
        if isinstance(factor, (int, Fraction)):
            return MultiVector(self.frame, {k: v.scale(factor) for k, v in self.terms.items()})
        return NotImplemented

    def __rmul__(self, factor) -> "MultiVector":
        return self.__mul__(factor)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self.frame == other.frame and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.frame, tuple(sorted((k, hash(v)) for k, v in self.terms.items()))))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Poly]]:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for key, coeff in self.sorted_terms():
            mono = "^".join(self.frame.element_name(i) for i in key) if key else "1"
            pieces.append(f"({coeff}) {mono}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"MultiVector[{self.frame.kind}]({self!s})"


Form = MultiVector  # Forms are multivectors over a cotangent or dual-bundle frame.


def wedge(a: MultiVector, b: MultiVector) -> MultiVector:
    """Exterior product; bilinear over Poly coefficients."""
    a._check_frame(b)
    out: dict[tuple[int, ...], Poly] = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            key, sign = sort_with_sign(ka + kb)
            if sign == 0:
                continue
            coeff = ca * cb
            if sign < 0:
                coeff = -coeff
            acc = out.get(key)
            acc = coeff if acc is None else acc + coeff
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
    return MultiVector(a.frame, out)


def wedge_all(factors: Sequence[MultiVector]) -> MultiVector:
    if not factors:
        raise ValueError("need at least one factor")
    acc = factors[0]
    for f in factors[1:]:
        acc = wedge(acc, f)
    return acc


def pairing(beta: MultiVector, x: MultiVector) -> Poly:
    """Duality pairing of a degree-1 form with a degree-1 (multi)vector."""
    if not beta.frame.is_dual_of(x.frame):
        raise ValueError("pairing requires mutually dual frames")
    if not beta.is_homogeneous(1) or not x.is_homogeneous(1):
        raise ValueError("pairing is defined on degree-1 elements")
    acc = Poly.zero(beta.frame.base_dim)
    for (i,), coeff in beta.terms.items():
        other = x.terms.get((i,))
        if other is not None:
            acc = acc + coeff * other
    return acc


def _contract_single(index: int, w: MultiVector) -> MultiVector:
    """Interior product by the frame element with the given index."""
    out: dict[tuple[int, ...], Poly] = {}
    for key, coeff in w.terms.items():
        if index not in key:
            continue
        pos = key.index(index)
        new_key = key[:pos] + key[pos + 1 :]
        c = coeff if pos % 2 == 0 else -coeff
        acc = out.get(new_key)
        acc = c if acc is None else acc + c
        if acc.is_zero():
            out.pop(new_key, None)
        else:
            out[new_key] = acc
    return MultiVector(w.frame, out)


def contract(x: MultiVector, w: MultiVector) -> MultiVector:
    """Interior product i_X w.

    For degree-1 X this is the degree -1 derivation; a decomposable
    X1 ^ ... ^ Xk contracts X1 first, then X2, and so on.  Terms of X
    whose degree exceeds the available degree of w contribute zero.
    """
    if not x.frame.is_dual_of(w.frame):
        raise ValueError("contraction requires mutually dual frames")
    result = MultiVector.zero(w.frame)
    for key, coeff in x.terms.items():
        if not key:
            # Degree-0 part of X acts by multiplication.
            result = result + w * coeff
            continue
        partial = w
        for index in key:
            partial = _contract_single(index, partial)
            if partial.is_zero():
                break
        result = result + partial * coeff
    return result


def de_rham_d(w: MultiVector) -> MultiVector:
    """Exterior derivative on forms over a cotangent frame."""
    if w.frame.kind != COTANGENT:
        raise ValueError("exterior derivative requires a cotangent frame")
    out = MultiVector.zero(w.frame)
    for key, coeff in w.terms.items():
        for i in range(w.frame.base_dim):
            d_coeff = coeff.partial(i)
            if d_coeff.is_zero():
                continue
            out = out + MultiVector.monomial(w.frame, (i,) + key, d_coeff)
    return out


def differential(f: Poly) -> MultiVector:
    """df as a degree-1 form over the cotangent frame of f's variables."""
    frame = cotangent_frame(f.num_vars)
    comps: dict[tuple[int, ...], Poly] = {}
    for i in range(f.num_vars):
        p = f.partial(i)
        if not p.is_zero():
            comps[(i,)] = p
    return MultiVector(frame, comps)


def apply_vector_field(x: MultiVector, f: Poly) -> Poly:
    """Derivative of a function along a degree-1 tangent field."""
    if x.frame.kind != TANGENT:
        raise ValueError("vector-field action requires a tangent frame")
    if not x.is_homogeneous(1):
        raise ValueError("vector-field action requires a degree-1 field")
    acc = Poly.zero(f.num_vars)
    for (i,), coeff in x.terms.items():
        p = f.partial(i)
        if not p.is_zero():
            acc = acc + coeff * p
    return acc


def lie_derivative(x: MultiVector, w: MultiVector) -> MultiVector:
    """Cartan formula L_X = i_X d + d i_X for a degree-1 tangent field."""
    if x.frame.kind != TANGENT or not x.is_homogeneous(1):
        raise ValueError("Lie derivative requires a degree-1 tangent field")
    if w.frame.kind != COTANGENT:
        raise ValueError("Lie derivative acts on forms over the cotangent frame")
    return contract(x, de_rham_d(w)) + de_rham_d(contract(x, w))


def vf_bracket(x: MultiVector, y: MultiVector) -> MultiVector:
    """Commutator of two vector fields: [X, Y]_k = X(Y_k) - Y(X_k)."""
    if x.frame.kind != TANGENT or y.frame.kind != TANGENT:
        raise ValueError("vector-field bracket requires tangent frames")
    x._check_frame(y)
    if not (x.is_homogeneous(1) and y.is_homogeneous(1)):
        raise ValueError("vector-field bracket requires degree-1 fields")
    components = [
        apply_vector_field(x, y.component(k)) - apply_vector_field(y, x.component(k))
        for k in range(x.frame.fiber_rank)
    ]
    return MultiVector.from_components(x.frame, components)


def eval_multivector(p: MultiVector, forms: Sequence[MultiVector]) -> Poly:
    """Full contraction P(w1, ..., wn) of a degree-n multivector with n
    degree-1 forms: sum over P's monomials of coeff * det of the pairing
    matrix.
    """
    n = len(forms)
    if not p.is_homogeneous(n):
        raise ValueError(f"multivector must be homogeneous of degree {n}")
    for w in forms:
        if not w.frame.is_dual_of(p.frame):
            raise ValueError("arguments must live in the dual frame")
        if not w.is_homogeneous(1):
            raise ValueError("arguments must be degree-1 forms")
    m = p.frame.base_dim
    acc = Poly.zero(m)
    zero = Poly.zero(m)
    for key, coeff in p.terms.items():
        rows = [[w.terms.get((i,), zero) for i in key] for w in forms]
        det = poly_det(rows)
        if not det.is_zero():
            acc = acc + coeff * det
    return acc
