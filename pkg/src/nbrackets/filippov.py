"""n-ary brackets on a finite frame given by structure constants.

A StructureConstants table stores the bracket of strictly increasing frame
tuples only; every other value is reconstructed through the alternation
sign.  Entries are polynomials so the same type serves both constant-
coefficient n-Lie algebras and section brackets over a coordinate patch.

The checkers here are exhaustive over frame tuples.  Because the bracket
is multilinear, frame tuples are a complete certificate for the plain
(constant-coefficient) axioms; coefficient-aware algebroid laws live in
the extension module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exterior import MultiVector, sort_with_sign
from .poly import Poly, poly_det
from .report import CheckItem, VerificationReport, Witness

BracketFn = Callable[[tuple[int, ...]], list[Poly]]


@dataclass(frozen=True)
class StructureConstants:
    """Arity-n bracket table on a frame of size dim.

    ``table`` maps strictly increasing n-tuples of 0-based frame indices to
    coefficient vectors of length dim.  ``num_vars`` is the number of base
    coordinates the coefficients may depend on (0 for plain algebras).
    """

    dim: int
    arity: int
    num_vars: int
    table: dict[tuple[int, ...], tuple[Poly, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.arity < 2:
            raise ValueError("arity must be >= 2")
        for key, value in self.table.items():
            if len(key) != self.arity:
                raise ValueError(f"key {key} does not have arity {self.arity}")
            if any(a >= b for a, b in zip(key, key[1:])):
                raise ValueError(f"key {key} is not strictly increasing")
            if any(not 0 <= i < self.dim for i in key):
                raise ValueError(f"key {key} out of range for dim {self.dim}")
            if len(value) != self.dim:
                raise ValueError(f"value for {key} must have length {self.dim}")
            for p in value:
                if p.num_vars != self.num_vars:
                    raise ValueError("entry variable count does not match num_vars")

    def zero_vector(self) -> list[Poly]:
        return [Poly.zero(self.num_vars)] * self.dim

    def bracket_of_frame_tuple(self, indices: tuple[int, ...]) -> list[Poly]:
        """Bracket of frame elements, reconstructed by the alternation sign."""
        key, sign = sort_with_sign(indices)
        if sign == 0:
            return self.zero_vector()
        value = self.table.get(key)
        if value is None:
            return self.zero_vector()
        return [p if sign > 0 else -p for p in value]

    def is_constant(self) -> bool:
        return all(p.is_constant() for value in self.table.values() for p in value)

    def map_entries(self, fn: Callable[[Poly], Poly]) -> "StructureConstants":
        return StructureConstants(
            self.dim,
            self.arity,
            self.num_vars,
            {k: tuple(fn(p) for p in v) for k, v in self.table.items()},
        )


def unit_vector(sc: StructureConstants, index: int) -> list[Poly]:
    vec = sc.zero_vector()
    vec[index] = Poly.const(sc.num_vars, 1)
    return vec


def sc_bracket(sc: StructureConstants, vectors: Sequence[Sequence[Poly]]) -> list[Poly]:
    """Multilinear alternating expansion of the table on coefficient vectors.

    For each increasing key K the contribution is det(M) * table[K] where
    M[t][s] = vectors[t][K[s]].
    """
    if len(vectors) != sc.arity:
        raise ValueError(f"expected {sc.arity} vectors, got {len(vectors)}")
    for v in vectors:
        if len(v) != sc.dim:
            raise ValueError("dimension mismatch in bracket argument")
    out = sc.zero_vector()
    for key, value in sc.table.items():
        rows = [[v[i] for i in key] for v in vectors]
        det = poly_det(rows)
        if det.is_zero():
            continue
        out = [acc + det * val for acc, val in zip(out, value)]
    return out


def _vector_is_zero(vec: Sequence[Poly]) -> bool:
    return all(p.is_zero() for p in vec)


def _format_tuple(indices: Sequence[int]) -> str:
    return "(" + ", ".join(f"e{i + 1}" for i in indices) + ")"


def _format_vector(vec: Sequence[Poly]) -> str:
    parts = [f"({p})*e{i + 1}" for i, p in enumerate(vec) if not p.is_zero()]
    return " + ".join(parts) if parts else "0"


def check_alternating(sc: StructureConstants, bracket_fn: BracketFn | None = None) -> VerificationReport:
    """Exhaustively verify vanishing on repeats and sign flips on swaps.

    ``bracket_fn`` exists as a test hook: checkers must catch a corrupted
    sign reconstruction, so the evaluation path is injectable.
    """
    fn = bracket_fn or sc.bracket_of_frame_tuple
    checked = 0
    for indices in itertools.product(range(sc.dim), repeat=sc.arity):
        checked += 1
        value = fn(indices)
        if len(set(indices)) < len(indices):
            if not _vector_is_zero(value):
                return VerificationReport(
                    (
                        CheckItem(
                            axiom="alternating",
                            description="bracket vanishes on repeated frame entries",
                            passed=False,
                            checked=checked,
                            witness=Witness(( _format_tuple(indices),), _format_vector(value)),
                            scope=f"exhaustive over {sc.dim ** sc.arity} frame tuples",
                        ),
                    )
                )
            continue
        for pos in range(sc.arity - 1):
            swapped = list(indices)
            swapped[pos], swapped[pos + 1] = swapped[pos + 1], swapped[pos]
            flipped = fn(tuple(swapped))
            defect = [a + b for a, b in zip(value, flipped)]
            if not _vector_is_zero(defect):
                return VerificationReport(
                    (
                        CheckItem(
                            axiom="alternating",
                            description="bracket flips sign under adjacent transpositions",
                            passed=False,
                            checked=checked,
                            witness=Witness(
                                (_format_tuple(indices), f"swap positions {pos + 1},{pos + 2}"),
                                _format_vector(defect),
                            ),
                            scope=f"exhaustive over {sc.dim ** sc.arity} frame tuples",
                        ),
                    )
                )
    return VerificationReport(
        (
            CheckItem(
                axiom="alternating",
                description="bracket vanishes on repeated frame entries and flips sign under adjacent transpositions",
                passed=True,
                checked=checked,
                scope=f"exhaustive over {sc.dim ** sc.arity} frame tuples",
            ),
        )
    )


def fundamental_identity_defect(
    sc: StructureConstants,
    a_indices: tuple[int, ...],
    b_indices: tuple[int, ...],
    bracket_fn: BracketFn | None = None,
) -> list[Poly]:
    """[a, [b]] - sum_i [b_1, ..., [a, b_i], ..., b_n] on frame tuples."""
    fn = bracket_fn or sc.bracket_of_frame_tuple
    inner = fn(b_indices)
    a_vectors = [unit_vector(sc, i) for i in a_indices]
    lhs = sc_bracket(sc, a_vectors + [inner])
    rhs = sc.zero_vector()
    for i, b in enumerate(b_indices):
        replaced = fn(a_indices + (b,))
        if _vector_is_zero(replaced):
            continue
        slot_vectors = [unit_vector(sc, j) for j in b_indices]
        slot_vectors[i] = replaced
        term = sc_bracket(sc, slot_vectors)
        rhs = [acc + t for acc, t in zip(rhs, term)]
    return [l - r for l, r in zip(lhs, rhs)]


def check_fundamental_identity(
    sc: StructureConstants, bracket_fn: BracketFn | None = None
) -> VerificationReport:
    """Exhaustive fundamental identity over all dim^(2n-1) frame tuples."""
    n = sc.arity
    total = sc.dim ** (2 * n - 1)
    checked = 0
    for a_indices in itertools.product(range(sc.dim), repeat=n - 1):
        for b_indices in itertools.product(range(sc.dim), repeat=n):
            checked += 1
            defect = fundamental_identity_defect(sc, a_indices, b_indices, bracket_fn)
            if not _vector_is_zero(defect):
                return VerificationReport(
                    (
                        CheckItem(
                            axiom="fundamental_identity",
                            description="[a_1..a_{n-1},[b_1..b_n]] equals the sum of inner replacements",
                            passed=False,
                            checked=checked,
                            witness=Witness(
                                (_format_tuple(a_indices), _format_tuple(b_indices)),
                                _format_vector(defect),
                            ),
                            scope=f"exhaustive over {total} frame tuples",
                        ),
                    )
                )
    return VerificationReport(
        (
            CheckItem(
                axiom="fundamental_identity",
                description="[a_1..a_{n-1},[b_1..b_n]] equals the sum of inner replacements",
                passed=True,
                checked=checked,
                scope=f"exhaustive over {total} frame tuples",
            ),
        )
    )


def check_graded_fi(
    bracket: Callable[..., MultiVector],
    degree_one: Sequence[MultiVector],
    generators: Sequence[MultiVector],
    arity: int,
    max_tuples: int | None = None,
) -> VerificationReport:
    """Graded fundamental identity with the first n-1 slots of degree 1.

    The identity carries no Koszul signs precisely because the a-slots are
    degree-1 (degree 0 after the shift), which is the only case the graded
    axiom quantifies over.
    """
    checked = 0
    scope_note = f"a-slots from {len(degree_one)} degree-1 elements, b-slots from {len(generators)} generators"
    combos = itertools.product(
        itertools.combinations(range(len(degree_one)), arity - 1),
        itertools.combinations(range(len(generators)), arity),
    )
    for a_pick, b_pick in combos:
        if max_tuples is not None and checked >= max_tuples:
            break
        checked += 1
        a_elems = [degree_one[i] for i in a_pick]
        b_elems = [generators[i] for i in b_pick]
        lhs = bracket(*a_elems, bracket(*b_elems))
        rhs = MultiVector.zero(lhs.frame)
        for i in range(arity):
            inner = bracket(*a_elems, b_elems[i])
            slots = list(b_elems)
            slots[i] = inner
            rhs = rhs + bracket(*slots)
        defect = lhs - rhs
        if not defect.is_zero():
            return VerificationReport(
                (
                    CheckItem(
                        axiom="graded_fundamental_identity",
                        description="graded fundamental identity with degree-1 leading slots",
                        passed=False,
                        checked=checked,
                        witness=Witness(
                            tuple(str(e) for e in a_elems) + tuple(str(e) for e in b_elems),
                            str(defect),
                        ),
                        scope=scope_note,
                    ),
                )
            )
    return VerificationReport(
        (
            CheckItem(
                axiom="graded_fundamental_identity",
                description="graded fundamental identity with degree-1 leading slots",
                passed=True,
                checked=checked,
                scope=scope_note,
            ),
        )
    )


def conjugate(sc: StructureConstants, matrix: list[list[Fraction]]) -> StructureConstants:
    """Structure constants in the basis f_j = sum_i matrix[i][j] e_i.

    Used by the basis-independence property test; requires an invertible
    rational matrix.
    """
    from .linalg import invert

    inverse = invert(matrix)
    columns = [
        [Poly.const(sc.num_vars, matrix[i][j]) for i in range(sc.dim)] for j in range(sc.dim)
    ]
    table: dict[tuple[int, ...], tuple[Poly, ...]] = {}
    for key in itertools.combinations(range(sc.dim), sc.arity):
        value_old = sc_bracket(sc, [columns[j] for j in key])
        # Re-express in the new basis: coordinates are inverse * value.
        value_new = [
            sum(
                (Poly.const(sc.num_vars, inverse[j][i]) * value_old[i] for i in range(sc.dim)),
                Poly.zero(sc.num_vars),
            )
            for j in range(sc.dim)
        ]
        if not _vector_is_zero(value_new):
            table[key] = tuple(value_new)
    return StructureConstants(sc.dim, sc.arity, sc.num_vars, table)
