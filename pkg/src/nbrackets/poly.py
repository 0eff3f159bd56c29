"""Exact sparse multivariate polynomials over the rationals.

A polynomial in m variables x1..xm is stored as a mapping from exponent
tuples (length m, non-negative ints) to nonzero Fraction coefficients.
The zero polynomial is the empty mapping.  All arithmetic is exact, so
identity checks reduce to equality with the zero polynomial.

Term iteration order is lexicographic on exponent tuples, which makes
string rendering and serialization canonical.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Poly:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: Mapping[Exponent, Fraction] | None = None):
        if num_vars < 0:
            raise ValueError(f"num_vars must be >= 0, got {num_vars}")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != num_vars:
                    raise ValueError(
                        f"exponent tuple {exps} has length {len(exps)}, expected {num_vars}"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = Fraction(coeff)
                if c != 0:
                    clean[tuple(exps)] = c
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Poly is immutable")

    def __getstate__(self):
        return self.num_vars, self.terms

    def __setstate__(self, state):
        object.__setattr__(self, "num_vars", state[0])
        object.__setattr__(self, "terms", state[1])

    # -- constructors ------------------------------------------------------

    @classmethod
    def _raw(cls, num_vars: int, terms: dict[Exponent, Fraction]) -> "Poly":
        """Unchecked constructor for trusted internal hot paths."""
        p = cls.__new__(cls)
        object.__setattr__(p, "num_vars", num_vars)
        object.__setattr__(p, "terms", terms)
        return p

    @classmethod
    def zero(cls, num_vars: int) -> "Poly":
        return cls(num_vars)

    @classmethod
    def const(cls, num_vars: int, value) -> "Poly":
        c = Fraction(value)
        if c == 0:
            return cls(num_vars)
        return cls(num_vars, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "Poly":
        """The coordinate polynomial for variable ``index`` (0-based)."""
        if not 0 <= index < num_vars:
            raise ValueError(f"variable index {index} out of range for {num_vars} variables")
        exps = [0] * num_vars
        exps[index] = 1
        return cls(num_vars, {tuple(exps): _ONE})

    @classmethod
    def monomial(cls, num_vars: int, exps: Iterable[int], coeff=1) -> "Poly":
        return cls(num_vars, {tuple(exps): Fraction(coeff)})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        """The coefficient of the constant term (0 if absent)."""
        return self.terms.get((0,) * self.num_vars, _ZERO)

    def total_degree(self) -> int:
        """Max total degree of any term; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(sum(exps) for exps in self.terms)

    # -- arithmetic --------------------------------------------------------

    def _check_vars(self, other: "Poly") -> None:
        if self.num_vars != other.num_vars:
            raise ValueError(
                f"variable-count mismatch: {self.num_vars} vs {other.num_vars}"
            )

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_vars(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps, _ZERO) + coeff
            if acc == 0:
                out.pop(exps, None)
            else:
                out[exps] = acc
        return Poly(self.num_vars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_vars(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps, _ZERO) - coeff
            if acc == 0:
                out.pop(exps, None)
            else:
                out[exps] = acc
        return Poly(self.num_vars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_vars(other)
        if not self.terms or not other.terms:
            return Poly(self.num_vars)
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(exps, _ZERO) + ca * cb
                if acc == 0:
                    out.pop(exps, None)
                else:
                    out[exps] = acc
        return Poly(self.num_vars, out)

    def __rmul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, factor) -> "Poly":
        f = Fraction(factor)
        if f == 0:
            return Poly(self.num_vars)
        return Poly(self.num_vars, {e: c * f for e, c in self.terms.items()})

    def partial(self, index: int) -> "Poly":
        """Partial derivative with respect to variable ``index`` (0-based)."""
        if not 0 <= index < self.num_vars:
            raise ValueError(f"variable index {index} out of range for {self.num_vars} variables")
        out: dict[Exponent, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            lowered = list(exps)
            lowered[index] = e - 1
            out[tuple(lowered)] = coeff * e
        return Poly(self.num_vars, out)

    def extend_vars(self, num_vars: int, offset: int = 0) -> "Poly":
        """Re-embed into a ring with ``num_vars`` variables, shifting by ``offset``."""
        if offset < 0 or offset + self.num_vars > num_vars:
            raise ValueError("embedding does not fit the target variable count")
        tail = num_vars - offset - self.num_vars
        out = {
            (0,) * offset + exps + (0,) * tail: coeff for exps, coeff in self.terms.items()
        }
        return Poly(num_vars, out)

    # -- comparisons and hashing -------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.num_vars, tuple(sorted(self.terms.items()))))

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in canonical (lexicographic on exponents) order."""
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        return f"Poly({self.num_vars}, {self!s})"

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(p: Poly) -> str:
    """Render in the literal syntax accepted by :func:`parse_poly`."""
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for exps, coeff in p.sorted_terms():
        factors = [
            f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
            for i, e in enumerate(exps)
            if e > 0
        ]
        mag = abs(coeff)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


_TERM_SPLIT = re.compile(r"(?<![\^/*])([+-])")
_FACTOR_RE = re.compile(
    r"^(?:(?P<num>\d+)(?:/(?P<den>\d+))?|x(?P<var>\d+)(?:\^(?P<exp>\d+))?)$"
)


def parse_poly(text: str, num_vars: int) -> Poly:
    """Parse a polynomial literal: sum of terms ``c * x1^e1 * ... * xm^em``.

    The coefficient c is an integer or a rational ``p/q`` and may be omitted
    when a variable factor is present.  ``0`` denotes the zero polynomial.
    """
    compact = text.replace(" ", "")
    if not compact:
        raise ValueError("empty polynomial literal")
    terms: dict[Exponent, Fraction] = {}
    # Split into signed terms, keeping the sign tokens.
    chunks = _TERM_SPLIT.split(compact)
    if chunks[0] == "":
        chunks = chunks[1:]
    else:
        chunks = ["+"] + chunks
    if len(chunks) % 2 != 0:
        raise ValueError(f"malformed polynomial literal: {text!r}")
    for sign_tok, body in zip(chunks[0::2], chunks[1::2]):
        if not body:
            raise ValueError(f"dangling sign in polynomial literal: {text!r}")
        sign = 1 if sign_tok == "+" else -1
        coeff = Fraction(sign)
        exps = [0] * num_vars
        for factor in body.split("*"):
            m = _FACTOR_RE.match(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r} in polynomial literal: {text!r}")
            if m.group("num") is not None:
                den = m.group("den")
                coeff *= Fraction(int(m.group("num")), int(den) if den else 1)
            else:
                var = int(m.group("var"))
                if not 1 <= var <= num_vars:
                    raise ValueError(
                        f"variable x{var} out of range (expected x1..x{num_vars})"
                    )
                exps[var - 1] += int(m.group("exp") or 1)
        key = tuple(exps)
        acc = terms.get(key, _ZERO) + coeff
        if acc == 0:
            terms.pop(key, None)
        else:
            terms[key] = acc
    return Poly(num_vars, terms)


def monomials_upto(num_vars: int, max_degree: int, include_constant: bool = False) -> list[Exponent]:
    """Exponent tuples of total degree <= max_degree in graded-lex order.

    Graded-lex: sorted by total degree first, then lexicographically on the
    exponent tuple.  Witness enumeration relies on this order everywhere.
    """
    out: list[Exponent] = []
    for degree in range(0 if include_constant else 1, max_degree + 1):
        batch: list[Exponent] = []

        def exact(prefix: list[int], remaining: int, slot: int) -> None:
            if slot == num_vars - 1:
                batch.append(tuple(prefix + [remaining]))
                return
            for e in range(remaining + 1):
                exact(prefix + [e], remaining - e, slot + 1)

        if num_vars == 0:
            if degree == 0:
                batch.append(())
        else:
            exact([], degree, 0)
        out.extend(sorted(batch))
    return out


def poly_det(rows: list[list[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials, by permutation expansion.

    Zero entries short-circuit, which matters for the sparse pairing
    matrices this is used on.
    """
    size = len(rows)
    if size == 0:
        raise ValueError("empty matrix")
    num_vars = rows[0][0].num_vars
    acc = Poly.zero(num_vars)

    # Sign bookkeeping: choosing column c for this row adds one inversion per
    # already-used column to the right of c.
    def expand(row: int, used: int, product: Poly, sign: int) -> None:
        nonlocal acc
        if row == size:
            acc = acc + product if sign > 0 else acc - product
            return
        seen_used = 0
        for col in range(size):
            bit = 1 << col
            if used & bit:
                seen_used += 1
                continue
            entry = rows[row][col]
            if entry.terms:
                s = sign if (row - seen_used) % 2 == 0 else -sign
                expand(row + 1, used | bit, product * entry, s)

    expand(0, 0, Poly.const(num_vars, 1), 1)
    return acc
