"""Deterministic test families: monomial sweeps and seeded random elements.

All randomized identity checks in the package draw from a single seeded
``random.Random`` so that reports are reproducible bit-for-bit.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator, Sequence

from .exterior import Frame, MultiVector
from .poly import Poly, monomials_upto


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def random_fraction(rng: random.Random) -> Fraction:
    num = rng.choice([-3, -2, -1, 1, 2, 3])
    den = rng.choice([1, 1, 2])
    return Fraction(num, den)


def random_poly(rng: random.Random, num_vars: int, max_degree: int, max_terms: int = 3) -> Poly:
    """Random nonzero polynomial with small rational coefficients."""
    pool = monomials_upto(num_vars, max_degree, include_constant=True)
    n_terms = rng.randint(1, max_terms)
    terms: dict[tuple[int, ...], Fraction] = {}
    for _ in range(n_terms):
        exps = rng.choice(pool)
        terms[exps] = terms.get(exps, Fraction(0)) + random_fraction(rng)
    p = Poly(num_vars, terms)
    if p.is_zero():
        return Poly.variable(num_vars, rng.randrange(num_vars)) if num_vars else Poly.const(0, 1)
    return p


def random_form(rng: random.Random, frame: Frame, coeff_degree: int, max_terms: int = 2) -> MultiVector:
    """Random degree-1 form or field over the given frame."""
    comps = [Poly.zero(frame.base_dim)] * frame.fiber_rank
    for _ in range(max_terms):
        i = rng.randrange(frame.fiber_rank)
        comps[i] = comps[i] + random_poly(rng, frame.base_dim, coeff_degree, max_terms=2)
    mv = MultiVector.from_components(frame, comps)
    if mv.is_zero():
        return MultiVector.frame_element(frame, 0)
    return mv


def random_multivector(
    rng: random.Random, frame: Frame, degree: int, coeff_degree: int, max_terms: int = 2
) -> MultiVector:
    """Random homogeneous multivector of the given degree."""
    if degree == 0:
        return MultiVector.from_poly(frame, random_poly(rng, frame.base_dim, coeff_degree))
    acc = MultiVector.zero(frame)
    keys = list(itertools.combinations(range(frame.fiber_rank), degree))
    for _ in range(max_terms):
        key = rng.choice(keys)
        acc = acc + MultiVector.monomial(
            frame, key, random_poly(rng, frame.base_dim, coeff_degree, max_terms=2)
        )
    if acc.is_zero():
        acc = MultiVector.monomial(frame, keys[0], Poly.const(frame.base_dim, 1))
    return acc


def monomial_polys(num_vars: int, max_degree: int, include_constant: bool = False) -> list[Poly]:
    return [
        Poly.monomial(num_vars, exps)
        for exps in monomials_upto(num_vars, max_degree, include_constant)
    ]


def monomial_sections(frame: Frame, max_degree: int) -> list[MultiVector]:
    """Degree-1 frame sections with monomial coefficients, x^a * e_i.

    Constant coefficients (the bare frame elements) come first; graded-lex
    order throughout.
    """
    out = []
    for exps in monomials_upto(frame.base_dim, max_degree, include_constant=True):
        coeff = Poly.monomial(frame.base_dim, exps)
        for i in range(frame.fiber_rank):
            out.append(MultiVector(frame, {(i,): coeff}))
    return out


def sweep_tuples(
    families: Sequence[Sequence],
    samples: int,
    rng: random.Random,
    exhaustive_cap: int | None = None,
) -> tuple[Iterator[tuple], int, str]:
    """Iterate over tuples drawn from per-slot families.

    Returns (iterator, count, scope description).  If the full product is
    no larger than the cap (default: the sample count), every tuple is
    produced in order; otherwise ``samples`` tuples are drawn with the
    seeded generator, so the sweep stays deterministic.
    """
    total = 1
    for fam in families:
        total *= len(fam)
    cap = exhaustive_cap if exhaustive_cap is not None else samples
    if total <= cap:
        return itertools.product(*families), total, f"exhaustive over {total} tuples"

    def draw() -> Iterator[tuple]:
        for _ in range(samples):
            yield tuple(rng.choice(fam) for fam in families)

    return draw(), samples, f"{samples} sampled of {total} tuples"


def increasing_tuples(family: Sequence, size: int) -> list[tuple]:
    return list(itertools.combinations(family, size))
