"""Small exact linear algebra over Fraction matrices.

Only what the checkers need: reduced row echelon form, kernel bases, and
inverses, all over the rationals so results are exact and deterministic.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]


def rref(matrix: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot column indices."""
    rows = [list(map(Fraction, row)) for row in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def kernel_basis(matrix: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of the null space of ``matrix`` (ncols unknowns).

    Deterministic: one basis vector per free column, in column order, with a
    1 in the free slot.
    """
    if not matrix:
        return [
            [Fraction(1) if i == j else Fraction(0) for i in range(ncols)]
            for j in range(ncols)
        ]
    reduced, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis: list[list[Fraction]] = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row_idx, p in enumerate(pivots):
            vec[p] = -reduced[row_idx][f]
        basis.append(vec)
    return basis


def invert(matrix: Matrix) -> Matrix:
    """Inverse of a square rational matrix; raises ValueError if singular."""
    n = len(matrix)
    aug = [
        list(map(Fraction, row)) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    reduced, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in reduced[:n]]
