"""Exact linear algebra over the rationals (plain lists of Fractions)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def to_mat(rows: Sequence[Sequence]) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> Mat:
    return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(m))


def transpose(a: Mat) -> Mat:
    if not a:
        return ()
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def matmul(a: Mat, b: Mat) -> Mat:
    if not a or not b:
        return ()
    n = len(b)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(len(b[0])))
        for i in range(len(a))
    )


def matvec(a: Mat, v: Sequence) -> Vec:
    return tuple(sum((a[i][k] * Fraction(v[k]) for k in range(len(v))), Fraction(0)) for i in range(len(a)))


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot column indices)."""
    if not rows:
        return rows, []
    n_rows, n_cols = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(a: Sequence[Sequence]) -> int:
    rows = [list(map(Fraction, row)) for row in a]
    _, pivots = _rref(rows)
    return len(pivots)


def nullspace(a: Sequence[Sequence], n_cols: int | None = None) -> list[Vec]:
    """Basis of {x : a x = 0}; n_cols needed when a has no rows."""
    rows = [list(map(Fraction, row)) for row in a]
    if rows:
        n_cols = len(rows[0])
    if n_cols is None:
        raise ValueError("n_cols required for empty matrix")
    rows, pivots = _rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(tuple(v))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Vec | None:
    """One solution of a x = b, or None when inconsistent."""
    rows = [list(map(Fraction, row)) + [Fraction(bb)] for row, bb in zip(a, b)]
    n_cols = len(a[0]) if a else 0
    rows, pivots = _rref(rows)
    if n_cols in pivots:
        return None  # pivot in the augmented column
    x = [Fraction(0)] * n_cols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][n_cols]
    return tuple(x)


def inverse(a: Sequence[Sequence]) -> Mat | None:
    n = len(a)
    if n == 0:
        return ()
    rows = [list(map(Fraction, row)) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(a)]
    rows, pivots = _rref(rows)
    if pivots != list(range(n)):
        return None
    return tuple(tuple(rows[i][n:]) for i in range(n))
