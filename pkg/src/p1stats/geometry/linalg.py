"""Exact integer/rational linear algebra.

All routines take integer (or Fraction) matrices as nested sequences or
numpy arrays and never touch floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np


def _as_rows(M) -> list[list]:
    if isinstance(M, np.ndarray):
        return [[int(v) for v in row] for row in M.tolist()]
    return [list(row) for row in M]


def _is_integral(rows) -> bool:
    return all(isinstance(v, int) for row in rows for v in row)


def echelon(M) -> tuple[list[list], list[int]]:
    """Fraction-free (Bareiss) row echelon form.

    Returns the reduced rows and the list of pivot columns.  Rational
    input is scaled row-wise to integers first.
    """
    rows = _as_rows(M)
    if not _is_integral(rows):
        rows = [primitive(r) for r in rows]
    if not rows:
        return [], []
    m, ncols = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, m):
            f = rows[i][c]
            rows[i] = [(piv * a - f * b) // prev for a, b in zip(rows[i], rows[r])]
        prev = piv
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank(M) -> int:
    return len(echelon(M)[1])


def independent_rows(M, order: Sequence[int] | None = None) -> list[int]:
    """Greedy maximal set of linearly independent rows, scanned in `order`."""
    rows = _as_rows(M)
    if order is None:
        order = range(len(rows))
    chosen: list[int] = []
    basis: list[list] = []   # echelon rows of chosen set
    piv_cols: list[int] = []
    for idx in order:
        v = list(rows[idx])
        v = reduce_against(v, basis, piv_cols)
        lead = next((j for j, a in enumerate(v) if a != 0), None)
        if lead is None:
            continue
        chosen.append(idx)
        basis.append(v)
        piv_cols.append(lead)
    return chosen


def reduce_against(v: list, basis: list[list], piv_cols: list[int]) -> list:
    """Eliminate the pivot coordinates of `basis` from `v` (integer arithmetic)."""
    for b, c in zip(basis, piv_cols):
        if v[c] != 0:
            f, p = v[c], b[c]
            v = primitive([p * a - f * bb for a, bb in zip(v, b)])
    return v


def primitive(v) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def solve_square(M, b) -> list[Fraction]:
    """Solve M x = b exactly for square nonsingular M."""
    n = len(M)
    aug = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(_as_rows(M), b)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        pv = aug[c][c]
        aug[c] = [a / pv for a in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * bb for a, bb in zip(aug[i], aug[c])]
    return [row[-1] for row in aug]


def inverse_columns(M) -> list[list[int]]:
    """Columns of M^{-1}, each scaled to a primitive integer vector.

    The scaling is by a positive factor, so each column keeps its direction.
    """
    n = len(M)
    cols = []
    for k in range(n):
        e = [1 if i == k else 0 for i in range(n)]
        x = solve_square(M, e)
        den = 1
        for v in x:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in x]
        g = 0
        for v in ints:
            g = gcd(g, v)
        cols.append([v // g for v in ints])
    return cols
