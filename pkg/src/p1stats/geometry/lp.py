"""Exact rational linear programming.

A two-phase primal simplex on an integer tableau.  Every row is kept as a
primitive integer vector (the row's equation scaled by a positive rational),
so no fractions are formed during pivoting and no rounding can occur.
Bland's rule guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence


@dataclass
class LPResult:
    status: str                    # "optimal", "infeasible" or "unbounded"
    x: list[Fraction] | None = None
    objective: Fraction | None = None
    basis: list[int] | None = None


def _normalize(row: list[int]) -> list[int]:
    # divide by the (positive) gcd; signs are preserved
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def _pivot(T: list[list[int]], basis: list[int], r: int, c: int) -> None:
    prow = T[r]
    p = prow[c]
    if p < 0:
        prow = [-v for v in prow]
        p = -p
    prow = _normalize(prow)
    p = prow[c]
    T[r] = prow
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f == 0:
            continue
        T[i] = _normalize([p * a - f * b for a, b in zip(row, prow)])
    basis[r] = c


def simplex(A: Sequence[Sequence], b: Sequence, c: Sequence, maximize: bool = False) -> LPResult:
    """Optimize c.x subject to A x = b, x >= 0 (all data rational)."""
    m = len(A)
    nv = len(c)
    # scale each equation to integers
    rows = []
    for ai, bi in zip(A, b):
        vals = [Fraction(v) for v in ai] + [Fraction(bi)]
        den = 1
        for v in vals:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in vals]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        rows.append(ints)
    cf = [Fraction(v) for v in c]
    if maximize:
        cf = [-v for v in cf]
    cden = 1
    for v in cf:
        cden = cden * v.denominator // gcd(cden, v.denominator)
    cint = [int(v * cden) for v in cf]

    # phase 1: artificials nv..nv+m-1, objective = sum of artificials
    width = nv + m + 1
    T = []
    for i, r in enumerate(rows):
        row = r[:nv] + [0] * m + [r[-1]]
        row[nv + i] = 1
        T.append(row)
    obj = [0] * width
    for row in T:
        for j in range(nv):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    # obj row represents reduced costs d_j (scale 1); value = -obj[-1]
    T.append(obj)
    basis = list(range(nv, nv + m))
    status = _run(T, basis, m, allowed=nv + m)
    if status != "optimal":
        raise AssertionError("phase 1 cannot be unbounded")
    if T[m][-1] != 0:
        return LPResult("infeasible")

    # drive artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= nv:
            row = T[i]
            col = next((j for j in range(nv) if row[j] != 0), None)
            if col is None:
                continue  # redundant equation
            _pivot(T, basis, i, col)
        keep.append(i)
    T = [T[i] for i in keep]
    basis = [basis[i] for i in keep]
    m2 = len(T)
    # strip artificial columns
    T = [row[:nv] + [row[-1]] for row in T]

    # phase 2 objective row: c_j - c_B B^-1 a_j, built by elimination
    obj = cint + [0]
    for i, bc in enumerate(basis):
        f = obj[bc]
        if f:
            s = T[i][bc]
            obj = [s * a - f * bb for a, bb in zip(obj, T[i])]
            obj = _normalize(obj)
    T.append(obj)
    status = _run(T, basis, m2, allowed=nv)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * nv
    for i, bc in enumerate(basis):
        x[bc] = Fraction(T[i][-1], T[i][bc])
    val = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", x=x, objective=val, basis=list(basis))


def _run(T: list[list[int]], basis: list[int], m: int, allowed: int) -> str:
    """Simplex iterations with Bland's rule; objective is row m (minimize)."""
    while True:
        obj = T[m]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][enter]
            if a <= 0:
                continue
            # ratio rhs_i / a ; compare as fractions with positive denominators
            num = T[i][-1]
            if best is None:
                best = (i, num, a)
                continue
            _, bn, ba = best
            lhs, rhs = num * ba, bn * a
            if lhs < rhs or (lhs == rhs and basis[i] < basis[best[0]]):
                best = (i, num, a)
        if best is None:
            return "unbounded"
        r = best[0]
        _pivot_with_obj(T, basis, r, enter)


def _pivot_with_obj(T, basis, r, c):
    prow = _normalize(T[r])
    T[r] = prow
    p = prow[c]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f == 0:
            continue
        T[i] = _normalize([p * a - f * b for a, b in zip(row, prow)])
    basis[r] = c


def feasible(A, b) -> LPResult:
    """Find any x >= 0 with A x = b."""
    return simplex(A, b, [0] * len(A[0]))
