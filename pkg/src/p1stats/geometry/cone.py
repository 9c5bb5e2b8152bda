"""Marginal cone and marginal polytope: interior tests, facial sets, facets."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..errors import CapacityError, InfeasibleStatistic, InvalidArgument
from ..model import DesignMatrix, common_submatrix, dyads
from .dd import cone_facet_normals, dual_rays
from .linalg import independent_rows, rank
from .lp import simplex

DEFAULT_MAX_COLUMNS = 40        # n = 5 full matrices
DEFAULT_MAX_POINTS = 200


def _rows(A) -> list[list[int]]:
    if isinstance(A, DesignMatrix):
        return A.to_rows()
    return [[int(v) for v in r] for r in A]


@dataclass(frozen=True)
class FacialSet:
    indices: tuple[int, ...]
    n_columns: int
    witness: tuple[Fraction, ...] | None = None

    @property
    def is_full(self) -> bool:
        return len(self.indices) == self.n_columns

    def to_dict(self) -> dict:
        return {"indices": list(self.indices), "n_columns": self.n_columns,
                "witness": None if self.witness is None else [str(v) for v in self.witness]}


@dataclass
class ConeDescription:
    generators: list[list[int]]
    facets: list[list[int]]        # inward normals over the original rows
    dim: int
    row_indices: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "n_facets": len(self.facets), "facets": self.facets}


def interior_status(A, t: Sequence) -> str:
    """'interior', 'boundary' or 'infeasible' for t relative to cone(A).

    Maximizes the smallest coordinate z of s subject to A s = t, s >= 0,
    capped at z <= 1.  Writing s = w + z 1 keeps the LP small:
    A w + (A 1) z = t, z + u = 1, with w, z, u >= 0.
    """
    M = _rows(A)
    m, N = len(M), len(M[0])
    t = [Fraction(v) for v in t]
    if len(t) != m:
        raise InvalidArgument(f"statistic has length {len(t)}, expected {m}")
    rows = [M[i] + [sum(M[i]), 0] for i in range(m)]
    rows.append([0] * N + [1, 1])
    rhs = t + [1]
    c = [0] * N + [1, 0]
    res = simplex(rows, rhs, c, maximize=True)
    if res.status == "infeasible":
        return "infeasible"
    return "interior" if res.objective > 0 else "boundary"


def in_relative_interior(A, t: Sequence) -> bool:
    """True iff t lies in the relative interior of cone(A) (exact LP)."""
    st = interior_status(A, t)
    if st == "infeasible":
        raise InfeasibleStatistic("statistic is not in the marginal cone")
    return st == "interior"


def facial_set(A, t: Sequence, verify: bool = True) -> FacialSet:
    """Columns of the face of cone(A) containing t in its relative interior.

    One LP finds the union of the supports of nonnegative solutions of
    A s = tau t: maximize sum(y) with y_i <= s_i, y_i <= 1.  A separating
    functional c (c.a_i = 0 on the face, c.a_i <= -1 off it) is then
    obtained from a feasibility LP and checked exactly.
    """
    M = _rows(A)
    m, N = len(M), len(M[0])
    t = [Fraction(v) for v in t]
    if len(t) != m:
        raise InvalidArgument(f"statistic has length {len(t)}, expected {m}")
    # quick feasibility on the un-scaled system
    if simplex(M, t, [0] * N).status == "infeasible":
        raise InfeasibleStatistic("statistic is not in the marginal cone")
    # s = y + a with y_i <= 1:  A (y + a) - tau t = 0,  y_i + b_i = 1
    # variables: y (N), a (N), tau, b (N)
    nv = 3 * N + 1
    rows, rhs = [], []
    for i in range(m):
        rows.append(M[i] + M[i] + [-t[i]] + [0] * N)
        rhs.append(0)
    for k in range(N):
        r = [0] * nv
        r[k], r[2 * N + 1 + k] = 1, 1
        rows.append(r)
        rhs.append(1)
    c = [1] * N + [0] * (2 * N + 1)
    res = simplex(rows, rhs, c, maximize=True)
    assert res.status == "optimal"
    F = tuple(k for k in range(N) if res.x[k] > 0)
    if len(F) == N:
        return FacialSet(F, N, None)
    w = separating_functional(M, F)
    fs = FacialSet(F, N, w)
    if verify:
        verify_facial_set(M, fs)
    return fs


def separating_functional(M: list[list[int]], F: Sequence[int]) -> tuple[Fraction, ...]:
    """c with c.a_i = 0 for i in F and c.a_i <= -1 otherwise (free c split as c+ - c-)."""
    m, N = len(M), len(M[0])
    Fs = set(F)
    off = [k for k in range(N) if k not in Fs]
    # variables: cp (m), cm (m), slack per off column (len(off))
    nv = 2 * m + len(off)
    rows, rhs = [], []
    for k in sorted(Fs):
        col = [M[i][k] for i in range(m)]
        rows.append(col + [-v for v in col] + [0] * len(off))
        rhs.append(0)
    for j, k in enumerate(off):
        col = [M[i][k] for i in range(m)]
        r = col + [-v for v in col] + [0] * len(off)
        r[2 * m + j] = 1       # c.a_k + slack = -1
        rows.append(r)
        rhs.append(-1)
    res = simplex(rows, rhs, [0] * nv)
    if res.status != "optimal":
        raise AssertionError("no separating functional; support is not a face")
    return tuple(res.x[i] - res.x[m + i] for i in range(m))


def verify_facial_set(M: list[list[int]], fs: FacialSet) -> None:
    if fs.witness is None:
        if not fs.is_full:
            raise AssertionError("proper facial set without witness")
        return
    Fs = set(fs.indices)
    for k in range(len(M[0])):
        v = sum(fs.witness[i] * M[i][k] for i in range(len(M)))
        if (k in Fs and v != 0) or (k not in Fs and not v < 0):
            raise AssertionError(f"witness fails on column {k}")


def cone_dim(A) -> int:
    """Dimension of cone(A), i.e. the exact rank of A."""
    return rank(_rows(A))


def projective_dim(A) -> int:
    """rank(A) - 1: the dimension of the cone's cross-section (polytope convention)."""
    return cone_dim(A) - 1


def cone_facets(A, max_columns: int | None = DEFAULT_MAX_COLUMNS,
                verify: bool = True) -> ConeDescription:
    """Irredundant facet description of cone(A) by double description.

    Normals are primitive integer vectors supported on a fixed maximal
    independent set of rows (the first ones in row order) and point inward.
    """
    M = _rows(A)
    N = len(M[0])
    if max_columns is not None and N > max_columns:
        raise CapacityError(f"{N} columns exceeds the cap of {max_columns}")
    R, normals, cols = cone_facet_normals(M)
    m = len(M)
    facets = []
    for y in normals:
        f = [0] * m
        for i, v in zip(R, y):
            f[i] = v
        facets.append(f)
    desc = ConeDescription([[M[i][k] for i in range(m)] for k in range(N)], facets, len(R), R)
    if verify:
        verify_facets(desc)
    return desc


def verify_facets(desc: ConeDescription) -> None:
    """Every generator satisfies every facet; each facet is tight on a rank dim-1 set."""
    for f in desc.facets:
        vals = [sum(a * b for a, b in zip(f, g)) for g in desc.generators]
        if min(vals) < 0:
            raise AssertionError("generator violates a facet inequality")
        tight = [g for g, v in zip(desc.generators, vals) if v == 0]
        if rank(tight) != desc.dim - 1 if tight else desc.dim != 1:
            raise AssertionError("facet is not tight on a codimension-one face")


@dataclass
class PolytopeDescription:
    points: list[tuple[int, ...]]
    vertices: list[int]            # indices into points
    facets: list[tuple[list[int], int]]   # (a, b): a.x + b >= 0
    dim: int

    def to_dict(self) -> dict:
        return {"n_points": len(self.points), "n_vertices": len(self.vertices),
                "n_facets": len(self.facets), "dim": self.dim,
                "vertices": [list(self.points[i]) for i in self.vertices],
                "facets": [{"a": a, "b": b} for a, b in self.facets]}


def is_vertex(points: Sequence[Sequence[int]], k: int) -> bool:
    """True iff points[k] is not a convex combination of the other distinct points."""
    p = list(points[k])
    others = [list(q) for j, q in enumerate(points) if j != k and list(q) != p]
    if not others:
        return True
    m = len(p)
    rows = [[q[i] for q in others] for i in range(m)] + [[1] * len(others)]
    res = simplex(rows, p + [1], [0] * len(others))
    return res.status == "infeasible"


def hull_of_marginals(points: Sequence[Sequence[int]],
                      max_points: int | None = DEFAULT_MAX_POINTS) -> PolytopeDescription:
    """Vertices (exact LP test) and facets (double description) of conv(points)."""
    pts = sorted(set(tuple(int(v) for v in p) for p in points))
    if max_points is not None and len(pts) > max_points:
        raise CapacityError(f"{len(pts)} points exceeds the cap of {max_points}")
    if not pts:
        raise InvalidArgument("need at least one point")
    vertices = [k for k in range(len(pts)) if is_vertex(pts, k)]
    m = len(pts[0])
    H = [[1] * len(pts)] + [[p[i] for p in pts] for i in range(m)]
    R = independent_rows(H)
    dim = len(R) - 1
    facets: list[tuple[list[int], int]] = []
    if dim >= 1:
        cols = [[H[i][k] for i in R] for k in range(len(pts))]
        rays = sorted(set(tuple(y) for y in dual_rays(cols)))
        for y in rays:
            full = [0] * (m + 1)
            for i, v in zip(R, y):
                full[i] = v
            facets.append((full[1:], full[0]))
    return PolytopeDescription(pts, vertices, facets, dim)


def polytope_interior(desc: PolytopeDescription, t: Sequence[int]) -> bool:
    """t strictly inside every facet of the hull (relative interior test)."""
    return all(sum(a * v for a, v in zip(fa, t)) + b > 0 for fa, b in desc.facets)


@dataclass
class ZeroPattern:
    facet: list[int]
    zeros: list[tuple[int, int]]   # directed edges (i, j), 0-based, absent on the facet
    kind: str                      # "margin" or "structural"

    def render(self, n: int) -> str:
        Z = set(self.zeros)
        lines = []
        for i in range(n):
            lines.append(" ".join("-" if i == j else ("0" if (i, j) in Z else "x") for j in range(n)))
        return "\n".join(lines)


def zero_pattern_facets(n: int, max_n: int = 12) -> list[ZeroPattern]:
    """Facets of cone(common submatrix) as zero patterns of the adjacency matrix.

    A facet's zero pattern is the set of directed edges whose columns are tight.
    Patterns that zero a whole row or column (a margin of 0) are labelled
    "margin"; the rest are "structural".
    """
    if n > max_n:
        raise CapacityError(f"n={n} exceeds the cap of {max_n}")
    A = common_submatrix(n)
    desc = cone_facets(A, max_columns=None)
    out = []
    for f in desc.facets:
        zeros = []
        for k, (d, cfg) in enumerate(A.col_labels):
            v = sum(f[i] * int(A.entries[i, k]) for i in range(2 * n))
            if v > 0:   # column off the facet: the edge must be absent
                i, j = dyads(n)[d]
                zeros.append((i, j) if cfg.pair == (1, 0) else (j, i))
        zeros.sort()
        Z = set(zeros)
        row_zero = any(all((i, j) in Z for j in range(n) if j != i) for i in range(n))
        col_zero = any(all((i, j) in Z for i in range(n) if i != j) for j in range(n))
        out.append(ZeroPattern(f, zeros, "margin" if row_zero or col_zero else "structural"))
    return out


def structural_pattern(n: int, S: Sequence[int]) -> set[tuple[int, int]]:
    """Edges inside S x S (off-diagonal) for a node subset S."""
    return {(i, j) for i in S for j in S if i != j}


def pattern_equivalent(P: set[tuple[int, int]], Q: set[tuple[int, int]], n: int) -> bool:
    """Equal up to relabelling the nodes.

    Rows and columns are permuted together, which is the only relabelling
    that keeps the excluded diagonal in place.
    """
    from itertools import permutations
    if len(P) != len(Q):
        return False
    return any({(pi[i], pi[j]) for i, j in P} == Q for pi in permutations(range(n)))
