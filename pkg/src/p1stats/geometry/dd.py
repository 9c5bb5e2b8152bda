"""Double description method for the facets of a pointed polyhedral cone.

The facets of cone(g_1, ..., g_N) in R^r (full dimensional after projection)
are the extreme rays of the dual cone {y : g_k . y >= 0 for all k}.  The dual
cone is built by inserting the constraints g_k . y >= 0 one at a time,
starting from a simplicial cone.  Two rays are combined only when they are
adjacent, which is decided combinatorially from their sets of tight
constraints.  All arithmetic is on Python integers.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

import numpy as np

from ..errors import CapacityError, InvalidArgument
from .linalg import independent_rows, inverse_columns, rank


def _prim(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
    return [x // g for x in v] if g > 1 else v


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def project_rows(M: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Pick a maximal independent set of rows of M (greedy, in order).

    Returns the chosen row indices and the columns of M restricted to them.
    Restriction to independent rows is injective on the column space, so the
    combinatorics of cone(columns) is unchanged.
    """
    R = independent_rows(M)
    cols = [[int(M[i][k]) for i in R] for k in range(len(M[0]))]
    return R, cols


def dual_rays(gens: Sequence[Sequence[int]], max_rays: int | None = None,
              order: Sequence[int] | None = None) -> list[list[int]]:
    """Extreme rays of {y : g . y >= 0 for g in gens}; gens must span R^r."""
    gens = [list(map(int, g)) for g in gens]
    N = len(gens)
    if N == 0:
        raise InvalidArgument("need at least one generator")
    r = len(gens[0])
    if rank(gens) != r:
        raise InvalidArgument("generators must span the ambient space")
    start = independent_rows(gens)
    B = [gens[k] for k in start]
    rays = inverse_columns(B)   # B @ col_j = positive multiple of e_j
    zs = []
    for j in range(r):
        z = 0
        for jj, k in enumerate(start):
            if jj != j:
                z |= 1 << k
        zs.append(z)
    done = set(start)
    rest = [k for k in (order if order is not None else range(N)) if k not in done]
    use_np = N <= 63

    for k in rest:
        g = gens[k]
        vals = [_dot(g, y) for y in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        if not neg:
            for i in zero:
                zs[i] |= 1 << k
            done.add(k)
            continue
        new_rays, new_zs = [], []
        if pos and neg:
            pairs = _adjacent_pairs(zs, pos, neg, r, use_np)
            for p, q in pairs:
                sp, sq = vals[p], vals[q]
                y = _prim([sp * a - sq * b for a, b in zip(rays[q], rays[p])])
                new_rays.append(y)
                new_zs.append((zs[p] & zs[q]) | (1 << k))
        keep_rays = [rays[i] for i in pos] + [rays[i] for i in zero]
        keep_zs = [zs[i] for i in pos] + [zs[i] | (1 << k) for i in zero]
        rays = keep_rays + new_rays
        zs = keep_zs + new_zs
        done.add(k)
        if max_rays is not None and len(rays) > max_rays:
            raise CapacityError(f"double description exceeded {max_rays} intermediate rays")
    return rays


def _adjacent_pairs(zs: list[int], pos: list[int], neg: list[int], r: int, use_np: bool):
    need = r - 2
    out = []
    if use_np:
        Z = np.array(zs, dtype=np.uint64)
        Zneg = Z[neg]
        pc_all = np.bitwise_count(Z)
        for p in pos:
            inter = Zneg & Z[p]
            cnt = np.bitwise_count(inter)
            cand = np.nonzero(cnt >= need)[0]
            for ci in cand:
                m = inter[ci]
                mask = pc_all >= cnt[ci]
                sub = (Z[mask] & m) == m
                if int(sub.sum()) == 2:
                    out.append((p, neg[ci]))
        return out
    for p in pos:
        for q in neg:
            m = zs[p] & zs[q]
            if bin(m).count("1") < need:
                continue
            hits = 0
            for z in zs:
                if z & m == m:
                    hits += 1
                    if hits > 2:
                        break
            if hits == 2:
                out.append((p, q))
    return out


def cone_facet_normals(M: Sequence[Sequence[int]], max_rays: int | None = None):
    """Facet normals of cone(columns of M).

    Returns (row_indices, normals, reduced_generators): normals are primitive
    integer vectors over the chosen independent rows, inward pointing
    (normal . column >= 0 for every column).
    """
    R, cols = project_rows(M)
    rays = dual_rays(cols, max_rays=max_rays)
    rays = sorted(set(tuple(y) for y in rays))
    return R, [list(y) for y in rays], cols
