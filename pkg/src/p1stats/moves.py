"""Markov moves for the p1 model.

A move is an integer vector over the (dyad, configuration) coordinates, kept
sparse.  Positive entries form the monomial that is added, negative entries
the monomial that is removed.  Moves are built from cycles of the bipartite
graph G_n (alpha_i -- beta_j for i != j, standing for the edge i -> j), from
the per-dyad T binomials and the Q quadrics on mutual dyads, and are combined
by lifting and overlapping.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .errors import EmptyMoveError, InvalidArgument, InvalidVariant
from .model import (DesignMatrix, DyadConfig, Network, Variant, build_design_matrix,
                    check_n, dyad_index, dyads, matrix_to_text, n_dyads)

NULL, OUT, IN, MUTUAL = DyadConfig.NULL, DyadConfig.OUT, DyadConfig.IN, DyadConfig.MUTUAL


def edge_coord(n: int, i: int, j: int) -> tuple[int, DyadConfig]:
    """Coordinate of the directed edge i -> j (0-based): p_ij(1,0) or p_ji(0,1)."""
    if i == j:
        raise InvalidArgument("no loops")
    if i < j:
        return dyad_index(n)[(i, j)], OUT
    return dyad_index(n)[(j, i)], IN


def mutual_coord(n: int, i: int, j: int) -> tuple[int, DyadConfig]:
    a, b = min(i, j), max(i, j)
    return dyad_index(n)[(a, b)], MUTUAL


@dataclass(frozen=True)
class MarkovMove:
    """Sparse integer move.  `delta` is a sorted tuple of ((dyad, config), value)."""

    n: int
    delta: tuple[tuple[tuple[int, DyadConfig], int], ...]
    provenance: str = "move"
    parents: tuple = field(default=(), compare=False)

    @classmethod
    def from_dict(cls, n: int, d: dict, provenance: str = "move", parents: tuple = ()) -> "MarkovMove":
        items = tuple(sorted(((int(k[0]), DyadConfig(k[1])), int(v)) for k, v in d.items() if v != 0))
        return cls(n, items, provenance, parents)

    def as_dict(self) -> dict[tuple[int, DyadConfig], int]:
        return dict(self.delta)

    @property
    def degree(self) -> int:
        return sum(v for _, v in self.delta if v > 0)

    @property
    def positive(self) -> dict:
        return {k: v for k, v in self.delta if v > 0}

    @property
    def negative(self) -> dict:
        return {k: -v for k, v in self.delta if v < 0}

    @property
    def support_dyads(self) -> list[int]:
        return sorted({k[0] for k, _ in self.delta})

    def __neg__(self) -> "MarkovMove":
        return MarkovMove(self.n, tuple((k, -v) for k, v in self.delta), self.provenance, self.parents)

    def is_zero(self) -> bool:
        return not self.delta

    def dense(self, full: bool = True) -> np.ndarray:
        """Dense vector in full (4 per dyad) or simplified (3 per dyad) coordinates."""
        if full:
            x = np.zeros(4 * n_dyads(self.n), dtype=np.int64)
            for (d, c), v in self.delta:
                x[4 * d + int(c)] = v
            return x
        x = np.zeros(3 * n_dyads(self.n), dtype=np.int64)
        for (d, c), v in self.delta:
            if c is NULL:
                raise InvalidArgument("move has (0,0) entries; not in simplified coordinates")
            x[3 * d + int(c) - 1] = v
        return x

    def canonical(self) -> tuple:
        """Sign-normalized key: of m and -m, the lexicographically smaller dense vector."""
        if not self.delta:
            return ()
        first = self.delta[0][1]
        items = self.delta if first < 0 else tuple((k, -v) for k, v in self.delta)
        return tuple((d, int(c), v) for (d, c), v in items)

    def canonical_move(self) -> "MarkovMove":
        if self.delta and self.delta[0][1] > 0:
            return -self
        return self

    def dyad_sums(self) -> dict[int, int]:
        s: dict[int, int] = {}
        for (d, _), v in self.delta:
            s[d] = s.get(d, 0) + v
        return s

    def is_multihomogeneous(self) -> bool:
        return all(v == 0 for v in self.dyad_sums().values())

    def in_kernel(self, A: DesignMatrix) -> bool:
        if A.n != self.n:
            raise InvalidArgument("node counts differ")
        if A.form.value == "full":
            return not np.any(A.entries @ self.dense(True))
        if any(c is NULL for (_, c), _ in self.delta):
            return False
        return not np.any(A.entries @ self.dense(False))

    def is_applicable_shape(self) -> bool:
        """Every touched dyad has exactly one +1 entry and one -1 entry."""
        per: dict[int, list[int]] = {}
        for (d, _), v in self.delta:
            per.setdefault(d, []).append(v)
        return all(sorted(vs) == [-1, 1] for vs in per.values())

    def transitions(self) -> dict[int, tuple[DyadConfig, DyadConfig]]:
        """dyad -> (from, to) for an applicable-shape move (direction +1)."""
        out = {}
        for d in self.support_dyads:
            frm = [c for (dd, c), v in self.delta if dd == d and v < 0]
            to = [c for (dd, c), v in self.delta if dd == d and v > 0]
            if len(frm) != 1 or len(to) != 1:
                raise InvalidArgument("move is not of applicable shape")
            out[d] = (frm[0], to[0])
        return out

    # display / serialization

    def _monomial(self, part: dict) -> str:
        ds = dyads(self.n)
        out = []
        for (d, c), v in sorted(part.items()):
            i, j = ds[d]
            term = f"p{i + 1}{j + 1}({c.pair[0]},{c.pair[1]})"
            out.append(term if v == 1 else f"{term}^{v}")
        return "".join(out) or "1"

    def binomial(self) -> str:
        return f"{self._monomial(self.positive)} - {self._monomial(self.negative)}"

    def to_line(self) -> str:
        toks = [str(self.degree)]
        for (d, c), v in self.delta:
            i, j = dyads(self.n)[d]
            toks.append(f"{'+' if v > 0 else '-'}{abs(v)} {i + 1}-{j + 1}:{c.code}")
        return " ".join(toks)

    def to_json_obj(self) -> dict:
        return {"n": self.n, "degree": self.degree, "provenance": self.provenance,
                "delta": [[d, c.code, v] for (d, c), v in self.delta]}

    @classmethod
    def from_json_obj(cls, o: dict) -> "MarkovMove":
        return cls.from_dict(o["n"], {(d, DyadConfig.from_code(c)): v for d, c, v in o["delta"]},
                             o.get("provenance", "move"))

    @classmethod
    def from_line(cls, n: int, line: str) -> "MarkovMove":
        toks = line.split()
        body = toks[1:]
        if len(body) % 2:
            raise InvalidArgument("malformed move line")
        d: dict = {}
        idx = dyad_index(n)
        for sv, loc in zip(body[0::2], body[1::2]):
            m = re.fullmatch(r"(\d+)-(\d+):([01]{2})", loc)
            if not m or sv[0] not in "+-":
                raise InvalidArgument(f"bad move token {sv} {loc}")
            key = (idx[(int(m.group(1)) - 1, int(m.group(2)) - 1)], DyadConfig.from_code(m.group(3)))
            d[key] = d.get(key, 0) + int(sv)
        mv = cls.from_dict(n, d)
        if mv.degree != int(toks[0]):
            raise InvalidArgument("degree field does not match the entries")
        return mv

    @classmethod
    def from_binomial(cls, n: int, text: str, provenance: str = "binomial") -> "MarkovMove":
        """Parse 'p12(1,0)p13(1,1)... - p12(0,1)...' (1-based node labels, i<j or any order)."""
        lhs, rhs = text.split("-", 1) if " - " not in text else text.split(" - ", 1)
        d: dict = {}
        for side, sgn in ((lhs, 1), (rhs, -1)):
            for m in re.finditer(r"p_?\{?(\d),?(\d)\}?\((\d),(\d)\)(?:\^(\d+))?", side):
                i, j, a, b = (int(m.group(k)) for k in range(1, 5))
                e = int(m.group(5) or 1)
                if i > j:
                    i, j, a, b = j, i, b, a
                key = (dyad_index(n)[(i - 1, j - 1)], DyadConfig.from_pair(a, b))
                d[key] = d.get(key, 0) + sgn * e
        return cls.from_dict(n, d, provenance)


def moves_hash(moves: Sequence[MarkovMove]) -> str:
    h = hashlib.sha1()
    for m in moves:
        h.update(repr(m.canonical()).encode())
    return h.hexdigest()[:16]


def moves_to_json(moves: Sequence[MarkovMove]) -> str:
    return json.dumps([m.to_json_obj() for m in moves])


def moves_from_json(text: str) -> list[MarkovMove]:
    return [MarkovMove.from_json_obj(o) for o in json.loads(text)]


def moves_to_lattice(moves: Sequence[MarkovMove]) -> str:
    """Rows of the full-coordinate vectors, in the 'rows cols' text format."""
    return matrix_to_text([m.dense(True).tolist() for m in moves])


# cycles of G_n

@dataclass(frozen=True)
class CycleSpec:
    """Cycle alpha_a0 beta_b0 alpha_a1 beta_b1 ... beta_b(k-1), back to alpha_a0."""

    n: int
    alphas: tuple[int, ...]
    betas: tuple[int, ...]

    def __post_init__(self):
        k = len(self.alphas)
        if k < 2 or len(self.betas) != k:
            raise InvalidArgument("a cycle needs k >= 2 alpha and beta vertices")
        if len(set(self.alphas)) != k or len(set(self.betas)) != k:
            raise InvalidArgument("cycle vertices must be distinct")
        for m in range(k):
            if self.betas[m] in (self.alphas[m], self.alphas[(m + 1) % k]):
                raise InvalidArgument("alpha_i and beta_i are not adjacent in G_n")

    @property
    def length(self) -> int:
        return 2 * len(self.alphas)

    @property
    def vertices(self) -> list[str]:
        out = []
        for a, b in zip(self.alphas, self.betas):
            out += [f"a{a + 1}", f"b{b + 1}"]
        return out

    def positive_edges(self) -> list[tuple[int, int]]:
        return list(zip(self.alphas, self.betas))

    def negative_edges(self) -> list[tuple[int, int]]:
        k = len(self.alphas)
        return [(self.alphas[(m + 1) % k], self.betas[m]) for m in range(k)]

    def nodes(self) -> set[int]:
        return set(self.alphas) | set(self.betas)


def enumerate_cycles(n: int, max_length: int | None = None) -> list[CycleSpec]:
    """All cycles of G_n up to rotation and reflection, length <= max_length.

    Canonical representative: the smallest alpha index comes first and its
    first beta neighbour is smaller than its last one.
    """
    check_n(n)
    if max_length is None:
        max_length = 2 * n
    kmax = min(max_length // 2, n)
    out: list[CycleSpec] = []

    def extend(alphas: list[int], betas: list[int]):
        k = len(alphas)
        s = alphas[0]
        last = alphas[-1]
        for b in range(n):
            if b == last or b in betas:
                continue
            betas.append(b)
            # close the cycle
            if k >= 2 and b != s and betas[0] < b:
                out.append(CycleSpec(n, tuple(alphas), tuple(betas)))
            if k < kmax:
                for a in range(s + 1, n):
                    if a == b or a in alphas:
                        continue
                    alphas.append(a)
                    extend(alphas, betas)
                    alphas.pop()
            betas.pop()

    for s in range(n):
        extend([s], [])
    out.sort(key=lambda c: (c.length, c.alphas, c.betas))
    return out


def cycle_move(c: CycleSpec) -> MarkovMove:
    """Simplified-coordinate binomial of a cycle: positive edges minus negative edges."""
    d: dict = {}
    for i, j in c.positive_edges():
        k = edge_coord(c.n, i, j)
        d[k] = d.get(k, 0) + 1
    for i, j in c.negative_edges():
        k = edge_coord(c.n, i, j)
        d[k] = d.get(k, 0) - 1
    return MarkovMove.from_dict(c.n, d, f"cycle{c.length}")


def t_generators(n: int, variant="zero") -> list[MarkovMove]:
    """Per dyad: p(1,0) + p(0,1) - p(1,1) - p(0,0) (Zero variant only)."""
    check_n(n)
    if Variant.parse(variant) is not Variant.ZERO:
        raise InvalidVariant("T binomials lie in the kernel only without reciprocation")
    return [MarkovMove.from_dict(n, {(d, OUT): 1, (d, IN): 1, (d, MUTUAL): -1, (d, NULL): -1}, "T")
            for d in range(n_dyads(n))]


def q_generators(n: int) -> list[MarkovMove]:
    """p_ij(1,1) p_kl(1,1) - p_ik(1,1) p_jl(1,1), all pairings of all 4-subsets.

    Returned in simplified coordinates (unlifted).
    """
    check_n(n)
    out = []
    for quad in combinations(range(n), 4):
        i, j, k, l = quad
        pairings = [((i, j), (k, l)), ((i, k), (j, l)), ((i, l), (j, k))]
        for P, R in combinations(pairings, 2):
            d: dict = {}
            for a, b in P:
                d[mutual_coord(n, a, b)] = 1
            for a, b in R:
                d[mutual_coord(n, a, b)] = -1
            out.append(MarkovMove.from_dict(n, d, "Q"))
    return out


# even closed walks of K_n

@dataclass(frozen=True)
class WalkSpec:
    n: int
    edges: tuple[tuple[int, int], ...]   # consecutive edges of the closed walk
    kind: str                            # "even-cycle", "odd-cycles-vertex", "odd-cycles-path"


def _simple_cycles_kn(n: int, maxlen: int) -> list[tuple[int, ...]]:
    """Cycles of K_n as vertex tuples, canonical (min vertex first, second < last)."""
    out = []

    def rec(path):
        if len(path) >= 3 and path[1] < path[-1]:
            out.append(tuple(path))
        if len(path) == maxlen:
            return
        for v in range(path[0] + 1, n):
            if v not in path:
                path.append(v)
                rec(path)
                path.pop()

    for s in range(n):
        rec([s])
    return out


def _rotate_to(cyc: tuple[int, ...], v: int) -> list[int]:
    k = cyc.index(v)
    return list(cyc[k:] + cyc[:k])


def _walk_edges_from_vertices(vs: list[int]) -> list[tuple[int, int]]:
    return [(vs[m], vs[(m + 1) % len(vs)]) for m in range(len(vs))]


def _simple_paths(n: int, u: int, v: int, avoid: set[int], maxlen: int):
    """Simple paths u -> v (as vertex lists) with interior avoiding `avoid`, <= maxlen edges."""
    out = []

    def rec(path):
        if len(path) - 1 > maxlen:
            return
        last = path[-1]
        if last == v:
            out.append(list(path))
            return
        for w in range(n):
            if w in path or (w in avoid and w != v):
                continue
            path.append(w)
            rec(path)
            path.pop()

    rec([u])
    return out


def enumerate_walks(n: int, max_edges: int) -> list[WalkSpec]:
    check_n(n)
    out: list[WalkSpec] = []
    cycles = _simple_cycles_kn(n, max_edges)
    for c in cycles:
        if len(c) % 2 == 0:
            out.append(WalkSpec(n, tuple(_walk_edges_from_vertices(list(c))), "even-cycle"))
    odd = [c for c in cycles if len(c) % 2 == 1]
    for c1, c2 in combinations(odd, 2):
        shared = set(c1) & set(c2)
        L = len(c1) + len(c2)
        if len(shared) == 1 and L <= max_edges:
            v = shared.pop()
            e = _walk_edges_from_vertices(_rotate_to(c1, v)) + _walk_edges_from_vertices(_rotate_to(c2, v))
            out.append(WalkSpec(n, tuple(e), "odd-cycles-vertex"))
        elif not shared:
            budget = max_edges - L
            if budget < 2:
                continue
            for u in c1:
                for w in c2:
                    for path in _simple_paths(n, u, w, set(c1) | set(c2), budget // 2):
                        inner = set(path[1:-1])
                        if inner & (set(c1) | set(c2)):
                            continue
                        pe = [(path[m], path[m + 1]) for m in range(len(path) - 1)]
                        e = (_walk_edges_from_vertices(_rotate_to(c1, u)) + pe
                             + _walk_edges_from_vertices(_rotate_to(c2, w))
                             + [(b, a) for a, b in reversed(pe)])
                        out.append(WalkSpec(n, tuple(e), "odd-cycles-path"))
    return out


def walk_move(w: WalkSpec) -> MarkovMove:
    d: dict = {}
    for m, (a, b) in enumerate(w.edges):
        k = mutual_coord(w.n, a, b)
        d[k] = d.get(k, 0) + (1 if m % 2 == 0 else -1)
    return MarkovMove.from_dict(w.n, d, f"walk:{w.kind}")


def walk_moves(n: int, max_edges: int) -> list[MarkovMove]:
    """Binomials of primitive even closed walks of K_n on the p(1,1) coordinates."""
    seen = {}
    for w in enumerate_walks(n, max_edges):
        mv = walk_move(w)
        if mv.is_zero():
            continue
        seen.setdefault(mv.canonical(), mv)
    return list(seen.values())


# lifting and overlap

def lift_move(q: MarkovMove, pad="null") -> MarkovMove:
    """Restore per-dyad balance by padding the deficient side.

    pad="null" uses p(0,0).  pad="mutual" uses p(1,1) on dyads where the move
    has no (1,1) entry, and p(0,0) elsewhere.  Kernel membership of a mutual
    lift depends on the variant and is not guaranteed; check it with
    `in_kernel`.
    """
    pad = str(pad).lower()
    if pad not in ("null", "mutual"):
        raise InvalidArgument("pad must be 'null' or 'mutual'")
    d = q.as_dict()
    for dy, s in q.dyad_sums().items():
        if s == 0:
            continue
        cfg = NULL
        if pad == "mutual" and not any(k == (dy, MUTUAL) for k in d):
            cfg = MUTUAL
        d[(dy, cfg)] = d.get((dy, cfg), 0) - s
    out = MarkovMove.from_dict(q.n, d, "lift" if pad == "null" else "lift11", (q,))
    if out.is_zero():
        raise EmptyMoveError("lifting cancelled the move")
    return out


def overlap(f: MarkovMove, g: MarkovMove, variant="zero") -> MarkovMove:
    """f [x] g = f+ g+ - f- g-, rewritten per dyad and re-lifted.

    Both monomial products are formed first; (0,0) factors are dropped; for
    the Zero variant a (1,0) and a (0,1) factor on one side and one dyad
    combine to (1,1); common factors then cancel and the result is lifted
    with (0,0).
    """
    variant = Variant.parse(variant)
    if f.n != g.n:
        raise InvalidArgument("node counts differ")
    n = f.n
    sides = []
    for a, b in ((f.positive, g.positive), (f.negative, g.negative)):
        mono: dict = {}
        for part in (a, b):
            for k, v in part.items():
                if k[1] is not NULL:
                    mono[k] = mono.get(k, 0) + v
        if variant is Variant.ZERO:
            for dy in {k[0] for k in mono}:
                o, i = mono.get((dy, OUT), 0), mono.get((dy, IN), 0)
                c = min(o, i)
                if c:
                    mono[(dy, OUT)] = o - c
                    mono[(dy, IN)] = i - c
                    mono[(dy, MUTUAL)] = mono.get((dy, MUTUAL), 0) + c
        sides.append({k: v for k, v in mono.items() if v})
    plus, minus = sides
    d = dict(plus)
    for k, v in minus.items():
        d[k] = d.get(k, 0) - v
    raw = MarkovMove.from_dict(n, d, "overlap", (f, g))
    if raw.is_zero():
        raise EmptyMoveError("overlap cancelled completely")
    out = lift_move(raw, "null")
    return MarkovMove(n, out.delta, "overlap", (f, g))


# realizations of edge-space moves in dyad contexts

_CHANGE_OPTIONS: dict[tuple[int, int], list[tuple[DyadConfig, DyadConfig]]] = {}
for _frm in DyadConfig:
    for _to in DyadConfig:
        if _frm is _to:
            continue
        ch = (_to.pair[0] - _frm.pair[0], _to.pair[1] - _frm.pair[1])
        _CHANGE_OPTIONS.setdefault(ch, []).append((_frm, _to))


def edge_changes(m: MarkovMove) -> dict[int, tuple[int, int]]:
    """Per dyad, the change (da, db) in the two directed edges effected by m."""
    out: dict[int, list[int]] = {}
    for (d, c), v in m.delta:
        a, b = c.pair
        cur = out.setdefault(d, [0, 0])
        cur[0] += v * a
        cur[1] += v * b
    return {d: (a, b) for d, (a, b) in out.items() if (a, b) != (0, 0)}


def realizations(m: MarkovMove, A: DesignMatrix | None = None) -> list[MarkovMove]:
    """Applicable-shape moves with the same edge changes as m, in every dyad context.

    A change (+1, 0) on dyad {i,j} can be realized as 00 -> 10 or as 01 -> 11,
    and similarly for the other changes.  When A is given, only realizations
    in the kernel of A are returned.
    """
    ch = edge_changes(m)
    ds = sorted(ch)
    opts = [_CHANGE_OPTIONS.get(ch[d], []) for d in ds]
    out = []
    for choice in product(*opts):
        d = {}
        for dy, (frm, to) in zip(ds, choice):
            d[(dy, frm)] = -1
            d[(dy, to)] = 1
        mv = MarkovMove.from_dict(m.n, d, f"real:{m.provenance}", (m,))
        if A is None or mv.in_kernel(A):
            out.append(mv)
    return out


# move sets

def default_max_cycle_length(n: int) -> int:
    return 2 * n if n <= 4 else 6


def _simplified_pool(n: int, variant: Variant) -> list[MarkovMove]:
    """Building blocks for overlaps: 4-cycles, 3-node hexagons, and Q quadrics."""
    pool = [cycle_move(c) for c in enumerate_cycles(n, 6)
            if c.length == 4 or len(c.nodes()) == 3]
    if n >= 4:
        pool += q_generators(n)
    return pool


def generate_move_set(n: int, variant="zero", depth: int = 2,
                      max_cycle_length: int | None = None,
                      max_moves: int | None = 500_000) -> list[MarkovMove]:
    """Applicable Markov moves for the given variant, deduplicated.

    depth 1: every realization of a G_n cycle move (up to max_cycle_length)
    that lies in the kernel, plus the (0,0)-lifted Q quadrics.
    depth d >= 2: additionally the overlaps of d building blocks (4-cycles,
    hexagons on three nodes, Q quadrics), in both orientations.
    Every emitted move is checked against the full design matrix.
    """
    check_n(n)
    if n < 3:
        raise InvalidArgument("move sets need n >= 3")
    if depth < 1:
        raise InvalidArgument("depth must be >= 1")
    variant = Variant.parse(variant)
    A = build_design_matrix(n, variant, "full")
    L = max_cycle_length or default_max_cycle_length(n)
    found: dict[tuple, MarkovMove] = {}

    def add(mv: MarkovMove):
        if not mv.is_applicable_shape():
            return
        key = mv.canonical()
        if key in found:
            return
        if not mv.in_kernel(A):
            return
        found[key] = mv
        if max_moves is not None and len(found) > max_moves:
            raise InvalidArgument(f"move set exceeds {max_moves} moves; lower depth or cycle length")

    for c in enumerate_cycles(n, L):
        for mv in realizations(cycle_move(c), A):
            add(mv)
    for q in (q_generators(n) if n >= 4 else []):
        add(lift_move(q, "null"))

    if depth >= 2:
        pool = _simplified_pool(n, variant)
        pool = pool + [-p for p in pool]
        frontier = list(pool)
        for _ in range(depth - 1):
            nxt: dict[tuple, MarkovMove] = {}
            for f in frontier:
                fd = set(f.support_dyads)
                for g in pool:
                    if not fd.intersection(g.support_dyads):
                        continue
                    try:
                        mv = overlap(f, g, variant)
                    except EmptyMoveError:
                        continue
                    add(mv)
                    raw = _unlifted(mv)
                    nxt.setdefault(raw.canonical() + (raw.delta[0][1] > 0,), raw)
            frontier = list(nxt.values())
    out = list(found.values())
    out.sort(key=lambda m: (m.degree, m.canonical()))
    return [m.canonical_move() for m in out]


def _unlifted(m: MarkovMove) -> MarkovMove:
    """Drop (0,0) entries (the simplified-coordinate part of a move)."""
    return MarkovMove(m.n, tuple((k, v) for k, v in m.delta if k[1] is not NULL),
                      m.provenance, m.parents)


# application to networks

def apply(x: Network, m: MarkovMove, direction: int = 1) -> Network | None:
    """x + direction * m if that is again a network, else None."""
    if x.n != m.n:
        raise InvalidArgument("node counts differ")
    if direction not in (1, -1):
        raise InvalidArgument("direction must be +1 or -1")
    cfg = list(x.config)
    per: dict[int, list[tuple[DyadConfig, int]]] = {}
    for (d, c), v in m.delta:
        per.setdefault(d, []).append((c, v * direction))
    for d, entries in per.items():
        counts = {c: v for c, v in entries}
        counts[cfg[d]] = counts.get(cfg[d], 0) + 1
        new = [c for c, v in counts.items() if v != 0]
        if any(v < 0 or v > 1 for v in counts.values()) or len(new) != 1:
            return None
        cfg[d] = new[0]
    return Network(x.n, tuple(cfg))


@dataclass
class CompiledMoves:
    """Moves as bit masks over network codes (2 bits per dyad, first dyad high)."""

    n: int
    masks: np.ndarray
    frm: np.ndarray      # direction +1 source bits
    to: np.ndarray       # direction +1 target bits
    index: dict          # (mask, bits) -> list of target bits, both directions

    @classmethod
    def build(cls, n: int, moves: Sequence[MarkovMove]) -> "CompiledMoves":
        m = n_dyads(n)
        masks, frm, to = [], [], []
        index: dict = {}
        for mv in moves:
            if mv.n != n:
                raise InvalidArgument("node counts differ")
            mask = f = t = 0
            for d, (a, b) in mv.transitions().items():
                sh = 2 * (m - 1 - d)
                mask |= 3 << sh
                f |= int(a) << sh
                t |= int(b) << sh
            masks.append(mask)
            frm.append(f)
            to.append(t)
            index.setdefault((mask, f), []).append(t)
            index.setdefault((mask, t), []).append(f)
        for k in index:
            index[k] = sorted(set(index[k]))
        return cls(n, np.array(masks, dtype=np.int64), np.array(frm, dtype=np.int64),
                   np.array(to, dtype=np.int64), index)

    def neighbours(self, code: int) -> set[int]:
        out = set()
        for mask in self.distinct_masks:
            for t in self.index.get((mask, code & mask), ()):
                out.add((code & ~mask) | t)
        out.discard(code)
        return out

    @property
    def distinct_masks(self) -> list[int]:
        if not hasattr(self, "_dm"):
            self._dm = sorted({k[0] for k in self.index})
        return self._dm

    def step(self, code: int, k: int, direction: int) -> int | None:
        mask = int(self.masks[k])
        src, dst = (int(self.frm[k]), int(self.to[k])) if direction > 0 else (int(self.to[k]), int(self.frm[k]))
        if code & mask != src:
            return None
        return (code & ~mask) | dst
