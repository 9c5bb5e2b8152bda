"""Fibers: exact enumeration, connectivity under a move set, and the GoF walk."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapacityError, InvalidArgument
from .inference import GofKind, MleResult, fit_mle, gof_statistic
from .model import (DesignMatrix, Form, Network, build_design_matrix, n_dyads,
                    sufficient_statistic)
from .moves import CompiledMoves, MarkovMove, moves_hash

MAX_FIBER_N = 5
TIE_TOL = 1e-9


@dataclass
class Fiber:
    t: tuple[int, ...]
    members: list[Network]

    @property
    def size(self) -> int:
        return len(self.members)

    def codes(self) -> list[int]:
        return [x.code for x in self.members]

    def to_json(self) -> str:
        return json.dumps({"t": list(self.t), "members": [x.to_text() for x in self.members]})

    @classmethod
    def from_json(cls, s: str) -> "Fiber":
        o = json.loads(s)
        return cls(tuple(o["t"]), [Network.from_text(l) for l in o["members"]])

    def to_text(self) -> str:
        return "".join(x.to_text() + "\n" for x in self.members)


def enumerate_fiber(A: DesignMatrix, t: Sequence[int], max_n: int = MAX_FIBER_N) -> Fiber:
    """All networks x with A x = t, by depth-first search over dyads.

    Entries of A are nonnegative, so a partial statistic exceeding t in any
    row prunes the branch; a suffix bound (the most the remaining dyads can
    add) prunes from below.
    """
    if A.form is not Form.FULL:
        raise InvalidArgument("fibers need a full design matrix")
    n = A.n
    if n > max_n:
        raise CapacityError(f"n={n} is too large to enumerate; use the fiber walk instead")
    t = np.asarray(t, dtype=np.int64)
    if t.shape != (A.entries.shape[0],):
        raise InvalidArgument("statistic has the wrong length")
    m = n_dyads(n)
    blocks = [A.entries[:, 4 * d:4 * d + 4].T.copy() for d in range(m)]   # 4 x rows each
    suffix = np.zeros((m + 1, len(t)), dtype=np.int64)
    for d in range(m - 1, -1, -1):
        suffix[d] = suffix[d + 1] + blocks[d].max(axis=0)
    members: list[Network] = []
    cfg = [0] * m

    def rec(d: int, partial: np.ndarray):
        if d == m:
            if np.array_equal(partial, t):
                members.append(Network(n, tuple(cfg)))
            return
        for c in range(4):
            nxt = partial + blocks[d][c]
            if np.any(nxt > t) or np.any(nxt + suffix[d + 1] < t):
                continue
            cfg[d] = c
            rec(d + 1, nxt)

    rec(0, np.zeros(len(t), dtype=np.int64))
    return Fiber(tuple(int(v) for v in t), members)


def fiber_of(x: Network, variant="zero") -> Fiber:
    A = build_design_matrix(x.n, variant)
    return enumerate_fiber(A, sufficient_statistic(A, x))


@dataclass
class Connectivity:
    connected: bool
    components: list[list[Network]]

    def to_dict(self) -> dict:
        return {"connected": self.connected,
                "components": [[x.to_text() for x in c] for c in self.components]}


def components_of_codes(codes: Sequence[int], cm: CompiledMoves) -> list[list[int]]:
    """Connected components of the graph on the given codes; edges = single moves."""
    members = set(int(c) for c in codes)
    seen: set[int] = set()
    comps = []
    for s in sorted(members):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        q = deque([s])
        while q:
            u = q.popleft()
            for v in cm.neighbours(u):
                if v not in seen:
                    if v not in members:
                        raise AssertionError("a move left the fiber")
                    seen.add(v)
                    comp.append(v)
                    q.append(v)
        comps.append(sorted(comp))
    return comps


def check_connectivity(fiber: Fiber, moves: Sequence[MarkovMove] | CompiledMoves) -> Connectivity:
    if not fiber.members:
        return Connectivity(True, [])
    n = fiber.members[0].n
    cm = moves if isinstance(moves, CompiledMoves) else CompiledMoves.build(n, moves)
    comps = components_of_codes(fiber.codes(), cm)
    return Connectivity(len(comps) == 1,
                        [[Network.from_code(n, c) for c in comp] for comp in comps])


@dataclass
class WalkReport:
    steps: int
    exceed_count: int
    alpha_hat: float
    seed: int
    acceptance_rate: float
    distinct_states_visited: int
    move_set_hash: str
    statistic: str
    strict: bool = True
    burn_in: int = 0
    thin: int = 1
    visits: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def fiber_mle(A: DesignMatrix, t: Sequence[int], tol: float = 1e-10) -> MleResult:
    """The single MLE (or extended MLE) shared by every member of the fiber of t."""
    return fit_mle(A, list(t), tol=tol)


def _exceeds(g_new: float, g_obs: float, strict: bool) -> bool:
    if strict:
        return g_new > g_obs + TIE_TOL
    return g_new >= g_obs - TIE_TOL


def walk_gof(x: Network, moves: Sequence[MarkovMove], K: int, seed: int = 0,
             stat="pearson", variant="zero", strict: bool = True, burn_in: int = 0,
             thin: int = 1, record_visits: bool = False, p_hat=None) -> WalkReport:
    """Monte Carlo exceedance fraction of the goodness-of-fit statistic.

    Each step draws a move and a sign uniformly; an inapplicable proposal
    leaves the chain in place and still counts as a step.  A step counts as
    an exceedance when GF(new state) > GF(x) (or >= with strict=False), GF
    being evaluated against the fixed MLE of the fiber.  Values within
    1e-9 of each other are treated as ties.
    """
    if K < 1:
        raise InvalidArgument("K must be at least 1")
    if not moves:
        raise InvalidArgument("empty move set")
    if thin < 1 or burn_in < 0:
        raise InvalidArgument("thin must be >= 1 and burn_in >= 0")
    kind = GofKind.parse(stat)
    A = build_design_matrix(x.n, variant)
    t = sufficient_statistic(A, x)
    if p_hat is None:
        p_hat = fiber_mle(A, t).p_hat
    cm = CompiledMoves.build(x.n, moves)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    gf_cache: dict[int, float] = {}

    def gf(code: int) -> float:
        v = gf_cache.get(code)
        if v is None:
            v = gof_statistic(Network.from_code(x.n, code), p_hat, kind)
            gf_cache[code] = v
        return v

    g_obs = gf(x.code)
    cur = x.code
    nmoves = len(moves)
    accepted = exceed = counted = 0
    visits: dict[int, int] = {}
    total = burn_in + K * thin
    batch = 4096
    step = 0
    while step < total:
        b = min(batch, total - step)
        ks = rng.integers(0, nmoves, size=b)
        eps = rng.integers(0, 2, size=b)
        for k, e in zip(ks.tolist(), eps.tolist()):
            nxt = cm.step(cur, k, 1 if e else -1)
            if nxt is not None:
                cur = nxt
                accepted += 1
            step += 1
            if step > burn_in and (step - burn_in) % thin == 0:
                counted += 1
                if _exceeds(gf(cur), g_obs, strict):
                    exceed += 1
                visits[cur] = visits.get(cur, 0) + 1
    report = WalkReport(
        steps=counted, exceed_count=exceed, alpha_hat=exceed / counted, seed=seed,
        acceptance_rate=accepted / total, distinct_states_visited=len(visits),
        move_set_hash=moves_hash(moves), statistic=kind.value, strict=strict,
        burn_in=burn_in, thin=thin)
    if record_visits:
        report.visits = {Network.from_code(x.n, c).to_text(): v for c, v in sorted(visits.items())}
    return report


def exact_alpha(x: Network, stat="pearson", variant="zero", strict: bool = True,
                fiber: Fiber | None = None) -> Fraction:
    """|{x' in fiber : GF(x') > GF(x)}| / |fiber| with the fiber's fixed MLE."""
    kind = GofKind.parse(stat)
    A = build_design_matrix(x.n, variant)
    t = sufficient_statistic(A, x)
    if fiber is None:
        fiber = enumerate_fiber(A, t)
    p_hat = fiber_mle(A, t).p_hat
    g_obs = gof_statistic(x, p_hat, kind)
    k = sum(1 for y in fiber.members if _exceeds(gof_statistic(y, p_hat, kind), g_obs, strict))
    return Fraction(k, fiber.size)


def _weak_order(values: Sequence[float]) -> list[tuple[int, ...]]:
    """Members grouped into tie classes (within TIE_TOL), from largest to smallest."""
    idx = sorted(range(len(values)), key=lambda k: -values[k])
    classes: list[list[int]] = []
    for k in idx:
        if classes and values[classes[-1][0]] - values[k] <= TIE_TOL:
            classes[-1].append(k)
        else:
            classes.append([k])
    return [tuple(sorted(c)) for c in classes]


def compare_statistics(fiber: Fiber, variant="zero", first="pearson", second="lr") -> dict:
    """Whether two GoF statistics order a fiber alike and give the same exceedance fractions."""
    if not fiber.members:
        raise InvalidArgument("empty fiber")
    A = build_design_matrix(fiber.members[0].n, variant)
    p_hat = fiber_mle(A, fiber.t).p_hat
    out = {"size": fiber.size}
    orders, alphas = [], []
    for kind in (first, second):
        g = [gof_statistic(x, p_hat, kind) for x in fiber.members]
        orders.append(_weak_order(g))
        alphas.append([sum(1 for h in g if _exceeds(h, v, True)) for v in g])
    out["orderings_agree"] = orders[0] == orders[1]
    out["alphas_agree"] = alphas[0] == alphas[1]
    return out
