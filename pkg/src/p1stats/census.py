"""Exhaustive small-n experiments: distinct statistics, MLE existence, connectivity."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import CapacityError, InvalidArgument
from .geometry.cone import interior_status
from .model import Network, Variant, all_statistics, build_design_matrix, n_dyads, statistic_hash
from .moves import CompiledMoves, generate_move_set
from .fiber import components_of_codes

MAX_CENSUS_N = 5
MAX_LP_N = 4
MAX_CONNECTIVITY_N = 4


@dataclass
class CensusReport:
    n: int
    variant: str
    networks_total: int
    distinct_statistics: int
    interior_statistics: int | None
    networks_with_mle: int | None
    runtime: float
    table: list[dict] = field(default_factory=list)

    def to_dict(self, with_runtime: bool = True) -> dict:
        d = asdict(self)
        if not with_runtime:
            d.pop("runtime")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def table_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["t_hash", "t", "fiber_size", "interior"])
        for r in self.table:
            w.writerow([r["t_hash"], " ".join(map(str, r["t"])), r["fiber_size"], r["interior"]])
        return buf.getvalue()


def group_statistics(n: int, variant) -> tuple:
    """Distinct statistics (sorted), inverse index per network code, and counts."""
    A = build_design_matrix(n, variant)
    T = all_statistics(A)
    U, inv, cnt = np.unique(T, axis=0, return_inverse=True, return_counts=True)
    return A, U, inv.ravel(), cnt


def _classify_chunk(args):
    n, variant, rows = args
    A = build_design_matrix(n, variant)
    return [interior_status(A, r) for r in rows]


def classify_statistics(n: int, variant, U: np.ndarray, workers: int = 1,
                        checkpoint: str | None = None, chunk: int = 500) -> list[str]:
    """Exact interior/boundary verdict for each row of U (ordered, deterministic)."""
    rows = [[int(v) for v in u] for u in U]
    done: list[str] = []
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            saved = json.load(fh)
        if saved.get("n") == n and saved.get("variant") == Variant.parse(variant).value \
                and saved.get("count") == len(rows):
            done = saved["verdicts"]
    chunks = [(n, Variant.parse(variant).value, rows[i:i + chunk])
              for i in range(len(done), len(rows), chunk)]

    def save():
        if checkpoint:
            tmp = checkpoint + ".tmp"
            with open(tmp, "w") as fh:
                json.dump({"n": n, "variant": Variant.parse(variant).value,
                           "count": len(rows), "verdicts": done}, fh)
            os.replace(tmp, checkpoint)

    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for res in ex.map(_classify_chunk, chunks):
                done.extend(res)
                save()
    else:
        for c in chunks:
            done.extend(_classify_chunk(c))
            save()
    return done


def run_census(n: int, variant="zero", detail: bool = False, classify: bool | None = None,
               workers: int = 1, checkpoint: str | None = None) -> CensusReport:
    """Enumerate all networks, group by exact statistic, classify MLE existence.

    classify defaults to True for n <= 4.  For n = 5 only the distinct
    statistics are counted unless classify=True is forced (a long run).
    """
    if n < 2 or n > MAX_CENSUS_N:
        raise CapacityError(f"census supports 2 <= n <= {MAX_CENSUS_N}")
    variant = Variant.parse(variant)
    if classify is None:
        classify = n <= MAX_LP_N
    t0 = time.perf_counter()
    A, U, inv, cnt = group_statistics(n, variant)
    interior = wmle = None
    verdicts = None
    if classify:
        verdicts = classify_statistics(n, variant, U, workers=workers, checkpoint=checkpoint)
        if "infeasible" in verdicts:
            raise AssertionError("an observed statistic was reported outside the cone")
        flags = np.array([v == "interior" for v in verdicts])
        interior = int(flags.sum())
        wmle = int(cnt[flags].sum())
    table = []
    if detail:
        for k, u in enumerate(U):
            table.append({"t_hash": statistic_hash(u), "t": [int(v) for v in u],
                          "fiber_size": int(cnt[k]),
                          "interior": None if verdicts is None else verdicts[k] == "interior"})
    total = 4 ** n_dyads(n)
    assert int(cnt.sum()) == total
    return CensusReport(n, variant.value, total, len(U), interior, wmle,
                        time.perf_counter() - t0, table)


@dataclass
class ConnectivityReport:
    n: int
    variant: str
    max_depth: int
    minimal_depth: int | None
    per_depth: dict[int, dict] = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def all_connected(self) -> bool:
        return self.minimal_depth is not None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_connectivity_census(n: int, variant="zero", depth: int = 2,
                               escalate: bool = True) -> ConnectivityReport:
    """Check every fiber for connectivity under generate_move_set(n, variant, d).

    Starts at d = 1 and escalates up to `depth` (or tests only d = depth when
    escalate is False).  Reports the smallest d that connects all fibers and
    the disconnected fibers at the largest depth tried.
    """
    if n > MAX_CONNECTIVITY_N:
        raise CapacityError(f"connectivity census supports n <= {MAX_CONNECTIVITY_N}")
    if depth < 1:
        raise InvalidArgument("depth must be >= 1")
    variant = Variant.parse(variant)
    A, U, inv, cnt = group_statistics(n, variant)
    order = np.argsort(inv, kind="stable")
    groups = np.split(order, np.cumsum(cnt)[:-1])
    rep = ConnectivityReport(n, variant.value, depth, None)
    depths = range(1, depth + 1) if escalate else [depth]
    for d in depths:
        moves = generate_move_set(n, variant, d)
        cm = CompiledMoves.build(n, moves)
        bad = []
        for k, g in enumerate(groups):
            if len(g) < 2:
                continue
            comps = components_of_codes(g.tolist(), cm)
            if len(comps) > 1:
                bad.append({"t": [int(v) for v in U[k]], "fiber_size": len(g),
                            "components": [[Network.from_code(n, c).to_text() for c in comp]
                                           for comp in comps]})
        rep.per_depth[d] = {"moves": len(moves), "fibers": len(groups),
                            "disconnected": len(bad)}
        rep.counterexamples = bad
        if not bad:
            rep.minimal_depth = d
            break
    return rep
