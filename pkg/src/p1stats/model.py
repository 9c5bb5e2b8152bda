"""Design matrices, networks and the parameter-to-probability map of the p1 model.

Coordinates of the ambient space are indexed by (dyad, configuration): dyads
{i<j} in lexicographic order, and within a dyad the configurations
(0,0), (1,0), (0,1), (1,1).  Here (a, b) means a = edge i->j, b = edge j->i.
Nodes are 1-based in labels and text formats, 0-based internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidArgument


class DyadConfig(IntEnum):
    NULL = 0    # (0,0)
    OUT = 1     # (1,0)  i -> j
    IN = 2      # (0,1)  j -> i
    MUTUAL = 3  # (1,1)

    @property
    def pair(self) -> tuple[int, int]:
        return _PAIRS[self]

    @property
    def code(self) -> str:
        a, b = self.pair
        return f"{a}{b}"

    @classmethod
    def from_code(cls, s: str) -> "DyadConfig":
        try:
            return cls(_CODES.index(s))
        except ValueError:
            raise InvalidArgument(f"bad dyad code {s!r}") from None

    @classmethod
    def from_pair(cls, a: int, b: int) -> "DyadConfig":
        return cls(_PAIRS.index((a, b)))


_PAIRS = [(0, 0), (1, 0), (0, 1), (1, 1)]
_CODES = ["00", "10", "01", "11"]


class Variant(str, Enum):
    ZERO = "zero"
    CONSTANT = "constant"
    EDGE = "edge"

    @classmethod
    def parse(cls, v) -> "Variant":
        if isinstance(v, Variant):
            return v
        key = str(v).lower()
        aliases = {"edgedependent": "edge", "edge-dependent": "edge", "z": "zero",
                   "c": "constant", "e": "edge"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise InvalidArgument(f"unknown variant {v!r}") from None


class Form(str, Enum):
    FULL = "full"
    SIMPLIFIED = "simplified"
    COMMON = "common"


def check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidArgument(f"node count must be an integer >= 2, got {n!r}")


@lru_cache(maxsize=None)
def dyads(n: int) -> tuple[tuple[int, int], ...]:
    """Unordered node pairs (0-based) in lexicographic order."""
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def dyad_index(n: int) -> dict[tuple[int, int], int]:
    return {d: k for k, d in enumerate(dyads(n))}


def n_dyads(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class DesignMatrix:
    """Integer design matrix with labelled rows and columns.

    Column labels are (dyad index, DyadConfig).  Row labels are strings such
    as "lambda_12", "alpha_3", "beta_1", "theta", "rho", "rho_2".
    """

    n: int
    variant: Variant
    form: Form
    entries: np.ndarray = field(repr=False)
    row_labels: tuple[str, ...]
    col_labels: tuple[tuple[int, DyadConfig], ...]

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def rank(self) -> int:
        from .geometry.linalg import rank
        return rank(self.entries)

    def to_rows(self) -> list[list[int]]:
        return [[int(v) for v in r] for r in self.entries.tolist()]

    def row(self, label: str) -> np.ndarray:
        return self.entries[self.row_labels.index(label)]

    def column_index(self, dyad: int, cfg: DyadConfig) -> int:
        return self.col_labels.index((dyad, DyadConfig(cfg)))

    def reorder_rows(self, labels: Sequence[str]) -> "DesignMatrix":
        """Same matrix with rows permuted to the given label order."""
        if sorted(labels) != sorted(self.row_labels):
            raise InvalidArgument("labels must be a permutation of the row labels")
        idx = [self.row_labels.index(l) for l in labels]
        return DesignMatrix(self.n, self.variant, self.form, self.entries[idx].copy(),
                            tuple(labels), self.col_labels)

    def drop_rows(self, labels: Sequence[str]) -> "DesignMatrix":
        keep = [k for k, l in enumerate(self.row_labels) if l not in set(labels)]
        return DesignMatrix(self.n, self.variant, self.form, self.entries[keep].copy(),
                            tuple(self.row_labels[k] for k in keep), self.col_labels)

    def select_columns(self, cols: Sequence[int]) -> "DesignMatrix":
        cols = list(cols)
        return DesignMatrix(self.n, self.variant, self.form, self.entries[:, cols].copy(),
                            self.row_labels, tuple(self.col_labels[c] for c in cols))

    def column_label_str(self, c: int) -> str:
        d, cfg = self.col_labels[c]
        i, j = dyads(self.n)[d]
        return f"p{i + 1}{j + 1}({cfg.pair[0]},{cfg.pair[1]})"

    def to_text(self) -> str:
        return matrix_to_text(self.to_rows())

    def pretty(self) -> str:
        width = max(len(l) for l in self.row_labels)
        lines = []
        for lab, r in zip(self.row_labels, self.to_rows()):
            lines.append(f"{lab:>{width}} " + " ".join(str(v) for v in r))
        return "\n".join(lines)

    def __eq__(self, other):
        if not isinstance(other, DesignMatrix):
            return NotImplemented
        return (self.n == other.n and self.variant == other.variant
                and self.form == other.form and self.row_labels == other.row_labels
                and self.col_labels == other.col_labels
                and np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.n, self.variant, self.form, self.row_labels, self.entries.tobytes()))


def matrix_to_text(rows: Sequence[Sequence[int]]) -> str:
    ncols = len(rows[0]) if rows else 0
    out = [f"{len(rows)} {ncols}"]
    out += [" ".join(str(int(v)) for v in r) for r in rows]
    return "\n".join(out) + "\n"


def matrix_from_text(text: str) -> list[list[int]]:
    toks = text.split()
    if len(toks) < 2:
        raise InvalidArgument("matrix text needs a 'rows cols' header")
    r, c = int(toks[0]), int(toks[1])
    vals = [int(v) for v in toks[2:]]
    if len(vals) != r * c:
        raise InvalidArgument(f"expected {r * c} entries, got {len(vals)}")
    return [vals[k * c:(k + 1) * c] for k in range(r)]


def _row_labels(n: int, variant: Variant, with_lambda: bool) -> list[str]:
    labels = []
    if with_lambda:
        labels += [f"lambda_{i + 1}{j + 1}" for i, j in dyads(n)]
    labels += [f"alpha_{i + 1}" for i in range(n)]
    labels += [f"beta_{i + 1}" for i in range(n)]
    labels.append("theta")
    if variant in (Variant.CONSTANT, Variant.EDGE):
        labels.append("rho")
    if variant is Variant.EDGE:
        labels += [f"rho_{i + 1}" for i in range(n)]
    return labels


@lru_cache(maxsize=None)
def _build(n: int, variant: Variant, form: Form) -> DesignMatrix:
    with_lambda = form is Form.FULL
    labels = _row_labels(n, variant, with_lambda)
    pos = {l: k for k, l in enumerate(labels)}
    cfgs = list(DyadConfig) if with_lambda else [DyadConfig.OUT, DyadConfig.IN, DyadConfig.MUTUAL]
    cols = [(d, c) for d in range(n_dyads(n)) for c in cfgs]
    M = np.zeros((len(labels), len(cols)), dtype=np.int64)
    for k, (d, cfg) in enumerate(cols):
        i, j = dyads(n)[d]
        a, b = cfg.pair
        if with_lambda:
            M[pos[f"lambda_{i + 1}{j + 1}"], k] = 1
        M[pos[f"alpha_{i + 1}"], k] += a
        M[pos[f"alpha_{j + 1}"], k] += b
        M[pos[f"beta_{i + 1}"], k] += b
        M[pos[f"beta_{j + 1}"], k] += a
        M[pos["theta"], k] = a + b
        if "rho" in pos:
            M[pos["rho"], k] = min(a, b)
        if variant is Variant.EDGE:
            M[pos[f"rho_{i + 1}"], k] = min(a, b)
            M[pos[f"rho_{j + 1}"], k] = min(a, b)
    return DesignMatrix(n, variant, form, M, tuple(labels), tuple(cols))


def build_design_matrix(n: int, variant="zero", form="full") -> DesignMatrix:
    """Design matrix of the p1 model for n nodes.

    form is "full" (with lambda rows and (0,0) columns) or "simplified".
    """
    check_n(n)
    variant = Variant.parse(variant)
    form = Form(form) if not isinstance(form, Form) else form
    if form is Form.COMMON:
        return common_submatrix(n)
    return _build(int(n), variant, form)


@lru_cache(maxsize=None)
def _common(n: int) -> DesignMatrix:
    labels = [f"alpha_{i + 1}" for i in range(n)] + [f"beta_{i + 1}" for i in range(n)]
    cols = [(d, c) for d in range(n_dyads(n)) for c in (DyadConfig.OUT, DyadConfig.IN)]
    M = np.zeros((2 * n, len(cols)), dtype=np.int64)
    for k, (d, cfg) in enumerate(cols):
        i, j = dyads(n)[d]
        src, dst = (i, j) if cfg is DyadConfig.OUT else (j, i)
        M[src, k] = 1
        M[n + dst, k] = 1
    return DesignMatrix(n, Variant.ZERO, Form.COMMON, M, tuple(labels), tuple(cols))


def common_submatrix(n: int) -> DesignMatrix:
    """Incidence matrix of the bipartite graph G_n (rows alpha, beta; theta dropped)."""
    check_n(n)
    return _common(int(n))


def directed_edge_column_order(n: int) -> list[int]:
    """Permutation taking common_submatrix columns to directed-edge order.

    Directed edges (i, j), i != j, listed lexicographically: (1,2), (1,3), ...,
    (2,1), (2,3), ...  Entry k is the common_submatrix column of the k-th edge.
    """
    idx = dyad_index(n)
    order = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if i < j:
                order.append(2 * idx[(i, j)])
            else:
                order.append(2 * idx[(j, i)] + 1)
    return order


@dataclass(frozen=True)
class Network:
    """A point of the sample space: one configuration per dyad."""

    n: int
    config: tuple[DyadConfig, ...]

    def __post_init__(self):
        check_n(self.n)
        if len(self.config) != n_dyads(self.n):
            raise InvalidArgument(f"need {n_dyads(self.n)} dyad configurations, got {len(self.config)}")
        object.__setattr__(self, "config", tuple(DyadConfig(c) for c in self.config))

    @classmethod
    def empty(cls, n: int) -> "Network":
        return cls(n, (DyadConfig.NULL,) * n_dyads(n))

    @property
    def code(self) -> int:
        """Base-4 integer code; first dyad most significant (lex order = code order)."""
        v = 0
        for c in self.config:
            v = (v << 2) | int(c)
        return v

    @classmethod
    def from_code(cls, n: int, code: int) -> "Network":
        m = n_dyads(n)
        if not 0 <= code < 4 ** m:
            raise InvalidArgument("network code out of range")
        cfg = [DyadConfig((code >> (2 * (m - 1 - k))) & 3) for k in range(m)]
        return cls(n, tuple(cfg))

    def onehot(self) -> np.ndarray:
        x = np.zeros(4 * len(self.config), dtype=np.int64)
        for k, c in enumerate(self.config):
            x[4 * k + int(c)] = 1
        return x

    @classmethod
    def from_onehot(cls, n: int, x: Sequence[int]) -> "Network":
        x = [int(v) for v in x]
        m = n_dyads(n)
        if len(x) != 4 * m:
            raise InvalidArgument(f"one-hot vector must have length {4 * m}")
        cfg = []
        for k in range(m):
            block = x[4 * k:4 * k + 4]
            if sorted(block) != [0, 0, 0, 1]:
                raise InvalidArgument(f"dyad block {k} is not one-hot: {block}")
            cfg.append(DyadConfig(block.index(1)))
        return cls(n, tuple(cfg))

    def adjacency(self) -> np.ndarray:
        Y = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), c in zip(dyads(self.n), self.config):
            a, b = c.pair
            Y[i, j], Y[j, i] = a, b
        return Y

    @classmethod
    def from_adjacency(cls, Y) -> "Network":
        Y = np.asarray(Y)
        if Y.ndim != 2 or Y.shape[0] != Y.shape[1]:
            raise InvalidArgument("adjacency matrix must be square")
        if np.any(np.diag(Y) != 0) or not np.isin(Y, (0, 1)).all():
            raise InvalidArgument("adjacency matrix must be 0/1 with zero diagonal")
        n = Y.shape[0]
        return cls(n, tuple(DyadConfig.from_pair(int(Y[i, j]), int(Y[j, i])) for i, j in dyads(n)))

    def to_text(self) -> str:
        return " ".join([str(self.n)] + [c.code for c in self.config])

    @classmethod
    def from_text(cls, line: str) -> "Network":
        toks = line.split()
        if not toks:
            raise InvalidArgument("empty network line")
        n = int(toks[0])
        return cls(n, tuple(DyadConfig.from_code(t) for t in toks[1:]))

    def to_json(self) -> str:
        return json.dumps(self.adjacency().tolist())

    @classmethod
    def from_json(cls, s: str) -> "Network":
        return cls.from_adjacency(json.loads(s))

    def __str__(self):
        return self.to_text()


def parse_network(text: str, n: int | None = None) -> Network:
    """Parse any supported network form.

    Accepts the text format, adjacency JSON, or a bare whitespace-separated
    one-hot vector (then n is inferred from its length).
    """
    s = text.strip()
    if s.startswith("["):
        return Network.from_json(s)
    toks = s.split()
    if len(toks) > 1 and all(len(t) == 2 for t in toks[1:]):
        return Network.from_text(s)
    vals = [int(t) for t in toks]
    m = len(vals) // 4
    k = 2
    while n_dyads(k) < m:
        k += 1
    if n_dyads(k) != m or (n is not None and n != k):
        raise InvalidArgument("cannot infer node count from one-hot vector")
    return Network.from_onehot(k, vals)


def sufficient_statistic(A: DesignMatrix, x: Network) -> tuple[int, ...]:
    """t = A x as an exact integer tuple (hashable, usable as a grouping key)."""
    if A.form is not Form.FULL:
        raise InvalidArgument("sufficient statistics need a full design matrix")
    if A.n != x.n:
        raise InvalidArgument(f"network has {x.n} nodes, matrix has {A.n}")
    cols = [4 * d + int(c) for d, c in enumerate(x.config)]
    return tuple(int(v) for v in A.entries[:, cols].sum(axis=1))


def statistic_hash(t: Sequence[int]) -> str:
    import hashlib
    return hashlib.sha1(",".join(str(int(v)) for v in t).encode()).hexdigest()[:12]


def non_lambda_rows(A: DesignMatrix) -> list[int]:
    return [k for k, l in enumerate(A.row_labels) if not l.startswith("lambda")]


def probabilities_from_parameters(A: DesignMatrix, zeta) -> np.ndarray:
    """Per-dyad normalized probabilities p with log p = A^T zeta' + lambda.

    zeta is indexed by the non-lambda rows of A in order.
    """
    if A.form is not Form.FULL:
        raise InvalidArgument("probabilities need a full design matrix")
    zeta = np.asarray(zeta, dtype=float)
    rows = non_lambda_rows(A)
    if zeta.shape != (len(rows),):
        raise InvalidArgument(f"zeta must have length {len(rows)}")
    if not np.all(np.isfinite(zeta)):
        raise InvalidArgument("zeta entries must be finite")
    eta = (A.entries[rows].T @ zeta).reshape(-1, 4)
    eta -= eta.max(axis=1, keepdims=True)
    w = np.exp(eta)
    return (w / w.sum(axis=1, keepdims=True)).ravel()


def enumerate_networks(n: int, start: int = 0, stop: int | None = None) -> Iterator[Network]:
    """Yield networks with codes in [start, stop), in lexicographic order."""
    check_n(n)
    total = 4 ** n_dyads(n)
    stop = total if stop is None else min(stop, total)
    for code in range(max(start, 0), stop):
        yield Network.from_code(n, code)


def all_configs(n: int) -> np.ndarray:
    """Array of shape (4^m, m) of configuration indices for every network, in code order."""
    m = n_dyads(n)
    codes = np.arange(4 ** m, dtype=np.int64)
    shifts = 2 * np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 3).astype(np.int8)


def all_statistics(A: DesignMatrix) -> np.ndarray:
    """Statistics t = A x for every network, rows in code order (vectorized)."""
    if A.form is not Form.FULL:
        raise InvalidArgument("statistics need a full design matrix")
    n = A.n
    m = n_dyads(n)
    cfg = all_configs(n)
    E = A.entries
    T = np.zeros((cfg.shape[0], E.shape[0]), dtype=np.int16)
    for d in range(m):
        block = E[:, 4 * d:4 * d + 4].T.astype(np.int16)   # 4 x rows
        T += block[cfg[:, d]]
    return T
