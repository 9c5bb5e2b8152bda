"""Likelihood, goodness-of-fit statistics and (extended) maximum likelihood."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, InfeasibleStatistic, InvalidArgument
from .geometry.cone import FacialSet, facial_set, interior_status
from .geometry.linalg import independent_rows
from .model import DesignMatrix, Form, Network


class GofKind(str, Enum):
    PEARSON = "pearson"                  # sum (x - p)^2 / p
    PEARSON_SQUARED = "pearson-squared"  # sum (x - p)^2 / p^2
    LR = "lr"                            # sum x log(x / p), no factor 2

    @classmethod
    def parse(cls, v) -> "GofKind":
        if isinstance(v, GofKind):
            return v
        aliases = {"pearsonstandard": "pearson", "pearsonpaper": "pearson-squared",
                   "likelihoodratio": "lr", "likelihood-ratio": "lr", "g2": "lr"}
        key = str(v).lower()
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise InvalidArgument(f"unknown statistic {v!r}") from None


def _onehot(x) -> np.ndarray:
    return x.onehot() if isinstance(x, Network) else np.asarray(x)


def log_likelihood(p, x) -> float:
    """Sum over dyads of log p at the observed configuration (-inf on a zero)."""
    p = np.asarray(p, dtype=float)
    xv = _onehot(x)
    if p.shape != xv.shape:
        raise InvalidArgument("probability and network sizes differ")
    sel = p[xv == 1]
    if np.any(sel <= 0):
        return float("-inf")
    return float(np.log(sel).sum())


def gof_statistic(x, p_hat, kind="pearson", factor2: bool = False) -> float:
    """Goodness-of-fit of network x against fitted probabilities p_hat.

    Coordinates with p_hat = 0 and x = 0 are skipped; p_hat = 0 where x = 1
    gives an infinite statistic.  factor2 doubles the likelihood ratio for
    display; orderings (and hence exceedance fractions) are unaffected.
    """
    kind = GofKind.parse(kind)
    p = np.asarray(p_hat, dtype=float)
    xv = _onehot(x).astype(float)
    if p.shape != xv.shape:
        raise InvalidArgument("probability and network sizes differ")
    if np.any((p == 0) & (xv > 0)):
        return float("inf")
    s = p > 0
    if kind is GofKind.PEARSON:
        return float((((xv - p) ** 2)[s] / p[s]).sum())
    if kind is GofKind.PEARSON_SQUARED:
        return float((((xv - p) ** 2)[s] / p[s] ** 2).sum())
    on = xv > 0
    val = float(-np.log(p[on]).sum())
    return 2 * val if factor2 else val


@dataclass
class MleResult:
    p_hat: np.ndarray
    exists: bool
    facial_set: FacialSet
    moment_residual: float
    iterations: int
    zeta_hat: dict[str, float] | None = None
    gauge: list[str] = field(default_factory=list)
    tol: float = 1e-10
    method: str = "newton"

    def to_dict(self) -> dict:
        return {"exists": self.exists, "p_hat": [float(v) for v in self.p_hat],
                "zeta_hat": self.zeta_hat, "gauge_pinned_to_zero": self.gauge,
                "facial_set": self.facial_set.to_dict(), "moment_residual": self.moment_residual,
                "iterations": self.iterations, "tol": self.tol, "method": self.method}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class _Restricted:
    """The model restricted to a subset of columns, with a fixed gauge."""

    def __init__(self, A: DesignMatrix, cols: Sequence[int]):
        self.A = A
        self.cols = np.asarray(cols, dtype=int)
        E = A.entries[:, self.cols].astype(float)
        lam = [k for k, l in enumerate(A.row_labels) if l.startswith("lambda")]
        other = [k for k in range(len(A.row_labels)) if k not in lam]
        chosen = independent_rows(A.entries[:, self.cols], order=lam + other)
        self.rows = [k for k in chosen if k not in lam]
        self.pinned = [A.row_labels[k] for k in other if k not in self.rows]
        self.B = E[self.rows]                       # r x N_F
        dy = np.array([A.col_labels[c][0] for c in self.cols])
        self.starts = np.flatnonzero(np.r_[True, dy[1:] != dy[:-1]])
        self.group = np.repeat(np.arange(len(self.starts)), np.diff(np.r_[self.starts, len(dy)]))

    def probs(self, zeta: np.ndarray) -> np.ndarray:
        eta = self.B.T @ zeta
        mx = np.maximum.reduceat(eta, self.starts)
        w = np.exp(eta - mx[self.group])
        tot = np.add.reduceat(w, self.starts)
        return w / tot[self.group]

    def loglik(self, zeta: np.ndarray, tR: np.ndarray) -> float:
        eta = self.B.T @ zeta
        mx = np.maximum.reduceat(eta, self.starts)
        lse = mx + np.log(np.add.reduceat(np.exp(eta - mx[self.group]), self.starts))
        return float(zeta @ tR - lse.sum())

    def hessian(self, p: np.ndarray) -> np.ndarray:
        Bp = self.B * p
        H = Bp @ self.B.T
        U = np.add.reduceat(Bp, self.starts, axis=1)   # r x dyads
        return H - U @ U.T

    def embed(self, pF: np.ndarray) -> np.ndarray:
        p = np.zeros(self.A.entries.shape[1])
        p[self.cols] = pF
        return p


def _fit_newton(R: _Restricted, t: np.ndarray, tol: float, max_iter: int):
    tR = t[R.rows]
    zeta = np.zeros(len(R.rows))
    A = R.A.entries.astype(float)
    for it in range(1, max_iter + 1):
        p = R.probs(zeta)
        res = float(np.abs(A @ R.embed(p) - t).max())
        if res <= tol:
            return zeta, p, res, it - 1
        g = tR - R.B @ p
        H = R.hessian(p)
        try:
            step = np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, g, rcond=None)[0]
        f0 = R.loglik(zeta, tR)
        s = 1.0
        while s > 1e-12:
            cand = zeta + s * step
            if R.loglik(cand, tR) >= f0 - 1e-15 * abs(f0):
                break
            s *= 0.5
        zeta = zeta + s * step
    p = R.probs(zeta)
    res = float(np.abs(A @ R.embed(p) - t).max())
    if res <= tol:
        return zeta, p, res, max_iter
    raise ConvergenceError(f"no convergence in {max_iter} iterations (residual {res:.3g})",
                           residual=res, iterations=max_iter)


def _fit_scaling(R: _Restricted, t: np.ndarray, tol: float, max_iter: int):
    """Cyclic one-parameter updates (a proportional-scaling style fitter)."""
    tR = t[R.rows]
    zeta = np.zeros(len(R.rows))
    A = R.A.entries.astype(float)
    for it in range(1, max_iter + 1):
        for k in range(len(zeta)):
            p = R.probs(zeta)
            b = R.B[k]
            mean = b @ p
            U = np.add.reduceat(b * p, R.starts)
            var = (b * b) @ p - U @ U
            if var > 0:
                zeta[k] += (tR[k] - mean) / var
        p = R.probs(zeta)
        res = float(np.abs(A @ R.embed(p) - t).max())
        if res <= tol:
            return zeta, p, res, it
    raise ConvergenceError(f"no convergence in {max_iter} sweeps (residual {res:.3g})",
                           residual=res, iterations=max_iter)


def _fit_on(A: DesignMatrix, t: np.ndarray, cols: Sequence[int], tol: float, max_iter: int,
            method: str):
    R = _Restricted(A, cols)
    if method == "newton":
        zeta, p, res, it = _fit_newton(R, t, tol, max_iter)
    elif method == "scaling":
        zeta, p, res, it = _fit_scaling(R, t, tol, max_iter)
    else:
        raise InvalidArgument(f"unknown method {method!r}")
    return R, zeta, R.embed(p), res, it


def _check(A: DesignMatrix, t) -> np.ndarray:
    if A.form is not Form.FULL:
        raise InvalidArgument("fitting needs a full design matrix")
    tv = np.asarray(t, dtype=float)
    if tv.shape != (A.entries.shape[0],):
        raise InvalidArgument(f"statistic must have length {A.entries.shape[0]}")
    return tv


def fit_mle(A: DesignMatrix, t, tol: float = 1e-10, max_iter: int = 10_000,
            method: str = "newton", exists: bool | None = None) -> MleResult:
    """Maximum likelihood estimate for the statistic t.

    Existence is decided exactly (t in the relative interior of the marginal
    cone).  If the MLE does not exist the extended MLE is returned with
    exists=False.  Pass exists=True to skip the exact check, e.g. for
    fractional statistics computed in floating point.
    """
    tv = _check(A, t)
    N = A.entries.shape[1]
    if exists is None:
        st = interior_status(A, [int(v) if float(v).is_integer() else v for v in t])
        if st == "infeasible":
            raise InfeasibleStatistic("statistic is not in the marginal cone")
        exists = st == "interior"
    if not exists:
        return extended_mle(A, t, tol=tol, max_iter=max_iter, method=method)
    R, zeta, p, res, it = _fit_on(A, tv, range(N), tol, max_iter, method)
    zh = {A.row_labels[k]: float(v) for k, v in zip(R.rows, zeta)}
    return MleResult(p, True, FacialSet(tuple(range(N)), N, None), res, it, zh,
                     R.pinned, tol, method)


def extended_mle(A: DesignMatrix, t, tol: float = 1e-10, max_iter: int = 10_000,
                 method: str = "newton") -> MleResult:
    """Extended MLE: fit on the facial set of t and set the other cells to 0."""
    tv = _check(A, t)
    fs = facial_set(A, [int(v) for v in t])
    R, zeta, p, res, it = _fit_on(A, tv, fs.indices, tol, max_iter, method)
    full = fs.is_full
    zh = {A.row_labels[k]: float(v) for k, v in zip(R.rows, zeta)} if full else None
    return MleResult(p, full, fs, res, it, zh, R.pinned if full else [], tol, method)
