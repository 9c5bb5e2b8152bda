"""Command-line interface.

Every run prints a metadata header (version, configuration, seed).  With
--json the output is a single JSON object {"metadata": ..., "result": ...};
the result part is deterministic for a fixed configuration and seed, while
timestamps and runtimes are kept in the metadata.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import CapacityError, ConvergenceError
from .model import (Network, all_statistics, build_design_matrix, common_submatrix, parse_network,
                    sufficient_statistic)

THREADS_ENV = "P1STATS_THREADS"


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _read_network(arg: str, n: int | None) -> Network:
    text = arg
    if arg.startswith("@"):
        with open(arg[1:]) as fh:
            text = fh.read()
    x = parse_network(text, n)
    if n is not None and x.n != n:
        raise argparse.ArgumentTypeError(f"network has {x.n} nodes, --n is {n}")
    return x


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="p1stats", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_n=True):
        sp.add_argument("--n", type=int, required=need_n, help="number of nodes")
        sp.add_argument("--variant", choices=["zero", "constant", "edge"], default="zero")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--output", help="write the result to this file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None)

    s = sub.add_parser("design", help="print a design matrix")
    common(s)
    s.add_argument("--simplified", action="store_true")
    s.add_argument("--common", action="store_true", help="the common submatrix")
    s.add_argument("--text", action="store_true", help="'rows cols' text format")

    s = sub.add_parser("suffstat", help="sufficient statistic of a network")
    common(s, need_n=False)
    s.add_argument("--input", required=True)

    s = sub.add_parser("moves", help="generate a Markov move set")
    common(s)
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--max-cycle-length", type=int)
    s.add_argument("--format", choices=["binomial", "line", "lattice"], default="binomial")

    s = sub.add_parser("fiber", help="enumerate the fiber of a network")
    common(s, need_n=False)
    s.add_argument("--input", required=True)

    s = sub.add_parser("gof", help="goodness of fit: fiber walk or exact exceedance")
    common(s, need_n=False)
    s.add_argument("--input", required=True)
    s.add_argument("--exact", action="store_true")
    s.add_argument("--K", type=int, default=10_000)
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--stat", choices=["pearson", "pearson-squared", "lr"], default="pearson")
    s.add_argument("--geq", action="store_true", help="count ties as exceedances")
    s.add_argument("--burn-in", type=int, default=0)
    s.add_argument("--thin", type=int, default=1)

    s = sub.add_parser("mle", help="fit the MLE or extended MLE")
    common(s, need_n=False)
    s.add_argument("--input", required=True)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--max-iter", type=int, default=10_000)
    s.add_argument("--method", choices=["newton", "scaling"], default="newton")
    s.add_argument("--exists-only", action="store_true")

    s = sub.add_parser("cone", help="marginal cone: facets, dimension, zero patterns")
    common(s)
    s.add_argument("--what", choices=["facets", "dim", "zero-patterns"], default="facets")
    s.add_argument("--long-running", action="store_true", help="lift the column cap")

    s = sub.add_parser("hull", help="vertices and facets of the observable statistics")
    common(s)

    s = sub.add_parser("census", help="exhaustive MLE-existence census")
    common(s)
    s.add_argument("--detail", action="store_true")
    s.add_argument("--classify", action="store_true", help="force exact classification (n=5)")
    s.add_argument("--checkpoint")

    s = sub.add_parser("connectivity", help="fiber connectivity under generated moves")
    common(s)
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--no-escalate", action="store_true")
    return p


def _frac(v) -> str:
    return str(Fraction(v))


def run(args) -> tuple[object, str]:
    """Dispatch; returns (json-able result, human-readable text)."""
    cmd = args.command
    if cmd == "design":
        if args.common:
            A = common_submatrix(args.n)
        else:
            A = build_design_matrix(args.n, args.variant, "simplified" if args.simplified else "full")
        res = {"row_labels": list(A.row_labels),
               "col_labels": [A.column_label_str(k) for k in range(A.shape[1])],
               "entries": A.to_rows()}
        return res, A.to_text() if args.text else A.pretty()

    if cmd == "suffstat":
        x = _read_network(args.input, args.n)
        A = build_design_matrix(x.n, args.variant)
        t = sufficient_statistic(A, x)
        return {"labels": list(A.row_labels), "t": list(t)}, \
            "\n".join(f"{l} {v}" for l, v in zip(A.row_labels, t))

    if cmd == "moves":
        from .moves import generate_move_set, moves_hash, moves_to_lattice
        S = generate_move_set(args.n, args.variant, args.depth, args.max_cycle_length)
        res = {"count": len(S), "hash": moves_hash(S), "moves": [m.to_json_obj() for m in S]}
        if args.format == "lattice":
            text = moves_to_lattice(S)
        elif args.format == "line":
            text = "\n".join(m.to_line() for m in S)
        else:
            text = "\n".join(m.binomial() for m in S)
        return res, text

    if cmd == "fiber":
        from .fiber import enumerate_fiber
        x = _read_network(args.input, args.n)
        A = build_design_matrix(x.n, args.variant)
        F = enumerate_fiber(A, sufficient_statistic(A, x))
        return {"t": list(F.t), "size": F.size, "members": [y.to_text() for y in F.members]}, \
            F.to_text().rstrip("\n")

    if cmd == "gof":
        from .fiber import exact_alpha, walk_gof
        x = _read_network(args.input, args.n)
        if args.exact:
            a = exact_alpha(x, args.stat, args.variant, strict=not args.geq)
            return {"alpha": _frac(a), "alpha_float": float(a)}, f"alpha = {a}"
        from .moves import generate_move_set
        S = generate_move_set(x.n, args.variant, args.depth)
        r = walk_gof(x, S, args.K, seed=args.seed, stat=args.stat, variant=args.variant,
                     strict=not args.geq, burn_in=args.burn_in, thin=args.thin)
        return r.to_dict(), (f"alpha_hat = {r.alpha_hat:.6f} ({r.exceed_count}/{r.steps}), "
                             f"acceptance {r.acceptance_rate:.4f}, "
                             f"{r.distinct_states_visited} states")

    if cmd == "mle":
        from .geometry.cone import interior_status
        from .inference import fit_mle
        x = _read_network(args.input, args.n)
        A = build_design_matrix(x.n, args.variant)
        t = sufficient_statistic(A, x)
        if args.exists_only:
            st = interior_status(A, t)
            return {"exists": st == "interior", "status": st}, f"exists = {st == 'interior'}"
        r = fit_mle(A, t, tol=args.tol, max_iter=args.max_iter, method=args.method)
        lines = [f"exists = {r.exists}", f"residual = {r.moment_residual:.3g}",
                 f"iterations = {r.iterations}",
                 "p_hat = " + " ".join(f"{v:.6g}" for v in r.p_hat)]
        return r.to_dict(), "\n".join(lines)

    if cmd == "cone":
        from .geometry import cone as G
        if args.what == "zero-patterns":
            pats = G.zero_pattern_facets(args.n)
            res = [{"kind": z.kind, "zeros": [[i + 1, j + 1] for i, j in z.zeros]} for z in pats]
            text = "\n\n".join(f"[{z.kind}]\n{z.render(args.n)}" for z in pats)
            return res, text
        A = build_design_matrix(args.n, args.variant)
        if args.what == "dim":
            d = G.cone_dim(A)
            return {"rank": d, "projective_dim": d - 1, "rows": A.shape[0]}, \
                f"rank {d}, projective dim {d - 1}, rows {A.shape[0]}"
        desc = G.cone_facets(A, max_columns=None if args.long_running else G.DEFAULT_MAX_COLUMNS)
        res = {"rank": desc.dim, "n_facets": len(desc.facets), "facets": desc.facets}
        return res, f"{len(desc.facets)} facets, rank {desc.dim}"

    if cmd == "hull":
        from .geometry.cone import hull_of_marginals
        A = build_design_matrix(args.n, args.variant)
        pts = np.unique(all_statistics(A), axis=0).tolist()
        H = hull_of_marginals(pts)
        return H.to_dict(), f"{len(H.points)} points, {len(H.vertices)} vertices, " \
                            f"{len(H.facets)} facets, dim {H.dim}"

    if cmd == "census":
        from .census import run_census
        r = run_census(args.n, args.variant, detail=args.detail,
                       classify=True if args.classify else None,
                       workers=args.threads or _default_threads(), checkpoint=args.checkpoint)
        res = r.to_dict(with_runtime=False)
        text = (f"networks {r.networks_total}, distinct statistics {r.distinct_statistics}, "
                f"interior {r.interior_statistics}, networks with MLE {r.networks_with_mle}")
        args._runtime = r.runtime
        return res, text

    if cmd == "connectivity":
        from .census import verify_connectivity_census
        r = verify_connectivity_census(args.n, args.variant, args.depth, not args.no_escalate)
        text = f"minimal connecting depth: {r.minimal_depth}; per depth: {r.per_depth}"
        return r.to_dict(), text
    raise AssertionError(cmd)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2
    config = {k: v for k, v in vars(args).items() if not k.startswith("_")}
    t0 = time.time()
    try:
        result, text = run(args)
    except (CapacityError, ConvergenceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (argparse.ArgumentTypeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    meta = {"version": __version__, "config": config, "seed": args.seed,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
            "elapsed_seconds": round(time.time() - t0, 3)}
    if hasattr(args, "_runtime"):
        meta["census_runtime_seconds"] = round(args._runtime, 3)
    if args.json:
        out = json.dumps({"metadata": meta, "result": result}, sort_keys=True)
    else:
        header = f"# p1stats {__version__} " + " ".join(
            f"{k}={v}" for k, v in sorted(config.items()) if v is not None and v is not False)
        out = header + "\n" + text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0


def main_exit() -> None:
    sys.exit(main())
