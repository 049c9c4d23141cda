"""Command-line front end.

Every subcommand writes one report to stdout, as JSON (default) or text.
Exit status is 0 whenever a result was computed, including statistical
outcomes such as an unbounded likelihood, and 2 for unreadable input,
invalid flags or dimension mismatches.

Flag defaults can be overridden by environment variables named after the
flag with an ``ORBITMLE_`` prefix, e.g. ``ORBITMLE_MAX_ITER=500``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Callable, Dict, List, Optional

import numpy as np

from . import matrix_normal as mn
from . import null_cone as nc
from . import tdag
from .io import read_graph, read_sample_matrix, read_sample_tuple

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_INPUT = 2


class UsageError(ValueError):
    pass


def _env(name: str, conv: Callable, default):
    raw = os.environ.get("ORBITMLE_" + name)
    if raw is None:
        return default
    try:
        return conv(raw)
    except ValueError:
        raise UsageError(f"invalid value {raw!r} for environment variable ORBITMLE_{name}") from None


def _env_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(raw)


def _env_format(raw: str) -> str:
    if raw not in ("json", "text"):
        raise ValueError(raw)
    return raw


def _env_seed(raw: str):
    return None if raw.lower() == "none" else int(raw)


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {s}")
    return v


def _nonneg_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be a nonnegative integer, got {s}")
    return v


def _positive_float(s: str) -> float:
    v = float(s)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    cfg = mn.FlipFlopConfig()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=_env("FORMAT", _env_format, "json"))

    flip = argparse.ArgumentParser(add_help=False)
    flip.add_argument("--samples", required=True, help="JSON sample tuple")
    flip.add_argument("--tol", type=_positive_float, default=_env("TOL", float, cfg.tol_residual),
                      help="moment residual at which scaling stops")
    flip.add_argument("--max-iter", type=_positive_int, default=_env("MAX_ITER", int, cfg.max_iter))

    rand = argparse.ArgumentParser(add_help=False)
    rand.add_argument("--trials", type=_positive_int, default=_env("TRIALS", int, nc.DEFAULT_TRIALS))
    rand.add_argument("--entry-bound", type=int, default=_env("ENTRY_BOUND", int, nc.DEFAULT_ENTRY_BOUND))
    rand.add_argument("--seed", type=int, default=_env("SEED", _env_seed, nc.DEFAULT_SEED))

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("--graph", required=True, help="edge list or JSON graph")

    exact = argparse.ArgumentParser(add_help=False)
    exact.add_argument("--samples", required=True, help="CSV sample matrix, one row per node")
    exact.add_argument("--exact", action=argparse.BooleanOptionalAction,
                       default=_env("EXACT", _env_bool, False),
                       help="rational arithmetic for the rank tests")

    p = argparse.ArgumentParser(prog="orbitmle", description="MLE for Gaussian group models")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("flipflop", parents=[common, flip], help="run flip-flop scaling")
    sub.add_parser("classify", parents=[common, flip], help="stability classification")
    m = sub.add_parser("moment", parents=[common], help="moment map residual")
    m.add_argument("--samples", required=True)
    s = sub.add_parser("stabdim", parents=[common], help="stabilizer Lie algebra dimension")
    s.add_argument("--samples", required=True)
    c = sub.add_parser("cp-rank", parents=[common, rand], help="randomized cut-and-paste rank")
    for name in ("a", "b", "c", "d"):
        c.add_argument(f"--{name}", type=_nonneg_int, required=True)
    c.add_argument("--n", type=_nonneg_int, required=True)
    t = sub.add_parser("mlt", parents=[common, rand], help="threshold bounds for one shape")
    t.add_argument("--m1", type=_positive_int, required=True)
    t.add_argument("--m2", type=_positive_int, required=True)
    tt = sub.add_parser("mlt-table", parents=[common, rand], help="threshold table")
    tt.add_argument("--max", type=int, required=True, dest="max_m1", help="largest m1")
    sub.add_parser("tdag-check", parents=[common, graph, exact], help="does the TDAG MLE exist")
    sub.add_parser("tdag-mle", parents=[common, graph, exact], help="compute the TDAG MLE")
    a = sub.add_parser("tdag-analyze", parents=[common, graph], help="threshold and colliders")
    a.add_argument("--n", type=_positive_int, default=None, help="sample size")
    return p


def _finite_or_none(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _finite_or_none(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_finite_or_none(v) for v in x]
    if isinstance(x, np.generic):
        return _finite_or_none(x.item())
    return x


def _flip_cfg(args) -> mn.FlipFlopConfig:
    return mn.FlipFlopConfig(max_iter=args.max_iter, tol_residual=args.tol)


def _check_rand(args) -> None:
    if args.entry_bound < 2:
        raise UsageError("--entry-bound must be at least 2")


def _cmd_flipflop(args):
    return mn.flip_flop(read_sample_tuple(args.samples), _flip_cfg(args)).to_dict()


def _cmd_classify(args):
    return mn.classify(read_sample_tuple(args.samples), _flip_cfg(args)).to_dict()


def _cmd_moment(args):
    Y = read_sample_tuple(args.samples)
    res, c1, c2 = mn.moment_residual(Y)
    return {"moment_residual": res, "c1": c1, "c2": c2, "norm_sq": float(np.sum(Y * Y))}


def _cmd_stabdim(args):
    return {"stabilizer_dim": mn.stabilizer_lie_dim(read_sample_tuple(args.samples))}


def _cmd_cp_rank(args):
    _check_rand(args)
    q = nc.CpRankQuery(args.a, args.b, args.c, args.d, args.n, args.trials, args.entry_bound, args.seed)
    return {
        "a": q.a, "b": q.b, "c": q.c, "d": q.d, "n": q.n,
        "cp_rank": nc.cp_rank(q),
        "max_rank": min(q.a * q.b, q.c * q.d),
        "trials": q.trials, "entry_bound": q.entry_bound, "seed": q.seed,
    }


def _cmd_mlt(args):
    _check_rand(args)
    b = nc.mlt_bounds(args.m1, args.m2, args.trials, args.entry_bound, args.seed)
    out = b.to_dict()
    out["fills"] = [
        {"n": n, "fills": nc.null_cone_fills(b.m1, b.m2, n, args.trials, args.entry_bound, args.seed)}
        for n in range(b.lower_L, b.alpha_upper + 1)
    ]
    return out


def _cmd_mlt_table(args):
    _check_rand(args)
    if args.max_m1 < 2:
        raise UsageError("--max must be at least 2")
    return nc.mlt_table(args.max_m1, args.trials, args.entry_bound, args.seed)


def _load_tdag(args):
    g = read_graph(args.graph)
    Y = read_sample_matrix(args.samples, exact=args.exact)
    n_rows = len(Y)
    if n_rows != g.m:
        raise UsageError(
            f"sample matrix has {n_rows} rows but the graph has {g.m} nodes"
        )
    return g, Y


def _cmd_tdag_check(args):
    g, Y = _load_tdag(args)
    res = tdag.mle_exists(g, Y, exact=args.exact)
    return {"nodes": list(g.nodes), "status": res.status.value, "witness": res.witness, "exact": args.exact}


def _cmd_tdag_mle(args):
    g, Y = _load_tdag(args)
    res = tdag.mle_exists(g, Y, exact=args.exact)
    out = {"nodes": list(g.nodes), "status": res.status.value, "witness": res.witness,
           "Lambda": None, "Omega": None, "Psi": None}
    if res.exists:
        out.update(tdag.mle_tdag(g, Y, exact=args.exact).to_dict())
    return out


def _cmd_tdag_analyze(args):
    g = read_graph(args.graph)
    out = {
        "nodes": list(g.nodes),
        "transitive": tdag.is_transitive(g),
        "mlt": None,
        "colliders": [list(t) for t in tdag.unshielded_colliders(g)],
        "zariski_closed": None,
        "n": args.n,
    }
    if out["transitive"]:
        out["mlt"] = tdag.mlt_tdag(g)
        n = out["mlt"] if args.n is None else args.n
        out["zariski_closed"] = tdag.null_cone_zariski_closed(g, n)
    return out


COMMANDS: Dict[str, Callable] = {
    "flipflop": _cmd_flipflop,
    "classify": _cmd_classify,
    "moment": _cmd_moment,
    "stabdim": _cmd_stabdim,
    "cp-rank": _cmd_cp_rank,
    "mlt": _cmd_mlt,
    "mlt-table": _cmd_mlt_table,
    "tdag-check": _cmd_tdag_check,
    "tdag-mle": _cmd_tdag_mle,
    "tdag-analyze": _cmd_tdag_analyze,
}


_MATRIX_KEYS = {"psi1", "psi2", "Lambda", "Psi"}


def _fmt_value(v, key=None) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if key in _MATRIX_KEYS and isinstance(v, list):
        return "\n" + "\n".join("    " + "  ".join(_fmt_value(x) for x in r) for r in v)
    if isinstance(v, list):
        return "[" + ", ".join(_fmt_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "\n" + "\n".join(f"  {k}: {_fmt_value(x, k)}" for k, x in v.items())
    return "null" if v is None else str(v)


def _render_text(report: dict) -> str:
    lines = []
    for k, v in report.items():
        if k == "trace":
            lines.append(f"trace: {len(v)} iterations")
            continue
        lines.append(f"{k}: {_fmt_value(v, k)}")
    return "\n".join(line.rstrip() for line in "\n".join(lines).splitlines())


def _emit(command: str, result, fmt: str, out) -> None:
    if command == "mlt-table":
        if fmt == "text":
            out.write(nc.format_table(result) + "\n")
        else:
            for row in result:
                out.write(json.dumps(row.to_dict()) + "\n")
        return
    report = _finite_or_none(result)
    if fmt == "text":
        out.write(_render_text(report) + "\n")
    else:
        out.write(json.dumps(report, indent=2, allow_nan=False) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit status."""
    try:
        parser = build_parser()
    except UsageError as exc:
        print(f"orbitmle: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = COMMANDS[args.command](args)
    except ValueError as exc:
        # unreadable input, bad flags, dimension mismatches, non-transitive graphs
        print(f"orbitmle: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(args.command, result, args.format, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
