"""Command-line front end.

Usage::

    recenter cp --p 3
    recenter table --p-min 1.1 --p-max 8 --steps 100
    recenter verify --p 3 --trials 10000 --seed 42
    recenter cf --family huber:1 --grid 64 --refine 6
    recenter rosenthal --p 3 --coords coords.json
    recenter rosenthal --simulate sim.json

Exit codes: 0 success, 1 verification failure, 2 domain error,
3 non-convergence. Machine formats print floats with 17 significant
digits; text output uses 6.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .constants import DEFAULT_TOL, asymptotic_Cp, compute_Cp, log_asymptotic_Cp
from .distributions import DiscreteDistribution
from .errors import ConvergenceError, DegenerateInputError, DomainError
from .general import MomentFunction, estimate_cf
from .oracles import VIOLATION_TOL, central_moment_ratio, random_distribution_sweep
from .rosenthal import (
    MartingaleConstants,
    concentration_bound,
    load_coordinates,
    load_simulation_config,
    simulate_norm_of_sum,
)

FORMAT_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2, 3
TOL_ENV = "RECENTER_TOL"


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise DomainError(f"{TOL_ENV}={raw!r} is not a number")


# --- formatting ---------------------------------------------------------------


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.integer, np.floating)):
        return _num(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _text(x) -> str:
    if x is None:
        return "unset"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float):
        return format(x, ".6g")
    return str(x)


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, (list, tuple)) and obj and isinstance(obj[0], (dict, list, tuple)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, obj))
    return out


def _record(command, inputs, results, diagnostics):
    return {
        "format_version": FORMAT_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "diagnostics": diagnostics,
    }


def emit(record: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(dumps(record) + "\n")
        return
    rows = _flatten("", {k: record[k] for k in ("inputs", "results", "diagnostics")}, [])
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["field", "value"])
        for key, val in rows:
            if isinstance(val, (list, tuple)):
                val = " ".join(_num(v) if not isinstance(v, str) else v for v in val)
            elif not isinstance(val, str):
                val = _num(val)
            w.writerow([key, val])
        return
    out.write(f"# {record['command']} (format_version {record['format_version']})\n")
    for key, val in rows:
        if isinstance(val, (list, tuple)):
            val = ", ".join(_text(v) for v in val)
        out.write(f"{key} = {_text(val)}\n")


# --- commands -----------------------------------------------------------------


def _cp_results(sol):
    return {
        "C_p": sol.c_p,
        "log_C_p": sol.log_c_p,
        "b_p": sol.b_p,
        "t_bp": sol.t_bp,
    }


def cmd_cp(args) -> int:
    tol = args.tol if args.tol is not None else _default_tol()
    sol = compute_Cp(args.p, tol, allow_p1=args.allow_p1)
    record = _record(
        "cp",
        {"p": args.p, "tol": tol},
        _cp_results(sol),
        {
            "method": sol.method.value,
            "iterations": sol.iterations,
            "achieved_tolerance": sol.achieved_tolerance,
        },
    )
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["p", "C_p", "b_p", "t_bp", "achieved_tolerance", "iterations", "method"])
        w.writerow([_num(sol.p), _num(sol.c_p), _num(sol.b_p), _num(sol.t_bp),
                    _num(sol.achieved_tolerance), sol.iterations, sol.method.value])
    elif args.format == "text":
        print(f"C_p  = {_text(sol.c_p)}")
        print(f"b_p  = {_text(sol.b_p)}")
        print(f"t_bp = {_text(sol.t_bp)}")
        print(f"# p = {_text(sol.p)}, method {sol.method.value}, "
              f"tolerance {sol.achieved_tolerance:.1e}, {sol.iterations} iterations")
    else:
        emit(record, "json")
    return EXIT_OK


TABLE_COLUMNS = ["p", "C_p", "b_p", "t_bp", "naive_over_C_p", "sqrt_8ep", "achieved_tolerance"]


def table_grid(p_min, p_max, steps, log_spacing=False):
    if not (p_min > 1 and p_max >= p_min):
        raise DomainError("need 1 < p-min <= p-max")
    if steps < 1:
        raise DomainError("steps must be positive")
    grid = np.geomspace(p_min, p_max, steps) if log_spacing else np.linspace(p_min, p_max, steps)
    if p_min <= 2.0 <= p_max:
        # pin the node nearest 2 onto it so the C_2 = 1 minimum is always a row;
        # it moves by at most half a step, so the grid stays sorted
        grid[int(np.argmin(np.abs(grid - 2.0)))] = 2.0
    return [float(p) for p in grid]


def table_rows(ps, tol=DEFAULT_TOL):
    rows = []
    for p in ps:
        sol = compute_Cp(p, tol)
        log_impr = p * math.log(2.0) - sol.log_c_p
        rows.append({
            "p": p,
            "C_p": sol.c_p,
            "b_p": sol.b_p,
            "t_bp": sol.t_bp,
            "naive_over_C_p": math.exp(log_impr) if log_impr < 709 else math.inf,
            "sqrt_8ep": math.sqrt(8.0 * math.e * p),
            "achieved_tolerance": sol.achieved_tolerance,
        })
    return rows


def cmd_table(args) -> int:
    tol = args.tol if args.tol is not None else _default_tol()
    rows = table_rows(table_grid(args.p_min, args.p_max, args.steps, args.log_spacing), tol)
    if args.format == "json":
        emit(_record(
            "table",
            {"p_min": args.p_min, "p_max": args.p_max, "steps": args.steps,
             "log_spacing": args.log_spacing, "tol": tol},
            {"columns": TABLE_COLUMNS, "rows": [[r[c] for c in TABLE_COLUMNS] for r in rows]},
            {"rows": len(rows)},
        ), "json")
        return EXIT_OK
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for r in rows:
        w.writerow([_num(r[c]) for c in TABLE_COLUMNS])
    return EXIT_OK


def cmd_verify(args) -> int:
    sweep = random_distribution_sweep(
        args.p, args.trials, args.max_atoms, args.seed, include_extremal=args.include_extremal
    )
    results = {
        "C_p": sweep.c_p,
        "trials": sweep.trials,
        "violations": sweep.violations,
        "max_ratio": sweep.max_ratio,
        "worst": sweep.worst.to_dict()["atoms"],
    }
    failed = sweep.violations > 0
    if args.dist:
        d = DiscreteDistribution.load(args.dist)
        ratio = central_moment_ratio(d, args.p)
        ok = ratio <= sweep.c_p + VIOLATION_TOL
        results["file"] = {"path": args.dist, "ratio": ratio, "holds": ok}
        failed = failed or not ok
    emit(_record(
        "verify",
        {"p": args.p, "trials": args.trials, "max_atoms": args.max_atoms, "seed": args.seed,
         "include_extremal": args.include_extremal, "dist": args.dist},
        results,
        {"violation_tolerance": VIOLATION_TOL, "seed": args.seed, "verdict": "fail" if failed else "pass"},
    ), args.format)
    return EXIT_VERIFY if failed else EXIT_OK


def parse_family(spec: str, table_exponent: float = 2.0) -> MomentFunction:
    name, _, arg = spec.partition(":")
    try:
        if name == "power":
            return MomentFunction.power(float(arg))
        if name == "abs":
            return MomentFunction.absolute()
        if name == "huber":
            return MomentFunction.huber(float(arg))
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad family parameter in {spec!r}") from exc
    if name == "table":
        if not arg:
            raise DomainError("table family needs a file: table:FILE")
        return MomentFunction.load_table(arg, table_exponent)
    raise DomainError(f"unknown family {spec!r}; use power:P, abs, huber:D or table:FILE")


def cmd_cf(args) -> int:
    f = parse_family(args.family, args.table_exponent)
    est = estimate_cf(f, args.grid, args.refine, args.cap)
    a, b, t = est.argmax
    emit(_record(
        "cf",
        {"family": args.family, "grid": args.grid, "refine": args.refine, "cap": args.cap},
        {"lower_bound": est.lower_bound, "argmax": {"a": a, "b": b, "t": t}},
        {
            "converged": est.converged,
            "grid_spec": est.grid_spec,
            "refinement_history": list(est.history),
            "last_refinement_gain": est.history[-1] - est.history[-2] if len(est.history) > 1 else None,
        },
    ), args.format)
    return EXIT_OK


def _constants(args, p):
    if args.c1 is not None or args.c2 is not None:
        if args.c1 is None or args.c2 is None:
            raise DomainError("give both --c1 and --c2")
        return MartingaleConstants(p, args.c1, args.c2, args.constants_source or "")
    return MartingaleConstants.builtin(p)


def cmd_rosenthal(args) -> int:
    if bool(args.coords) == bool(args.simulate):
        raise DomainError("give exactly one of --coords FILE or --simulate CONFIG")
    if args.coords:
        if args.p is None:
            raise DomainError("--coords needs --p")
        mc = _constants(args, args.p)
        coords = load_coordinates(args.coords)
        bound = concentration_bound(mc, coords)
        sol = compute_Cp(mc.p)
        emit(_record(
            "rosenthal",
            {"p": args.p, "coords": args.coords, "coordinates": len(coords)},
            {"bound": bound, "C_p": sol.c_p, "c1": mc.c1, "c2": mc.c2},
            {"constants_source": mc.source, "C_p_achieved_tolerance": sol.achieved_tolerance},
        ), args.format)
        return EXIT_OK

    cfg = load_simulation_config(args.simulate)
    if args.p is not None and args.p != cfg["p"]:
        raise DomainError(f"--p {args.p:g} disagrees with the config p = {cfg['p']:g}")
    mc = _constants(args, cfg["p"])
    res = simulate_norm_of_sum(constants=mc, **cfg)
    sound = res.slack >= -3.0 * res.se
    emit(_record(
        "rosenthal",
        {k: v for k, v in cfg.items() if k not in ("x_centers", "y_centers")}
        | {"simulate": args.simulate, "centers_given": cfg["x_centers"] is not None},
        {
            "empirical_central_p_moment": res.empirical_central_p_moment,
            "bound": res.bound,
            "slack": res.slack,
            "bound_over_empirical": res.ratio,
        },
        {
            "standard_error": res.se,
            "moments_analytic": res.moments_analytic,
            "seed": res.seed,
            "constants_source": mc.source,
            "verdict": "pass" if sound else "fail",
        },
    ), args.format)
    return EXIT_OK if sound else EXIT_VERIFY


# --- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="recenter", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = {"choices": ["json", "csv", "text"], "default": "json"}

    p = sub.add_parser("cp", help="optimal constant C_p with b_p and t_{b_p}")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--tol", type=float, default=None, help=f"relative tolerance (env {TOL_ENV})")
    p.add_argument("--format", **fmt)
    p.add_argument("--allow-p1", action="store_true", help="accept p = 1 (C_1 = 2)")
    p.set_defaults(func=cmd_cp)

    p = sub.add_parser(
        "table",
        help="CSV table of C_p, b_p, t_bp and 2^p / C_p",
        description="The grid node nearest p = 2 is moved onto 2 when the range contains it.",
    )
    p.add_argument("--p-min", type=float, required=True)
    p.add_argument("--p-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--log-spacing", action="store_true")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="random-distribution sweep of the C_p inequality")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-atoms", type=int, default=8)
    p.add_argument("--include-extremal", action="store_true")
    p.add_argument("--dist", metavar="FILE", default=None, help="JSON distribution to check")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cf", help="lower bound on c_f for a moment function")
    p.add_argument("--family", required=True, help="power:P | abs | huber:D | table:FILE")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--refine", type=int, default=6)
    p.add_argument("--cap", type=float, default=10.0)
    p.add_argument("--table-exponent", type=float, default=2.0,
                   help="power-law exponent used outside a table's knot range")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("rosenthal", help="Rosenthal-type concentration bound")
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--coords", metavar="FILE", default=None)
    p.add_argument("--simulate", metavar="CONFIG", default=None)
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--c2", type=float, default=None)
    p.add_argument("--constants-source", default=None)
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_rosenthal)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, DegenerateInputError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
