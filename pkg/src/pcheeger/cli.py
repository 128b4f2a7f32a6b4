"""Command line interface.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success, 2 invalid
input, 3 non-convergence (partial results are still emitted), 4 structure
violation (including a failed verify). JSON numbers carry 17 significant
digits so every double round-trips losslessly; reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .cheeger import ENUMERATION_LIMIT, cheeger_constant
from .continuation import SweepReport, default_schedule, extract_and_verify, sweep
from .errors import BracketFailureError, NoConvergenceError, StructureViolationError
from .fig1 import build_fig1, reduced_eigenpair, solve_xq, xhat_closed_form
from .graph import function_from_json_dict, load_graph_json
from .one_laplacian import decompose_limit, structure_report, verify_lambda11_equals_h
from .spectral import SolverOptions, eigen_residual, first_eigenpair

__all__ = ["main", "dumps"]


# --- serialization ----------------------------------------------------------


def _float_text(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    return "%.17g" % x


def dumps(obj, _depth: int = 0) -> str:
    """JSON text with floats at 17 significant digits, keys in insertion
    order, two-space indent. Covers the plain containers our reports use."""
    pad = "  " * _depth
    inner = "  " * (_depth + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_text(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f"{inner}{json.dumps(str(k))}: {dumps(v, _depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{inner}{dumps(v, _depth + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _sweep_csv(report: SweepReport) -> str:
    omega = report.limit_estimate.domain.omega
    lines = ["p,lambda,residual," + ",".join(omega)]
    for rec in report.records:
        cells = [_float_text(rec.p), _float_text(rec.lam), _float_text(rec.residual)]
        cells += [_float_text(float(x)) for x in rec.u.values]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _print_json(obj):
    sys.stdout.write(dumps(obj) + "\n")


def _diag(args, msg: str):
    if not args.quiet:
        print(msg, file=sys.stderr)


def _load_function(args, d):
    with open(args.function) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(
                f"{args.function}: invalid JSON at line {exc.lineno} column {exc.colno}"
            ) from None
    return function_from_json_dict(d, data)


# --- subcommands ------------------------------------------------------------


def cmd_cheeger(args) -> int:
    d = load_graph_json(args.graph)
    report = cheeger_constant(d, limit=args.limit)
    _print_json(report.to_json_dict())
    return 0


def cmd_eigen(args) -> int:
    d = load_graph_json(args.graph)
    guess = _load_function(args, d) if args.function else None
    opts = SolverOptions(
        tolerance=args.tol, max_iterations=args.max_iter, initial_guess=guess
    )
    try:
        pair = first_eigenpair(d, args.p, opts)
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.eigenpair is not None:
            _print_json(exc.eigenpair.to_json_dict())
        return 3
    _diag(args, f"converged in {pair.iterations} iterations, residual {pair.residual:.3e}")
    _print_json(pair.to_json_dict())
    return 0


def _emit_sweep(args, report: SweepReport):
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(_sweep_csv(report))
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(dumps(report.to_json_dict()) + "\n")
    if args.format == "json":
        _print_json(report.to_json_dict())
    else:
        sys.stdout.write(_sweep_csv(report))


def cmd_sweep(args) -> int:
    d = load_graph_json(args.graph)
    schedule = default_schedule(args.steps)
    opts = SolverOptions(tolerance=args.tol, max_iterations=args.max_iter)
    progress = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    try:
        report = sweep(d, schedule, opts, progress=progress)
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report is not None and exc.report.records:
            _emit_sweep(args, exc.report)
        return 3
    _emit_sweep(args, report)
    return 0


def cmd_decompose(args) -> int:
    d = load_graph_json(args.graph)
    u = _load_function(args, d)
    dec = decompose_limit(d, u, delta=args.delta)
    _print_json(dec.to_json_dict())
    return 0


def cmd_verify(args) -> int:
    d = load_graph_json(args.graph)
    u = _load_function(args, d)
    rows = structure_report(d, u, delta=args.delta)
    if args.samples > 0:
        ok = verify_lambda11_equals_h(d, samples=args.samples, seed=args.seed)
        rows.append(
            (
                "lambda11_equals_h",
                ok,
                f"exhaustive indicators plus {args.samples} random samples, seed {args.seed}",
            )
        )
    passed = all(ok for _, ok, _ in rows)
    _print_json(
        {
            "passed": passed,
            "checks": [{"name": n, "passed": ok, "detail": det} for n, ok, det in rows],
        }
    )
    return 0 if passed else 4


def cmd_example_fig1(args) -> int:
    d = build_fig1()
    xhat = xhat_closed_form()
    if args.sweep is None:
        red = solve_xq(args.p - 1.0)
        lam, v = reduced_eigenpair(args.p, d)
        u = v.normalized(args.p)
        _print_json(
            {
                "p": args.p,
                "q": red.q,
                "x_q": red.x,
                "a": red.a,
                "b": red.b,
                "a2b": red.a2b,
                "f_at_root": red.f_value,
                "lambda": lam,
                "xhat": xhat,
                "residual": eigen_residual(d, lam, v, args.p),
                "v": {"values": v.as_dict()},
                "u_normalized": {"values": u.as_dict()},
            }
        )
        return 0

    progress = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    try:
        report = sweep(d, default_schedule(args.sweep), progress=progress)
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    _, v = reduced_eigenpair(report.schedule[-1], d)
    target = v.values / float(np.sum(d.mu_omega * v.values))  # 1-norm scale
    gap = float(np.max(np.abs(report.limit_estimate.values - target)))
    try:
        dec = extract_and_verify(report)
    except StructureViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    _print_json(
        {
            "xhat": xhat,
            "limit_vs_reduced": gap,
            "decomposition": dec.to_json_dict(),
            "sweep": report.to_json_dict(),
        }
    )
    return 0


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcheeger",
        description="First eigenpairs of the graph p-Laplacian, Cheeger cuts, "
        "and the p -> 1 limit.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--quiet", action="store_true", help="suppress progress output on stderr"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cheeger", parents=[common], help="exact Cheeger constant and all cuts")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--limit", type=int, default=ENUMERATION_LIMIT, help="max |omega| to enumerate")
    p.set_defaults(func=cmd_cheeger)

    p = sub.add_parser("eigen", parents=[common], help="first eigenpair at one p")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--p", type=float, required=True, help="exponent, > 1")
    p.add_argument("--tol", type=float, default=None, help="residual tolerance")
    p.add_argument("--max-iter", type=int, default=200_000, dest="max_iter")
    p.add_argument(
        "--warm-start",
        dest="function",
        default=None,
        help="function JSON to start from (eigen output files work as-is)",
    )
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("sweep", parents=[common], help="warm-started p -> 1 continuation")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--steps", type=int, default=12, help="schedule length: p_k = 1 + 2^-k")
    p.add_argument("--tol", type=float, default=None, help="per-solve residual tolerance")
    p.add_argument("--max-iter", type=int, default=200_000, dest="max_iter")
    p.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="stdout format (default csv)"
    )
    p.add_argument("--csv", default=None, help="also write the CSV to this file")
    p.add_argument("--json", default=None, help="also write the JSON report to this file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("decompose", parents=[common], help="stacked-indicator decomposition")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--function", required=True, help="function JSON file")
    p.add_argument("--delta", type=float, default=1e-6, help="relative clustering tolerance")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", parents=[common], help="limit-structure checks for a function")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--function", required=True, help="function JSON file")
    p.add_argument("--delta", type=float, default=1e-3, help="tolerance for the checks")
    p.add_argument(
        "--samples", type=int, default=0, help="also sample-check lambda_{1,1} = h"
    )
    p.add_argument("--seed", type=int, default=0, help="seed for --samples")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example-fig1", parents=[common], help="the worked example")
    p.add_argument("--p", type=float, default=2.0, help="exponent for the reduced eigenpair")
    p.add_argument("--sweep", type=int, default=None, help="run a sweep of this many steps instead")
    p.set_defaults(func=cmd_example_fig1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, BracketFailureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except StructureViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
