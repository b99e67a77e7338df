"""Command-line interface.

Subcommands: ``fixed-rate`` (exponent at a rate, optional cost bound),
``fixed-slope`` (the three fixed-parameter schemes, routed by which of
--rho/--eta/--alpha/--rate are given), ``curve`` (parametric sweep to
CSV), and ``oracle`` (brute-force grid verification). Exit codes:
0 success, 1 invalid input or parameters, 2 the iteration stopped on
its budget without converging.
"""

from __future__ import annotations

import argparse
import math
import sys

from .core import ExponentError
from .fileio import (
    load_channel,
    oracle_payload,
    parse_grid_range,
    result_payload,
    save_curve_csv,
    save_result,
)
from .oracle import GridSpec, grid_min_exponent_self
from .solvers import (
    SolverConfig,
    solve_fixed_alpha_rho,
    solve_fixed_gradient,
    solve_fixed_rate,
    solve_fixed_rate_eta,
    sweep_curve,
)

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would sys.exit(2); route through exit code 1 instead
    def error(self, message):
        raise _UsageError(message)


def _add_common(sub):
    sub.add_argument("--channel", required=True, help="path to a channel JSON file")
    sub.add_argument("--out", default=None, help="write a JSON result file here")
    sub.add_argument("--family", choices=("A", "B"), default="A")
    sub.add_argument("--a", type=float, default=0.0, help="first family slot")
    sub.add_argument("--b", type=float, default=0.0, help="second family-A slot")
    sub.add_argument("--c", type=float, default=0.0, help="second family-B slot")
    sub.add_argument("--tol", type=float, default=1e-10)
    sub.add_argument("--max-iter", type=int, default=100000)
    sub.add_argument("--dual-tol", type=float, default=1e-10)


def _build_parser() -> _Parser:
    parser = _Parser(prog="exponent", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p_rate = subs.add_parser("fixed-rate", help="exponent at a fixed rate")
    _add_common(p_rate)
    p_rate.add_argument("--rate", type=float, required=True, help="rate in nats per channel use")
    p_rate.add_argument("--alpha", type=float, default=None, help="average cost bound")

    p_slope = subs.add_parser("fixed-slope", help="fixed-parameter schemes")
    _add_common(p_slope)
    p_slope.add_argument("--rho", type=float, default=None)
    p_slope.add_argument("--eta", type=float, default=None)
    p_slope.add_argument("--alpha", type=float, default=None)
    p_slope.add_argument("--rate", type=float, default=None)

    p_curve = subs.add_parser("curve", help="parametric exponent-rate curve as CSV")
    _add_common(p_curve)
    p_curve.add_argument("--rho-grid", required=True, help="lo:hi:step for the slope")
    p_curve.add_argument("--eta-grid", default=None, help="lo:hi:step for the cost multiplier")

    p_oracle = subs.add_parser("oracle", help="brute-force grid verification")
    p_oracle.add_argument("--channel", required=True)
    p_oracle.add_argument("--out", default=None)
    p_oracle.add_argument("--rate", type=float, required=True)
    p_oracle.add_argument("--alpha", type=float, default=None)
    p_oracle.add_argument("--resolution", type=int, required=True)

    return parser


def _print_report(report, warnings):
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    bits = report.value / math.log(2.0)
    print(f"value: {report.value:.12g} nats ({bits:.12g} bits)")
    state = "converged" if report.converged else "did not converge"
    print(f"{state} after {report.iterations} iterations")
    if report.dual is not None:
        print(f"dual point: rho={report.dual[0]:.12g} eta={report.dual[1]:.12g}")
    if report.duality_gap is not None:
        print(f"duality gap: {report.duality_gap:.3e}")


def _run_solver(args, scheme: str, command: str) -> int:
    channel, warnings = load_channel(args.channel)
    config = SolverConfig(
        scheme=scheme,
        family=args.family,
        a=args.a,
        b=args.b,
        c=args.c,
        rate=getattr(args, "rate", None),
        alpha=getattr(args, "alpha", None),
        rho=getattr(args, "rho", None),
        eta=getattr(args, "eta", None),
        tol=args.tol,
        max_iter=args.max_iter,
        dual_tol=args.dual_tol,
    )
    solver = {
        "fixed_rate": solve_fixed_rate,
        "fixed_gradient": solve_fixed_gradient,
        "fixed_alpha_rho": solve_fixed_alpha_rho,
        "fixed_rate_eta": solve_fixed_rate_eta,
    }[scheme]
    report = solver(channel, config)
    _print_report(report, warnings)
    if args.out:
        save_result(args.out, result_payload(command, channel, report, warnings))
        print(f"wrote {args.out}", file=sys.stderr)
    return 0 if report.converged else 2


def _cmd_fixed_rate(args) -> int:
    return _run_solver(args, "fixed_rate", "fixed-rate")


def _cmd_fixed_slope(args) -> int:
    has_rho = args.rho is not None
    has_eta = args.eta is not None
    has_alpha = args.alpha is not None
    has_rate = args.rate is not None
    if has_rho and has_alpha and not has_rate and not has_eta:
        scheme = "fixed_alpha_rho"
    elif has_rho and not has_alpha and not has_rate:
        scheme = "fixed_gradient"
    elif has_eta and has_rate and not has_rho and not has_alpha:
        scheme = "fixed_rate_eta"
    else:
        raise _UsageError(
            "fixed-slope needs --rho [--eta], or --rho --alpha, or --eta --rate"
        )
    return _run_solver(args, scheme, "fixed-slope")


def _cmd_curve(args) -> int:
    channel, warnings = load_channel(args.channel)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    rhos = parse_grid_range(args.rho_grid)
    etas = parse_grid_range(args.eta_grid) if args.eta_grid else (0.0,)
    points = sweep_curve(
        channel,
        rho_values=rhos,
        eta_values=etas,
        family=args.family,
        a=args.a,
        b=args.b,
        c=args.c,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    if args.out:
        save_curve_csv(args.out, points)
        print(f"wrote {len(points)} points to {args.out}", file=sys.stderr)
    else:
        from .fileio import format_curve_csv

        sys.stdout.write(format_curve_csv(points))
    return 0


def _cmd_oracle(args) -> int:
    channel, warnings = load_channel(args.channel)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    grid = GridSpec(resolution=args.resolution)
    result = grid_min_exponent_self(channel, args.rate, args.alpha, grid)
    bits = result.value / math.log(2.0)
    print(f"value: {result.value:.12g} nats ({bits:.12g} bits)")
    print(f"accuracy bound: {result.accuracy_bound:.6g} ({result.evaluations} points)")
    if args.out:
        payload = oracle_payload(
            "oracle",
            channel,
            result,
            rate=args.rate,
            alpha=args.alpha,
            resolution=args.resolution,
            extra_warnings=warnings,
        )
        save_result(args.out, payload)
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "fixed-rate": _cmd_fixed_rate,
            "fixed-slope": _cmd_fixed_slope,
            "curve": _cmd_curve,
            "oracle": _cmd_oracle,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ExponentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
