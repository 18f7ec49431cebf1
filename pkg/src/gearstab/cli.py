"""Command line front end for stability analysis and stiff integration.

Subcommands: region, delta, intersections, integrate, ratio.  All data goes
to a file or standard output; diagnostics go to standard error.  Exit codes:
0 success, 2 I/O, 3 solver failure, 4 domain precondition, 64 usage,
65 parse error.
"""
from __future__ import annotations

import argparse
import contextlib
import re
import sys

import numpy as np

from . import linalg, stability
from .integrate import SolverConfig, Status, integrate_adaptive, integrate_fixed, problem_library
from .methods import Family, adams_moulton_coefficients, bdf_coefficients
from .svg import default_plot_spec, locus_svg

EXIT_OK = 0
EXIT_IO = 2
EXIT_SOLVER = 3
EXIT_DOMAIN = 4
EXIT_USAGE = 64
EXIT_PARSE = 65


class UsageError(Exception):
    pass


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse parser whose errors surface as UsageError (exit 64).

    The negative-number matcher is widened so values like ``-1e6`` pass
    through as option arguments instead of being mistaken for flags.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(
            r"^-\d+$|^-\d*\.\d+([eE][-+]?\d+)?$|^-\d+(\.\d*)?[eE][-+]?\d+$")

    def error(self, message):
        raise UsageError(message)


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _resolve_method(family: str, order: int):
    if family == "bdf":
        if not 1 <= order <= 7:
            raise UsageError(f"BDF order must be in 1..7, got {order}")
        return bdf_coefficients(order)
    if not 1 <= order <= 6:
        raise UsageError(f"Adams-Moulton order must be in 1..6, got {order}")
    return adams_moulton_coefficients(order - 1)


def _locus_for(args):
    method = _resolve_method(args.family, args.order)
    if args.samples < 4:
        raise UsageError("--samples must be at least 4")
    if args.samples >= 16:
        return method, stability.boundary_locus(method, args.samples)
    # Coarser sampling than the library minimum is still useful on the
    # command line (quick tabulation); evaluate the curve directly.
    thetas = np.linspace(0.0, 2.0 * np.pi, args.samples + 1)
    sigmas = stability.boundary_points(method, thetas)
    locus = stability.StabilityLocus(
        method_order=method.order, thetas=thetas, sigmas=sigmas,
        closed=bool(abs(sigmas[0] - sigmas[-1]) < 1e-12), method=method)
    return method, locus


def cmd_region(args) -> int:
    method, locus = _locus_for(args)
    if args.format == "csv":
        with _open_out(args.out) as fh:
            fh.write("theta,re,im\n")
            for theta, sigma in zip(locus.thetas, locus.sigmas):
                fh.write(f"{theta:.12g},{sigma.real:.12g},{sigma.imag:.12g}\n")
        return EXIT_OK

    dashed = None
    if args.family == "bdf" and 3 <= args.order <= 6:
        dashed = stability.stiff_stability_abscissa(method)
    spec = default_plot_spec(locus.sigmas, dashed_vertical_at=dashed)
    title = f"{args.family} order {args.order} boundary locus"
    with _open_out(args.out) as fh:
        fh.write(locus_svg(locus.sigmas, spec, title=title))
    if args.family == "bdf" and args.order == 7:
        report_locus = locus if args.samples >= 8192 else stability.boundary_locus(method, 8192)
        points = stability.find_self_intersections(report_locus)
        print(f"self-intersections of the BDF7 locus ({len(points)}):", file=sys.stderr)
        for p in points:
            print(f"  {p.real:.6g} {p.imag:+.6g}j", file=sys.stderr)
    return EXIT_OK


def cmd_delta(args) -> int:
    if args.order == 7:
        raise UsageError("order 7 has no stiff-stability abscissa: "
                         "the BDF7 locus self-intersects and the method is not stiffly stable")
    if not 1 <= args.order <= 6:
        raise UsageError(f"--order must be in 1..6, got {args.order}")
    delta = stability.stiff_stability_abscissa(bdf_coefficients(args.order))
    if abs(delta) < 1e-9:
        delta = 0.0
    print(f"{args.order},{delta:.6g}")
    return EXIT_OK


def cmd_intersections(args) -> int:
    if not 1 <= args.order <= 7:
        raise UsageError(f"--order must be in 1..7, got {args.order}")
    if args.samples < 1024:
        raise UsageError("--samples must be at least 1024 for intersection detection")
    locus = stability.boundary_locus(bdf_coefficients(args.order), args.samples)
    points = stability.find_self_intersections(locus)
    with _open_out(args.out) as fh:
        fh.write("re,im\n")
        for p in points:
            fh.write(f"{p.real:.12g},{p.imag:.12g}\n")
    return EXIT_OK


def _parse_vector(text):
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"could not parse vector {text!r}: {exc}") from exc


def _read_matrix_file(path):
    """Plain-text matrix: first line n, then n rows of n whitespace-separated reals."""
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty matrix file")
    try:
        n = int(lines[0].strip())
    except ValueError as exc:
        raise ParseError(f"first line must be the dimension, got {lines[0]!r}") from exc
    if n < 1:
        raise ParseError(f"dimension must be positive, got {n}")
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} rows after the dimension line, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        try:
            row = [float(tok) for tok in ln.split()]
        except ValueError as exc:
            raise ParseError(f"bad matrix row {ln!r}") from exc
        if len(row) != n:
            raise ParseError(f"row {ln!r} has {len(row)} entries, expected {n}")
        rows.append(row)
    return np.array(rows)


def _build_problem(args):
    params = {"x0": args.x0, "x_end": args.x_end}
    if args.y0 is not None:
        params["y0"] = _parse_vector(args.y0)
    if args.problem == "dahlquist":
        if args.lam is None:
            raise UsageError("--lambda is required for the dahlquist problem")
        params["lam"] = args.lam
    elif args.problem == "van_der_pol":
        if args.mu is None:
            raise UsageError("--mu is required for the van_der_pol problem")
        params["mu"] = args.mu
    else:
        if args.matrix is None:
            raise UsageError("--matrix is required for the linear_system problem")
        params["A"] = _read_matrix_file(args.matrix)
        if "y0" in params:
            params["y0"] = np.asarray(params["y0"])
    try:
        return problem_library(args.problem, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write_trace(fh, trace, dim):
    names = ",".join(f"y{i + 1}" for i in range(dim))
    fh.write(f"x,{names},h,order,newton_iters\n")
    for x, y, h, order, iters in zip(trace.xs, trace.ys, trace.hs,
                                     trace.orders, trace.newton_iters):
        ys = ",".join(f"{float(np.real(v)):.12g}" for v in np.atleast_1d(y))
        fh.write(f"{x:.12g},{ys},{h:.12g},{order},{iters}\n")


def cmd_integrate(args) -> int:
    if args.adaptive and args.h is not None:
        raise UsageError("--adaptive and --h are mutually exclusive")
    if not args.adaptive and args.h is None:
        raise UsageError("fixed-step integration requires --h")
    if args.adaptive and args.method != "bdf":
        raise UsageError("--adaptive supports only the bdf method")
    problem = _build_problem(args)

    if args.adaptive:
        config = SolverConfig(rtol=args.rtol, atol=args.atol, h_init=args.h_init,
                              max_order=args.max_order)
        trace = integrate_adaptive(problem, config)
    else:
        family = {"bdf": Family.BDF, "adams-moulton": Family.ADAMS_MOULTON}.get(
            args.method, args.method)
        trace = integrate_fixed(problem, family, args.order, args.h)

    with _open_out(args.out) as fh:
        _write_trace(fh, trace, problem.dimension)

    y_final = np.atleast_1d(trace.ys[-1])
    print(f"status: {trace.status.value}", file=sys.stderr)
    print(f"steps: {len(trace.xs) - 1}  rejections: {trace.rejections}", file=sys.stderr)
    print(f"final x = {trace.xs[-1]:.12g}  |y| = {np.abs(y_final).max():.6g}", file=sys.stderr)
    if problem.exact is not None and trace.status is Status.COMPLETED:
        err = np.abs(y_final - np.real(np.atleast_1d(problem.exact(trace.xs[-1])))).max()
        print(f"final error vs exact solution: {err:.6g}", file=sys.stderr)
    return EXIT_OK if trace.status is Status.COMPLETED else EXIT_SOLVER


def cmd_ratio(args) -> int:
    A = _read_matrix_file(args.matrix_file)
    lams = linalg.eigenvalues(A)
    for lam in lams:
        if lam.real >= 0:
            print(f"spectrum is not asymptotically stable: eigenvalue "
                  f"{lam.real:.12g}{lam.imag:+.12g}j has Re >= 0", file=sys.stderr)
            return EXIT_DOMAIN
    ratio = stability.stiffness_ratio(lams)
    for lam in lams:
        print(f"{lam.real:.12g},{lam.imag:.12g}")
    print(f"stiffness_ratio,{ratio:.12g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gearstab",
                     description="Stability regions and stiff integration "
                                 "for BDF and Adams-Moulton methods.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("region", help="boundary locus of the stability region")
    p.add_argument("--family", choices=["bdf", "adams-moulton"], default="bdf")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("delta", help="stiff-stability abscissa of a BDF method")
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("intersections", help="self-intersections of a BDF boundary locus")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--samples", type=int, default=8192)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_intersections)

    p = sub.add_parser("integrate", help="integrate a library problem")
    p.add_argument("--problem", choices=["dahlquist", "linear_system", "van_der_pol"],
                   required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--matrix", default=None, help="matrix file for linear_system")
    p.add_argument("--y0", default=None, help="comma-separated initial state")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--x-end", type=float, default=1.0)
    p.add_argument("--method", choices=["euler", "rk4", "bdf", "adams-moulton"],
                   default="bdf")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--rtol", type=float, default=1e-6)
    p.add_argument("--atol", type=float, default=1e-9)
    p.add_argument("--h-init", type=float, default=1e-6)
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("ratio", help="stiffness ratio of a linear system")
    p.add_argument("matrix_file")
    p.set_defaults(func=cmd_ratio)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            raise UsageError("a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        print(f"gearstab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"gearstab: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"gearstab: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (stability.DegenerateDenominatorError, stability.DegreeCollapseError,
            stability.NotAsymptoticallyStableError, stability.DegenerateSpectrumError,
            linalg.SingularMatrixError, linalg.ClusteredEigenvaluesError,
            ValueError) as exc:
        print(f"gearstab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
