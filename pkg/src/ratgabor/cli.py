"""Command line front end.

Exit codes: 0 success / pass / FrameLikely, 1 selftest failure, 2 bad flags or
precondition on the window, 3 truncation cannot be certified, 4 parameters
outside the domain (alpha*beta >= 1, point outside Q_{alpha,p}, ...),
10 NotFrame / certificate failed, 11 Inconclusive.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

from . import analysis, formats, gramian, selftest
from .errors import DomainError, ParityError, TailNotSummable
from .windows import Parity, window_from_string
from .zak import DEFAULT_TOL, ZakPoint, zak

log = logging.getLogger("ratgabor")

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_USAGE = 2
EXIT_TAIL = 3
EXIT_DOMAIN = 4
EXIT_FAIL = 10
EXIT_INCONCLUSIVE = 11

_VERDICT_EXIT = {
    analysis.Verdict.FRAME_LIKELY: EXIT_OK,
    analysis.Verdict.NOT_FRAME: EXIT_FAIL,
    analysis.Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def _window(text):
    try:
        return window_from_string(text)
    except (DomainError, OSError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _grid(text):
    try:
        nx, nw = (int(v) for v in text.lower().split("x"))
        return nx, nw
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 64x64, got {text!r}")


def _positive(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _write(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _write_svg(render, path):
    if path in (None, "-"):
        import io
        buf = io.BytesIO()
        render(buf, fmt="svg")
        sys.stdout.write(buf.getvalue().decode())
    else:
        render(path, fmt="svg")


def _fraction(args):
    if args.p < 1 or args.q < 1:
        raise DomainError("p and q must be positive integers")
    return gramian.ReducedFraction.reduce(args.p, args.q)


def cmd_zak(args) -> int:
    z = zak(args.window, args.alpha, ZakPoint(args.x, args.omega), args.tol)
    print(f"{z.real:.17g} {z.imag:.17g}")
    return EXIT_OK


def cmd_matrix(args) -> int:
    frac = _fraction(args)
    params = gramian.LatticeParams.from_alpha(args.alpha, frac)
    build = {"Q": gramian.build_Q, "A": gramian.build_A, "P": gramian.build_P}[args.which]
    M = build(args.window, params, ZakPoint(args.x, args.omega), args.tol)
    _write(formats.matrix_to_json(M, args.which) + "\n", args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    frac = _fraction(args)
    if frac.p >= frac.q:
        raise DomainError(f"alpha*beta = {frac} is not below 1")
    params = gramian.LatticeParams.from_alpha(args.alpha, frac)
    nx, nw = args.grid
    if args.domain == "auto":
        grid = analysis.default_grid(args.window, nx, nw)
    else:
        grid = analysis.GridSpec(nx, nw, analysis.DomainMode.HALF if args.domain == "half"
                                 else analysis.DomainMode.FULL)
    result = analysis.scan(args.window, params, grid, args.tol, args.threads)
    log.info("scan %s alpha=%g p/q=%s: global_min=%.3e at (%g, %g), %s",
             args.window.name, args.alpha, frac, result.global_min,
             result.argmin.x, result.argmin.omega, result.verdict.value)
    if args.format == "csv":
        _write(formats.scan_to_csv(result, args.window.name), args.out)
    elif args.format == "json":
        _write(formats.scan_to_json(result, args.window.name) + "\n", args.out)
    else:
        from .plotting import save_scan_plot
        _write_svg(lambda target, fmt: save_scan_plot(result, target, fmt=fmt), args.out)
    if args.plot:
        from .plotting import save_scan_plot
        save_scan_plot(result, args.plot)
    return _VERDICT_EXIT[result.verdict]


def cmd_certify(args) -> int:
    if args.kind == "three-fifths":
        cert = analysis.certify_three_fifths(args.alpha, args.grid_x, args.tol)
    else:
        if args.window.parity is not Parity.ODD:
            raise ParityError(f"--kind {args.kind} needs an odd window; "
                              f"{args.window.name} is {args.window.parity.value}")
        if args.kind == "odd-deficiency":
            if args.n is None:
                raise ParityError("--kind odd-deficiency needs --n")
            cert = analysis.odd_window_deficiency(args.window, args.n, args.alpha, args.tol)
        else:
            if args.p is None:
                raise ParityError("--kind symmetry needs --p")
            q = args.q if args.q is not None else args.p + 1
            cert = gramian.symmetry_check(args.window, gramian.ReducedFraction(args.p, q),
                                          args.alpha, args.tol)
    _write(formats.certificate_to_json(cert) + "\n", args.out)
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    nx, nw = args.grid
    grid = analysis.GridSpec(nx, nw, analysis.DomainMode.HALF)
    records = analysis.sweep(args.window, args.n_min, args.n_max, args.alpha, grid,
                             args.tol, args.threads,
                             progress=lambda n: log.info("sweep: n = %d done", n))
    title = f"{args.window.name}, alpha = {args.alpha:g}"
    if args.format == "csv":
        _write(formats.sweep_to_csv(records), args.out)
    else:
        from .plotting import save_sweep_plot
        _write_svg(lambda target, fmt: save_sweep_plot(records, target, title, fmt=fmt),
                   args.out)
    if args.plot:
        from .plotting import save_sweep_plot
        save_sweep_plot(records, args.plot, title)
    return EXIT_OK


def cmd_selftest(args) -> int:
    return EXIT_OK if selftest.run() else EXIT_SELFTEST


def _add_globals(parser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=_positive, default=default(DEFAULT_TOL),
                        help="Zak truncation tolerance (default 1e-12)")
    parser.add_argument("--threads", type=int, default=default(None),
                        help="worker threads for scans (default: all cores)")
    parser.add_argument("--seed", type=int, default=default(None),
                        help="reserved; all computations are deterministic")
    parser.add_argument("-v", "--verbose", action="store_true", default=default(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratgabor",
        description="Frame tests for Gabor systems with rational density alpha*beta = p/q.")
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zak", parents=[common], help="evaluate the Zak transform")
    p.add_argument("--window", type=_window, required=True)
    p.add_argument("--alpha", type=_positive, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.set_defaults(func=cmd_zak)

    p = sub.add_parser("matrix", parents=[common], help="dump Q, A or P as JSON")
    p.add_argument("--which", choices=("Q", "A", "P"), required=True)
    p.add_argument("--window", type=_window, required=True)
    p.add_argument("--alpha", type=_positive, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("scan", parents=[common],
                       help="scan sigma_min(P) over the fundamental domain")
    p.add_argument("--window", type=_window, required=True)
    p.add_argument("--alpha", type=_positive, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--grid", type=_grid, default=(64, 64), help="NXxNW (default 64x64)")
    p.add_argument("--domain", choices=("auto", "full", "half"), default="auto",
                   help="x-range: half needs a window with parity (auto picks)")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--plot", help="also write a heat map (.svg/.png/.pdf)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("certify", parents=[common], help="run a certificate")
    p.add_argument("--kind", choices=("odd-deficiency", "three-fifths", "symmetry"),
                   required=True)
    p.add_argument("--window", type=_window, default=None)
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--grid-x", type=int, default=64, help="cells per x-interval (three-fifths)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", parents=[common],
                       help="min eigenvalue of P P^H over alpha*beta = (n-j)/n")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--window", type=_window, default="hermite1")
    p.add_argument("--grid", type=_grid, default=(64, 64))
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--out")
    p.add_argument("--plot", help="also write the sweep figure (.svg/.png/.pdf)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", parents=[common], help="run the bundled invariant checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    if args.command == "certify" and args.kind != "three-fifths" and args.window is None:
        parser.error(f"--kind {args.kind} needs --window")
    if getattr(args, "grid", None) is not None and min(args.grid) < 2:
        parser.error("grid resolution must be at least 2x2")
    try:
        return args.func(args)
    except ParityError as exc:
        print(f"ratgabor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TailNotSummable as exc:
        print(f"ratgabor: error: {exc}", file=sys.stderr)
        return EXIT_TAIL
    except DomainError as exc:
        print(f"ratgabor: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
