"""Command-line front end: ``ves eval|curve|verify|calibrate|figures|synth``.

Exit codes: 0 success, 2 input or validation error, 3 output I/O error,
4 calibration budget exhausted.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import calibrate, core, fileio, verify
from .core import BENCHMARK
from .errors import NoConvergence, VesError
from .grid import GridSpec

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IO = 3
EXIT_NOCONV = 4

FIGURE_GRID = GridSpec(0.01, 100.0, 513, "log")
FIGURES = {
    "f.csv": ("k", "f"),
    "fprime.csv": ("k", "fprime"),
    "sigma.csv": ("k", "sigma"),
    "shares.csv": ("k", "share_k", "share_l"),
}


class _InputError(Exception):
    pass


class _OutputError(Exception):
    pass


def _load_params(path):
    try:
        return fileio.read_params(path)
    except OSError as exc:
        raise _InputError(f"cannot read params file {path}: {exc.strerror or exc}") from None


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _OutputError(f"cannot write {path}: {exc.strerror or exc}") from None


def cmd_eval(args, out):
    p = _load_params(args.params)
    b = core.eval_bundle(p, args.k)
    for col, value in zip(fileio.CURVE_COLUMNS, b.as_tuple()):
        out.write(f"{col}={fileio.fmt(value)}\n")
    out.write(f"reduction={p.reduction.value}\n")
    return EXIT_OK


def cmd_curve(args, out):
    p = _load_params(args.params)
    grid = GridSpec(args.kmin, args.kmax, args.points, args.spacing)
    _write(args.out, fileio.curve_table(p, grid.values()))
    out.write(f"wrote {args.points} rows to {args.out}\n")
    return EXIT_OK


def cmd_verify(args, out):
    p = _load_params(args.params)
    report = verify.run_all(p)
    out.write(report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.overall else 1


def _print_result(res, out):
    out.write(fileio.format_params(res.params))
    out.write(f"rmse = {res.rmse:.6e}\n")
    out.write(f"iterations = {res.iterations}\n")
    out.write(f"restarts = {res.restarts_used}\n")
    out.write(f"converged = {'true' if res.converged else 'false'}\n")


def cmd_calibrate(args, out):
    try:
        obs, weights = fileio.read_observations(args.data)
    except OSError as exc:
        raise _InputError(f"cannot read data file {args.data}: {exc.strerror or exc}") from None
    problem = calibrate.CalibrationProblem(
        obs, weights, normalize_alpha_beta=not args.no_normalize, mode=args.mode, seed=args.seed
    )
    options = calibrate.FitOptions(budget=args.budget, starts=args.starts)
    try:
        res = calibrate.fit(problem, options)
        code = EXIT_OK
    except NoConvergence as exc:
        res = exc.result
        sys.stderr.write(f"ves: {exc}\n")
        code = EXIT_NOCONV
    _print_result(res, out)
    if args.out:
        _write(args.out, fileio.format_params(res.params))
    return code


def cmd_figures(args, out):
    try:
        os.makedirs(args.outdir, exist_ok=True)
    except OSError as exc:
        raise _OutputError(f"cannot create {args.outdir}: {exc.strerror or exc}") from None
    k = FIGURE_GRID.values()
    for name, cols in FIGURES.items():
        path = os.path.join(args.outdir, name)
        _write(path, fileio.curve_table(BENCHMARK, k, cols))
        out.write(f"wrote {path}\n")
    return EXIT_OK


def cmd_synth(args, out):
    p = _load_params(args.params)
    grid = GridSpec(args.kmin, args.kmax, args.points, args.spacing)
    obs = calibrate.synth_data(p, grid, args.noise, args.seed)
    try:
        fileio.write_observations(args.out, obs)
    except OSError as exc:
        raise _OutputError(f"cannot write {args.out}: {exc.strerror or exc}") from None
    out.write(f"wrote {len(obs)} observations to {args.out}\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="ves", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="all closed-form quantities at one k")
    p.add_argument("--params", required=True)
    p.add_argument("--k", type=float, required=True)
    p.set_defaults(func=cmd_eval)

    def grid_flags(p):
        p.add_argument("--kmin", type=float, default=0.01)
        p.add_argument("--kmax", type=float, default=100.0)
        p.add_argument("--points", type=int, default=512)
        p.add_argument("--spacing", choices=("log", "linear"), default="log")

    p = sub.add_parser("curve", help="curve table over a grid")
    p.add_argument("--params", required=True)
    grid_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("verify", help="run every numerical oracle check")
    p.add_argument("--params", required=True)
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("calibrate", help="fit parameters to a k,y data file")
    p.add_argument("--data", required=True)
    p.add_argument("--no-normalize", action="store_true", help="drop the alpha + beta = 1 constraint")
    p.add_argument("--mode", choices=core.MODES, default="strict")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=calibrate.FitOptions.budget)
    p.add_argument("--starts", type=int, default=calibrate.FitOptions.starts)
    p.add_argument("--out", help="write fitted parameters to this params file")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("figures", help="benchmark curve files f, fprime, sigma, shares")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("synth", help="synthetic observations from a params file")
    p.add_argument("--params", required=True)
    grid_flags(p)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except _OutputError as exc:
        sys.stderr.write(f"ves: {exc}\n")
        return EXIT_IO
    except (_InputError, VesError) as exc:
        sys.stderr.write(f"ves: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
