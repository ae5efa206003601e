"""Command-line front end: ``squeezedyn {simulate,verify,sweep}``.

Exit codes: 0 success, 1 invalid input, 2 verification failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import verify
from .config import RunConfig, apply_overrides, load_config
from .errors import ConstantsNotDefinedError, EvaluationError, NumericalError, SqueezeDynError, ValidationError
from .output import write_plot, write_table
from .simulation import oracle_trajectory, parse_vary, prepare, sweep, trajectory

EXIT_OK, EXIT_INVALID, EXIT_VERIFY, EXIT_NUMERICAL = 0, 1, 2, 3

# simulate --oracle fails when the grid disagrees by more than these
ORACLE_MEAN_TOL = 1e-5
ORACLE_VAR_TOL = 1e-4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def _run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration; flags below override it")
    p.add_argument("--system", choices=["HO", "FP", "LP", "DHO", "RO"])
    p.add_argument("--omega", type=float, help="oscillator frequency (HO, DHO)")
    p.add_argument("--Omega", type=float, help="inverted-oscillator rate (RO)")
    p.add_argument("--kappa", type=float, help="constant drive strength, g1 = kappa/2 (LP, DHO)")
    p.add_argument("--x0", type=float)
    p.add_argument("--p0", type=float)
    p.add_argument("--r", type=float, help="squeeze magnitude")
    p.add_argument("--theta", type=float, help="squeeze phase (radians)")
    p.add_argument("--alpha", type=float, help="coherent amplitude |alpha|")
    p.add_argument("--delta", type=float, help="coherent phase (radians)")
    p.add_argument("--rep", choices=["xp", "alpha-z", "z-alpha"])
    p.add_argument("--tau-max", dest="tau_max", type=float)
    p.add_argument("--dt-out", dest="dt_out", type=float)
    p.add_argument("--out", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=["csv", "json"])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="squeezedyn", description="Squeezed-state dynamics in quadratic potentials.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="write <x>, <p> and second moments over time")
    _run_flags(sim)
    sim.add_argument("--oracle", action="store_true", default=None,
                     help="also propagate the packet on a grid and compare")
    sim.add_argument("--grid-n", dest="grid_n", type=int)
    sim.add_argument("--grid-domain", dest="grid_domain", type=float, help="grid half-width")
    sim.add_argument("--oracle-dt", dest="oracle_dt", type=float)
    sim.add_argument("--plot", action="store_true", default=None, help="write SVG plots next to --out")

    ver = sub.add_parser("verify", help="run the invariant suite")
    ver.add_argument("--skip-oracle", action="store_true", help="skip the grid simulations")
    ver.add_argument("--seed", type=int, default=2024)
    ver.add_argument("--tol", action="append", default=[], metavar="CHECK=VALUE",
                     help=f"override a tolerance; checks: {', '.join(verify.DEFAULT_TOLERANCES)}")

    swp = sub.add_parser("sweep", help="uncertainty products over a parameter grid")
    _run_flags(swp)
    swp.add_argument("--vary", action="append", default=[], metavar="NAME=SPEC",
                     help="NAME=start:stop:num or NAME=v1,v2,...; NAME in r, theta, omega, Omega, kappa")
    swp.add_argument("--jobs", type=int, default=1)
    return parser


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "vary", "jobs")}
    return apply_overrides(cfg, flags).validated()


def _sibling(path: str, tag: str, suffix: Optional[str] = None) -> Path:
    p = Path(path)
    return p.with_name(f"{p.stem}{tag}{suffix if suffix is not None else p.suffix}")


def cmd_simulate(args) -> int:
    cfg = _config(args)
    setup = prepare(cfg)
    cols = trajectory(setup)
    out = cfg.output
    write_table(cols, out.path, out.format)
    if out.plot:
        write_plot(_sibling(out.path, "_x", ".svg"), cols["tau"], cols["x"], "tau", "<x>", str(setup.system))
        write_plot(_sibling(out.path, "_product", ".svg"), cols["tau"], cols["product"], "tau",
                   "var_x var_p", str(setup.system))
    if not cfg.oracle.enabled:
        return EXIT_OK

    grid = oracle_trajectory(setup, cfg)
    if out.path not in (None, "-"):
        write_table(grid, _sibling(out.path, ".oracle"), out.format)
    mean_err = max(np.max(np.abs(grid["x"] - cols["x"])), np.max(np.abs(grid["p"] - cols["p"])))
    var_err = max(np.max(np.abs(grid["var_x"] / cols["var_x"] - 1)), np.max(np.abs(grid["var_p"] / cols["var_p"] - 1)))
    ok = mean_err <= ORACLE_MEAN_TOL and var_err <= ORACLE_VAR_TOL
    print(f"oracle: max |d<x>|,|d<p>| = {mean_err:.2e}, max relative variance error = {var_err:.2e}"
          f" [{'PASS' if ok else 'FAIL'}]", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


def _tolerances(items) -> dict:
    out = {}
    for item in items:
        name, _, value = item.partition("=")
        if name not in verify.DEFAULT_TOLERANCES:
            raise ValidationError(f"unknown check {name!r} in --tol")
        try:
            out[name] = float(value)
        except ValueError:
            raise ValidationError(f"--tol {item!r}: value is not a number") from None
    return out


def cmd_verify(args) -> int:
    results = verify.run_suite(skip_oracle=args.skip_oracle, seed=args.seed, tolerances=_tolerances(args.tol))
    print(verify.format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_sweep(args) -> int:
    if args.jobs < 1:
        raise ValidationError("--jobs must be at least 1")
    cfg = _config(args)
    cols = sweep(cfg, [parse_vary(v) for v in args.vary], jobs=args.jobs)
    write_table(cols, cfg.output.path, cfg.output.format)
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (NumericalError, EvaluationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SqueezeDynError, ConstantsNotDefinedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
