"""Command line front end: ``fdaloha {figure,sweep,validate,tables}``.

Every command writes one CSV file with a JSON metadata header (see
:py:func:`~fdaloha.curves.write_curve`). Without ``--out`` the file is named after
the command and placed in ``$FDALOHA_OUTPUT_DIR`` (or the working directory); a
bare file name given to ``--out`` is placed there as well.

Exit codes: 0 success, 1 usage or parameter error, 2 numerical failure,
3 failed validation.
"""

import argparse
import logging
import os
import sys
from pathlib import Path

from .constants import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    OUTPUT_DIR_ENV,
    REFERENCE_BACKOFF,
    REFERENCE_DURATIONS,
    REFERENCE_FRACTIONS,
    REFERENCE_WINDOW,
    VALID_FIGURES,
    VALID_SPACINGS,
    VALID_SWEEP_VARIABLES,
)
from .curves import SweepSpec, evaluate_sweep, write_curve
from .exceptions import (
    KeywordError,
    OptimizationError,
    ParameterError,
    QuadratureError,
    SimulationError,
)
from .figures import ALPHAS, THETAS, build_figure, delta_table
from .logging import log_command_header
from .metrics import ALL_METRICS, operating_point
from .montecarlo import MEASURE_TIME, REPLICATIONS, SimConfig, validation_campaign
from .quadrature import QuadConfig

# flag dest -> operating point key
_PARAM_DESTS = {
    "lam": "lambda",
    "r": "r",
    "alpha": "alpha",
    "theta": "theta",
    "eta": "eta",
    "w": "w",
}
_POINT_DESTS = {"q": "q", "d": "d", "gamma": "gamma", "load": "load"}


def _params_parser():
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("system parameters")
    group.add_argument("--lambda", dest="lam", type=float, help="link density")
    group.add_argument("--r", type=float, help="link distance, >= 1")
    group.add_argument("--alpha", type=float, help="path-loss exponent, > 2")
    group.add_argument("--theta", type=float, help="SIR threshold (linear)")
    group.add_argument("--eta", type=float, help="cancellation efficiency")
    group.add_argument("--w", type=float, help="bitrate")
    return parser


def _point_parser():
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("operating point")
    group.add_argument("--q", type=float, help="full-duplex fraction")
    group.add_argument("--d", type=float, help="half-duplex packet duration")
    group.add_argument("--gamma", type=float, help="full-duplex duration ratio")
    group.add_argument("--load", type=float, help="network load G, overrides --d")
    return parser


def _output_parser():
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("output")
    group.add_argument("--out", help="output CSV file")
    group.add_argument("--tol", type=float, help="relative quadrature tolerance")
    return parser


def _sim_parser():
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("simulation")
    group.add_argument("--seed", type=int, default=0, help="base seed")
    group.add_argument("--reps", type=int, default=REPLICATIONS, help="replications")
    group.add_argument(
        "--window", type=float, default=REFERENCE_WINDOW, help="torus side L"
    )
    group.add_argument(
        "--backoff", type=float, default=REFERENCE_BACKOFF, help="maximum backoff B"
    )
    group.add_argument(
        "--measure", type=float, default=MEASURE_TIME, help="measurement horizon"
    )
    return parser


def build_parser():
    """The ``argparse`` parser of all subcommands."""
    parser = argparse.ArgumentParser(
        prog="fdaloha",
        description="Throughput of asynchronous Aloha with full-duplex clusters.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log quadratures and replications (-v), optimizer brackets (-vv)",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    params, point, output, sim = (
        _params_parser(),
        _point_parser(),
        _output_parser(),
        _sim_parser(),
    )

    figure = sub.add_parser(
        "figure", parents=[params, output, sim], help="data of one figure"
    )
    figure.add_argument("fig_id", type=int, choices=VALID_FIGURES)
    figure.add_argument(
        "--sim", action="store_true", help="add simulated points (figure 3)"
    )
    figure.set_defaults(func=cmd_figure)

    sweep = sub.add_parser(
        "sweep", parents=[params, point, output], help="metrics along a sweep"
    )
    sweep.add_argument("variable", choices=VALID_SWEEP_VARIABLES)
    sweep.add_argument("start", type=float)
    sweep.add_argument("stop", type=float)
    sweep.add_argument("--steps", type=int, default=50)
    sweep.add_argument("--spacing", choices=VALID_SPACINGS, default="linear")
    sweep.add_argument(
        "--metrics",
        nargs="+",
        default=["throughput"],
        help=f"any of {', '.join(ALL_METRICS)}",
    )
    sweep.set_defaults(func=cmd_sweep)

    validate = sub.add_parser(
        "validate",
        parents=[params, output, sim],
        help="Monte Carlo against analytical throughput",
    )
    validate.add_argument(
        "--q", type=float, nargs="+", default=REFERENCE_FRACTIONS, dest="fractions"
    )
    validate.add_argument(
        "--d", type=float, nargs="+", default=REFERENCE_DURATIONS, dest="durations"
    )
    validate.add_argument("--gamma", type=float, default=1.0)
    validate.add_argument(
        "--analytic-eta",
        type=float,
        help="cancellation efficiency of the analytical side only",
    )
    validate.set_defaults(func=cmd_validate)

    tables = sub.add_parser("tables", parents=[output], help="table of delta")
    tables.add_argument("--thetas", type=float, nargs="+", default=THETAS)
    tables.add_argument("--alphas", type=float, nargs="+", default=ALPHAS)
    tables.set_defaults(func=cmd_tables)
    return parser


def _overrides(args, dests):
    return {
        key: getattr(args, dest)
        for dest, key in dests.items()
        if getattr(args, dest, None) is not None
    }


def _params(args):
    return operating_point(**_overrides(args, _PARAM_DESTS)).params


def _quad_config(args):
    return QuadConfig() if args.tol is None else QuadConfig(rel_tol=args.tol)


def _sim_config(args):
    return SimConfig(
        window_side=args.window,
        backoff_max=args.backoff,
        measure_time=args.measure,
        replications=args.reps,
        base_seed=args.seed,
    )


def output_path(out, default_name):
    """Resolve the output file of a command and create its directory."""
    base = os.environ.get(OUTPUT_DIR_ENV)
    if out is None:
        path = Path(base or ".") / default_name
    elif base and Path(out).name == out:
        path = Path(base) / out
    else:
        path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def cmd_figure(args):
    params = _params(args)
    sim = _sim_config(args) if args.sim else None
    curve = build_figure(args.fig_id, params, _quad_config(args), sim=sim)
    write_curve(curve, output_path(args.out, f"figure{args.fig_id}.csv"))
    return EXIT_OK


def cmd_sweep(args):
    fixed = _overrides(args, {**_PARAM_DESTS, **_POINT_DESTS})
    spec = SweepSpec(
        args.variable,
        args.start,
        args.stop,
        steps=args.steps,
        spacing=args.spacing,
        fixed=fixed,
    )
    curve = evaluate_sweep(spec, args.metrics, _quad_config(args))
    write_curve(curve, output_path(args.out, f"sweep_{args.variable}.csv"))
    return EXIT_OK


def cmd_validate(args):
    params = _params(args)
    analytic_params = None
    if args.analytic_eta is not None:
        analytic_params = params.replace(eta=args.analytic_eta)
    report = validation_campaign(
        params,
        _sim_config(args),
        fractions=args.fractions,
        durations=args.durations,
        gamma=args.gamma,
        analytic_params=analytic_params,
        cfg=_quad_config(args),
    )
    write_curve(report, output_path(args.out, "validate.csv"))
    if report.attrs["low_power"]:
        logging.warning(
            f"validation ran with {args.reps} replication(s), z-scores not resolved"
        )
    if report.attrs["failed_cells"]:
        logging.error(f"{report.attrs['failed_cells']} cell(s) with |z| > 4")
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_tables(args):
    curve = delta_table(args.thetas, args.alphas, _quad_config(args))
    write_curve(curve, output_path(args.out, "delta_table.csv"))
    return EXIT_OK


def _configure_logging(verbose):
    logging.basicConfig(format="%(levelname)s %(message)s")
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG if verbose > 1 else logging.INFO)


def main(argv=None):
    """Run the command line front end and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    _configure_logging(args.verbose)
    settings = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "command") and v is not None
    }
    log_command_header(args.command, **settings)
    try:
        return args.func(args)
    except (KeywordError, ParameterError, SimulationError) as e:
        print(f"fdaloha: error: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, OptimizationError) as e:
        print(f"fdaloha: numerical failure: {e.message}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as e:
        print(f"fdaloha: error: {e}", file=sys.stderr)
        return EXIT_USAGE
