"""Command-line entry point: ``constants``, ``estimate``, ``simulate``, ``experiment``.

Every subcommand only parses, calls the library, and formats. Exit status is 0
on success, 2 on a usage error and 1 on a runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import platform
import sys

import numpy as np

from . import __version__
from ._backend import BACKEND
from .comparator import DEFAULT_ALPHA, aj_confidence_interval, aj_estimate
from .csvio import CsvFormatError, read_log_prices, write_log_prices
from .estimator import EstimatorConfig, confidence_interval, estimate
from .experiment import ExperimentGrid, default_workers, emit, run_grid
from .kernel import QuadratureError, make_constants
from .simulate import SCALINGS, SimulationModel, simulate_path

QUICK_REPS = 2000


def to_json(obj) -> str:
    """JSON with floats at 17 significant digits; non-finite floats become null."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".17g") if math.isfinite(obj) else "null"
    return json.dumps(obj)


def _human(rows) -> str:
    width = max(len(k) for k, _ in rows)
    out = []
    for k, v in rows:
        if isinstance(v, float):
            v = format(v, ".6g")
        out.append(f"{k:<{width}}  {v}")
    return "\n".join(out)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jumpact", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=version_string())
    parser.add_argument("--config", metavar="FILE.json",
                        help="JSON file of default flag values (command-line flags win)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="kernel constants at (beta, rho)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("estimate", help="estimate the jump activity of a log-price series")
    p.add_argument("--input", required=True, metavar="FILE.csv")
    p.add_argument("--column", default="logprice")
    p.add_argument("--method", choices=["multiscale", "aj"], default="multiscale")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--c", type=float, default=0.05)
    p.add_argument("--rho", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=None,
                   help="threshold rate (default m/(2(m+1)), or 1/5 for --method aj)")
    p.add_argument("--gamma", type=float, default=0.95)
    p.add_argument("--scale", type=float, default=1.0,
                   help="multiply all log-prices by this factor first")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("simulate", help="simulate one path of the Monte-Carlo model")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n", type=int, default=23_400)
    p.add_argument("--noise-sd", type=float, default=0.01)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--replication", type=int, default=0)
    p.add_argument("--scaling", choices=SCALINGS, default="integrand")
    p.add_argument("--out", required=True, metavar="FILE.csv")
    p.add_argument("--clean-out", metavar="FILE2.csv")

    p = sub.add_parser("experiment", help="Monte-Carlo sweep over (beta, p)")
    p.add_argument("--betas", type=_float_list, default=[0.4, 0.8, 1.2, 1.6])
    p.add_argument("--ps", type=_float_list, default=[0.005, 0.01, 0.02])
    p.add_argument("--reps", type=_positive_int, default=None)
    p.add_argument("--quick", action="store_true", help=f"preset: {QUICK_REPS} replications")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive_int, default=None,
                   help="worker processes (default $JUMPACT_THREADS or 1)")
    p.add_argument("--scaling", choices=SCALINGS, default="integrand")
    p.add_argument("--lenient", action="store_true",
                   help="exclude and count failing replications instead of aborting")
    p.add_argument("--out", required=True, metavar="DIR")
    return parser


def version_string() -> str:
    return (f"jumpact {__version__} (core: {BACKEND}; python {platform.python_version()}; "
            f"numpy {np.__version__})")


def _parse(parser, argv):
    argv = sys.argv[1:] if argv is None else list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    choices = parser._subparsers._group_actions[0].choices
    command = next((a for a in argv if a in choices), None)
    if known.config is None or command is None:
        return parser.parse_args(argv)
    try:
        with open(known.config) as fh:
            defaults = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"--config: cannot read {known.config}: {exc}")
    if not isinstance(defaults, dict):
        parser.error("--config: expected a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in defaults.items()}
    subparser = choices[command]
    known_dests = {a.dest for a in subparser._actions}
    unknown = sorted(k for k in defaults if k not in known_dests)
    if unknown:
        parser.error(f"--config: unknown keys {unknown} for '{command}'")
    subparser.set_defaults(**defaults)
    for action in subparser._actions:
        if action.dest in defaults:
            action.required = False
    return parser.parse_args(argv)


def _cmd_constants(args, parser):
    if not 0.0 < args.beta <= 2.0:
        parser.error(f"--beta must lie in (0, 2], got {args.beta}")
    if not args.rho > 1.0:
        parser.error(f"--rho must exceed 1, got {args.rho}")
    k = make_constants(args.beta, args.rho)
    fields = ["beta", "rho", "k_beta", "k_beta_rho", "kbar_beta_rho", "kbar_beta_1",
              "c_beta_rho", "c_beta"]
    d = {f: getattr(k, f) for f in fields}
    print(to_json(d) if args.json else _human(list(d.items()) + [("quad_rel_tol", k.quad_rel_tol)]))


def _cmd_estimate(args, parser):
    if not 0.0 < args.gamma < 1.0:
        parser.error(f"--gamma must lie in (0, 1), got {args.gamma}")
    if not args.scale > 0.0:
        parser.error(f"--scale must be positive, got {args.scale}")
    if not args.rho > 1.0:
        parser.error(f"--rho must exceed 1, got {args.rho}")
    if not args.c > 0.0:
        parser.error(f"--c must be positive, got {args.c}")
    if args.method == "multiscale":
        if args.m < 1:
            parser.error(f"--m must be >= 1, got {args.m}")
        if args.alpha is not None and not 0.0 < args.alpha < 0.5:
            parser.error(f"--alpha must lie in (0, 1/2), got {args.alpha}")
        config = EstimatorConfig(m=args.m, rho=args.rho, c=args.c, alpha=args.alpha,
                                 gamma_levels=(args.gamma,))
    elif args.alpha is not None and not args.alpha > 0.0:
        parser.error(f"--alpha must be positive, got {args.alpha}")

    values = read_log_prices(args.input, args.column) * args.scale

    if args.method == "multiscale":
        est = estimate(values, config)
        ci = confidence_interval(est, args.gamma)
        out = {
            "method": "multiscale",
            "beta_hat": est.beta_hat,
            "sigma_hat": est.sigma_hat,
            "tau_n": est.tau_n,
            "a_tau": est.a_tau,
            "a_rho_tau": est.a_rho_tau,
            "ci": {"gamma": args.gamma, "lo": ci.lo, "hi": ci.hi, "empty": ci.empty},
            "flags": {"clipped_low": est.clipped_low, "clipped_high": est.clipped_high,
                      "counts_clipped": est.counts_clipped},
            "n": est.n,
        }
    else:
        alpha = DEFAULT_ALPHA if args.alpha is None else args.alpha
        est = aj_estimate(values, args.c, args.rho, alpha)
        ci = aj_confidence_interval(est, args.gamma)
        out = {
            "method": "aj",
            "beta_hat": est.beta_tilde,
            "sigma_hat": None,
            "tau_n": est.tau_n,
            "a_tau": est.count_tau,
            "a_rho_tau": est.count_rho_tau,
            "ci": {"gamma": args.gamma, "lo": ci.lo, "hi": ci.hi, "empty": ci.empty},
            "flags": {"clipped": est.clipped, "variance_proxy_defined": est.defined},
            "n": int(values.size),
        }
    if args.json:
        print(to_json(out))
    else:
        ci_text = "empty" if out["ci"]["empty"] else f"[{ci.lo:.6g}, {ci.hi:.6g}]"
        rows = [(k, v) for k, v in out.items() if k not in ("ci", "flags")]
        rows.append((f"ci({args.gamma:g})", ci_text))
        rows += [(k, str(v)) for k, v in out["flags"].items()]
        print(_human(rows))


def _cmd_simulate(args, parser):
    try:
        model = SimulationModel(args.beta, args.p, n=args.n, noise_sd=args.noise_sd,
                                seed=args.seed, scaling=args.scaling)
    except ValueError as exc:
        parser.error(str(exc))
    clean, observed = simulate_path(model, args.replication)
    write_log_prices(args.out, observed)
    if args.clean_out:
        write_log_prices(args.clean_out, clean)


def _cmd_experiment(args, parser):
    reps = args.reps if args.reps is not None else (QUICK_REPS if args.quick else 10_000)
    workers = args.threads if args.threads is not None else default_workers()
    try:
        grid = ExperimentGrid(betas=tuple(args.betas), ps=tuple(args.ps), reps=reps,
                              base_seed=args.seed, scaling=args.scaling)
        for b in grid.betas:
            SimulationModel(b, grid.ps[0])
        for p in grid.ps:
            SimulationModel(grid.betas[0], p)
    except ValueError as exc:
        parser.error(str(exc))
    table = run_grid(grid, workers=workers, strict=not args.lenient)
    emit(table, args.out)
    print(_human([(f"{s.method} beta={s.beta_true:g} p={s.p:g}",
                   f"mean {s.mean:.6g}  std {s.std_dev:.6g}  cov {s.coverage:.6g}  "
                   f"rmse {s.rmse:.6g}") for s in table]))


COMMANDS = {
    "constants": _cmd_constants,
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse(parser, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except FileNotFoundError as exc:
        print(f"jumpact: file not found: {exc.filename}", file=sys.stderr)
        return 1
    except (CsvFormatError, QuadratureError, ValueError, OSError) as exc:
        print(f"jumpact: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
