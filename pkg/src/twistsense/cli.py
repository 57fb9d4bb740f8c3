"""Command-line front end emitting plot-ready data, no plotting.

Subcommands:

  sweep      sensitivity versus sensing fraction, one row per grid point
  optimize   best sensitivity over the sensing fraction per twist value
  threshold  break-even twist strength against the separable benchmark
  oracle     the analytic infinite-N closed forms, pointwise or optimized
  validate   run the library invariant battery

Curves default to CSV with the fixed header
scheme,n_spins,twist_times_tau,t_over_tau,sensitivity,method,engine and
floats printed to 12 significant digits; scalar results are JSON with keys
matching the record field names. There is no randomness anywhere, so
identical invocations produce byte-identical output. Exit codes: 0 on
success, 1 on computation errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .bosonic_limit import closed_form_optimum, closed_form_point
from .errors import TwistsenseError
from .metrology import SensitivityRecord
from .protocols import SCHEMES
from .sweep_optimize import (
    ENGINES,
    OptimumResult,
    SweepSpec,
    find_threshold,
    optimize_t,
    sweep_curve,
)

CSV_HEADER = "scheme,n_spins,twist_times_tau,t_over_tau,sensitivity,method,engine"


def _spin_count(text: str) -> int | None:
    """Parse the --n flag: a positive integer or 'inf' for the bosonic limit."""
    if text.strip().lower() == "inf":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a positive integer or 'inf', got {text!r}"
        ) from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"n must be >= 1 or 'inf', got {value}")
    return value


def _cell(value: float) -> str:
    return format(value, ".12g")


def _infer_engine(engine: str | None, n_spins: int | None) -> str:
    if engine is not None:
        return engine
    return "spin" if n_spins is not None else "closed_form"


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def _records_csv(records: list[SensitivityRecord], engine: str) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for rec in records:
        writer.writerow(
            [
                rec.scheme,
                "inf" if rec.n_spins is None else str(rec.n_spins),
                _cell(rec.twist_strength),
                _cell(rec.sensing_fraction),
                _cell(rec.sensitivity),
                rec.method,
                engine,
            ]
        )
    return buffer.getvalue()


def _record_json(rec: SensitivityRecord) -> dict:
    return {
        "scheme": rec.scheme,
        "n_spins": rec.n_spins,
        "twist_strength": rec.twist_strength,
        "sensing_fraction": rec.sensing_fraction,
        "sensitivity": rec.sensitivity,
        "method": rec.method,
    }


def _optimum_json(result: OptimumResult) -> dict:
    return {
        "twist_value": result.twist_value,
        "best_sensitivity": result.best_sensitivity,
        "t_opt": result.t_opt,
        "boundary": result.boundary,
    }


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _cmd_sweep(args: argparse.Namespace) -> int:
    engine = _infer_engine(args.engine, args.n)
    spec = SweepSpec(
        scheme=args.scheme,
        n_spins=args.n,
        twist_values=tuple(args.twist),
        t_grid=args.t_points,
        engine=engine,
    )
    records = sweep_curve(spec)
    if args.format == "csv":
        text = _records_csv(records, engine)
    else:
        text = _dump_json(
            {
                "scheme": args.scheme,
                "n_spins": args.n,
                "engine": engine,
                "records": [_record_json(rec) for rec in records],
            }
        )
    _write_output(args.out, text)
    return 0


def _cmd_optimize(args: argparse.Namespace) -> int:
    engine = _infer_engine(args.engine, args.n)
    results = [
        optimize_t(args.scheme, args.n, twist, engine, args.t_points)
        for twist in args.twist
    ]
    if args.format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["twist_value", "best_sensitivity", "t_opt", "boundary"])
        for result in results:
            writer.writerow(
                [
                    _cell(result.twist_value),
                    _cell(result.best_sensitivity),
                    _cell(result.t_opt),
                    result.boundary,
                ]
            )
        text = buffer.getvalue()
    else:
        text = _dump_json(
            {
                "scheme": args.scheme,
                "n_spins": args.n,
                "engine": engine,
                "results": [_optimum_json(result) for result in results],
            }
        )
    _write_output(args.out, text)
    return 0


def _cmd_threshold(args: argparse.Namespace) -> int:
    engine = _infer_engine(args.engine, args.n)
    lo, hi = args.interval
    value = find_threshold(args.scheme, args.n, engine, (lo, hi))
    text = _dump_json(
        {
            "scheme": args.scheme,
            "n_spins": args.n,
            "engine": engine,
            "search_interval": [lo, hi],
            "threshold": value,
        }
    )
    _write_output(args.out, text)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    if args.optimum:
        best = closed_form_optimum(args.scheme, args.twist)
        payload = {
            "scheme": args.scheme,
            "twist_times_tau": args.twist,
            "value": best.value,
            "t_opt": best.t_opt,
        }
    else:
        point = closed_form_point(args.scheme, args.twist, args.t)
        payload = {
            "scheme": point.scheme,
            "twist_times_tau": point.twist_times_tau,
            "sensing_fraction": point.sensing_fraction,
            "value": point.value,
        }
    _write_output(args.out, _dump_json(payload))
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    from .validate import run_validation

    return run_validation(args.only)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistsense",
        description=(
            "Time-budgeted magnetometry with twisted collective spin states: "
            "curves, optima, break-even thresholds, analytic oracles."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_n: bool = True) -> None:
        p.add_argument("--scheme", required=True, choices=SCHEMES)
        if with_n:
            p.add_argument(
                "--n",
                type=_spin_count,
                default=None,
                help="spin count, or 'inf' for the bosonic limit (default: inf)",
            )
            p.add_argument(
                "--engine",
                choices=ENGINES,
                default=None,
                help="default: spin for finite --n, closed_form for inf",
            )
        p.add_argument("--out", default="-", help="output path, '-' for stdout")

    p_sweep = sub.add_parser(
        "sweep", help="sensitivity versus sensing fraction for each twist value"
    )
    add_common(p_sweep)
    p_sweep.add_argument("--twist", type=float, nargs="+", required=True)
    p_sweep.add_argument("--t-points", type=int, default=201)
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_opt = sub.add_parser(
        "optimize", help="best sensitivity over the sensing fraction"
    )
    add_common(p_opt)
    p_opt.add_argument("--twist", type=float, nargs="+", required=True)
    p_opt.add_argument("--t-points", type=int, default=201)
    p_opt.add_argument("--format", choices=("csv", "json"), default="json")
    p_opt.set_defaults(func=_cmd_optimize)

    p_thr = sub.add_parser(
        "threshold", help="break-even twist strength against the benchmark"
    )
    add_common(p_thr)
    p_thr.add_argument(
        "--interval",
        type=float,
        nargs=2,
        metavar=("LO", "HI"),
        required=True,
        help="twist interval bracketing the break-even point",
    )
    p_thr.set_defaults(func=_cmd_threshold)

    p_oracle = sub.add_parser(
        "oracle", help="analytic infinite-N value at a point or its optimum"
    )
    add_common(p_oracle, with_n=False)
    p_oracle.add_argument("--twist", type=float, required=True)
    which = p_oracle.add_mutually_exclusive_group(required=True)
    which.add_argument("--t", type=float, help="sensing fraction to evaluate at")
    which.add_argument(
        "--optimum",
        action="store_true",
        help="report the optimum over the sensing fraction instead",
    )
    p_oracle.set_defaults(func=_cmd_oracle)

    p_val = sub.add_parser("validate", help="run the library invariant battery")
    p_val.add_argument(
        "--only", default=None, help="run only checks whose name contains this"
    )
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TwistsenseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
