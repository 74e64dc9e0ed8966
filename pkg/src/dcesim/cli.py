"""
Command-line front end.

One verb per workflow: ``sweep`` (one-dimensional parameter sweeps),
``figure`` (the four standard dataset views), ``indicators`` (a single
operating point, printed as a table) and ``estimate`` (indicator
estimation from a quadrature record file).  All outputs are deterministic;
grid evaluation order never changes file contents.
"""

import argparse
import json
import sys

from ._version import __version__
from .estimator import bootstrap_indicators, load_quadrature_records
from .model import default_config, load_config, mode_pair
from .moments import output_moments
from .indicators import indicators_from_moments
from .scattering import ConvergenceError, dump_ladder_system, solve_scattering
from .sweep import (
    FIGURE_IDS,
    SWEEP_COLUMNS,
    SweepPointError,
    SweepSpec,
    emit,
    evaluate_point,
    reproduce_figure,
    run_sweep,
    standard_metadata,
)

_TABLE_ROWS = (
    ("fdf_min", "min_theta <:f^dag f:>"),
    ("theta_opt", "optimal axis theta"),
    ("sigma2", "two-mode squeezing sigma2"),
    ("sigma2_threshold", "classical bound on sigma2"),
    ("logneg", "logarithmic negativity"),
    ("nonclassical_by_fdf", "nonclassical (witness)"),
    ("nonclassical_by_sigma2", "nonclassical (squeezing)"),
    ("entangled", "entangled"),
)


def _add_common(parser):
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--epsilon", type=float, help="drive amplitude override")
    parser.add_argument("--temperature-k", type=float, help="temperature override (K)")
    parser.add_argument("--detuning-frac", type=float, default=0.15,
                        help="detuning as a fraction of the drive frequency")
    parser.add_argument("--method", choices=("numeric", "perturbative"),
                        default="numeric")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        dest="output_format")
    parser.add_argument("--output", help="output file path")
    parser.add_argument("--seed", type=int, default=0)


def _build_config(args):
    config = load_config(args.config) if args.config else default_config()
    overrides = {}
    if args.epsilon is not None:
        overrides["epsilon"] = args.epsilon
    if getattr(args, "temperature_k", None) is not None:
        overrides["temperature"] = args.temperature_k
    return config.with_(**overrides) if overrides else config


def _parser():
    parser = argparse.ArgumentParser(
        prog="dcesim",
        description="Radiation from a modulated superconducting waveguide "
                    "termination: sweeps, figure datasets, nonclassicality "
                    "and entanglement indicators.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="sweep one variable over a grid")
    p_sweep.add_argument("variable", choices=("epsilon", "temperature", "detuning"))
    p_sweep.add_argument("start", type=float)
    p_sweep.add_argument("stop", type=float)
    p_sweep.add_argument("--points", type=int, default=21)
    p_sweep.add_argument("--workers", type=int, default=None)
    _add_common(p_sweep)

    p_fig = sub.add_parser("figure", help="reproduce a standard dataset")
    p_fig.add_argument("id", choices=FIGURE_IDS)
    p_fig.add_argument("--points", type=int, default=None)
    p_fig.add_argument("--noise-n-det", type=float, default=0.0,
                       help="detector noise per quadrature (fig3 contour)")
    p_fig.add_argument("--samples", type=int, default=100000,
                       help="assumed shots behind the fig3 one-sigma contour")
    p_fig.add_argument("--workers", type=int, default=None)
    _add_common(p_fig)

    p_ind = sub.add_parser("indicators", help="evaluate a single operating point")
    p_ind.add_argument("--dump-ladder", help="write the ladder system matrices "
                                             "of the lower mode to this path")
    _add_common(p_ind)

    p_est = sub.add_parser("estimate", help="estimate indicators from records")
    p_est.add_argument("records", help="CSV file of quadrature samples")
    p_est.add_argument("--calibration", help="JSON gain/offset sidecar")
    p_est.add_argument("--resamples", type=int, default=1000)
    _add_common(p_est)

    return parser


def _cmd_sweep(args):
    config = _build_config(args)
    spec = SweepSpec(
        variable=args.variable,
        start=args.start,
        stop=args.stop,
        points=args.points,
        config=config,
        detuning_frac=args.detuning_frac,
        method=args.method,
        output_format=args.output_format,
    )
    rows = run_sweep(spec, max_workers=args.workers)
    metadata = standard_metadata(
        config,
        sweep={"variable": spec.variable, "start": spec.start,
               "stop": spec.stop, "points": spec.points,
               "detuning_frac": spec.detuning_frac, "method": spec.method},
    )
    if args.output:
        emit(rows, SWEEP_COLUMNS, args.output_format, args.output, metadata)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(",".join(SWEEP_COLUMNS) + "\n")
        from .sweep import _format_cell
        for row in rows:
            sys.stdout.write(",".join(_format_cell(row[c]) for c in SWEEP_COLUMNS) + "\n")
    return 0


def _cmd_figure(args):
    config = _build_config(args)
    columns, rows, extras = reproduce_figure(
        args.id,
        config,
        detuning_frac=args.detuning_frac,
        points=args.points,
        method=args.method,
        noise_n_det=args.noise_n_det,
        noise_samples=args.samples,
        max_workers=args.workers,
    )
    out = args.output or f"{args.id}.{args.output_format}"
    metadata = standard_metadata(
        config,
        figure=args.id,
        detuning_frac=args.detuning_frac,
        method=args.method,
        **({"noise_n_det": args.noise_n_det, "noise_samples": args.samples}
           if args.id == "fig3" else {}),
    )
    emit(rows, columns, args.output_format, out, metadata)
    print(f"wrote {out}")
    if args.id == "fig2" and extras:
        side = f"{out}.covariance.json"
        with open(side, "w", encoding="utf-8") as fh:
            json.dump(extras, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {side}")
    return 0


def _cmd_indicators(args):
    config = _build_config(args)
    wd = config.drive_angular_frequency
    pair = mode_pair(wd, args.detuning_frac * wd)
    if args.dump_ladder:
        row = solve_scattering(config, pair.omega_minus)
        dump_ladder_system(config, pair.omega_minus, args.dump_ladder,
                           half_width=row.truncation)
        print(f"wrote {args.dump_ladder}")
    moments = output_moments(config, pair, method=args.method)
    report = indicators_from_moments(moments, pair)
    data = report.to_dict()
    width = max(len(label) for _, label in _TABLE_ROWS)
    for key, label in _TABLE_ROWS:
        value = data[key]
        text = f"{value:.9g}" if isinstance(value, float) else str(value)
        print(f"{label:<{width}}  {text}")
    if args.output:
        row = evaluate_point(config, pair, method=args.method)
        emit([row], SWEEP_COLUMNS, args.output_format, args.output,
             standard_metadata(config, detuning_frac=args.detuning_frac,
                               method=args.method))
        print(f"wrote {args.output}")
    return 0


def _cmd_estimate(args):
    config = _build_config(args)
    wd = config.drive_angular_frequency
    pair = mode_pair(wd, args.detuning_frac * wd)
    records = load_quadrature_records(args.records, calibration=args.calibration)
    report = bootstrap_indicators(records, pair, resamples=args.resamples,
                                  seed=args.seed)
    for name in ("fdf_min", "sigma2", "sigma2_threshold", "logneg"):
        lo, hi = report.intervals[name]
        print(f"{name:<16}  {report.point[name]: .9g}  "
              f"+- {report.stderr[name]:.3g}  [{lo:.9g}, {hi:.9g}]")
    print(f"resamples={report.resamples} seed={report.seed} "
          f"samples={report.sample_count}")
    if args.output:
        payload = {"metadata": standard_metadata(
            config, seed=args.seed, detuning_frac=args.detuning_frac,
            records=args.records), "estimate": report.to_dict()}
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {args.output}")
    return 0


def main(argv=None):
    args = _parser().parse_args(argv)
    handler = {
        "sweep": _cmd_sweep,
        "figure": _cmd_figure,
        "indicators": _cmd_indicators,
        "estimate": _cmd_estimate,
    }[args.command]
    try:
        return handler(args)
    except (SweepPointError, ConvergenceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
