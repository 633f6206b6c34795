"""Command line front end: survey, simulate, locate, evaluate.

One executable walks the whole workflow over plain CSV/JSON files:

    hybridnav survey    -> radio-map CSV from a synthetic site survey
    hybridnav simulate  -> sensor trace + ground truth along a trajectory
    hybridnav locate    -> position fixes by replaying a trace
    hybridnav evaluate  -> error statistics from fixes vs ground truth

Exit codes: 0 success, 2 unusable input (missing files, parse errors,
bad arguments), 3 inconsistent data (out-of-order epochs, unmatched
ground truth).  Stochastic subcommands require an explicit --seed; given
the same inputs and seed they produce byte-identical outputs.
"""

import argparse
import sys

from .errors import DataError, InputError
from .evaluation import (
    ERRORS_HEADER,
    format_table,
    per_fix_errors,
    save_cdf_csv,
    save_errors_csv,
    save_stats_json,
    summarize,
)
from .geo import load_reference_pair
from .matcher import DEFAULT_FLOOR_DBM
from .radio import load_environment
from .radiomap import RADIO_MAP_HEADER, build_radio_map, load_radio_map, save_radio_map
from .simulator import (
    DEFAULT_GEO_ANCHOR,
    GRID_HEADER,
    TRAJECTORY_HEADER,
    TRUTH_HEADER,
    SimConfig,
    generate_trace,
    load_grid,
    load_trajectory,
    load_truth,
    save_truth,
    survey,
)
from .switcher import (
    DEFAULT_GPS_TIMEOUT_EPOCHS,
    FIXES_HEADER,
    TRACE_HEADER,
    load_fixes,
    load_trace,
    run_session,
    save_fixes,
    save_trace,
)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def cmd_survey(args) -> int:
    env = load_environment(args.env)
    grid = load_grid(args.grid)
    samples = survey(
        env, grid, samples_per_point=args.samples, cfg=SimConfig(seed=args.seed)
    )
    save_radio_map(build_radio_map(samples), args.out)
    return 0


def cmd_simulate(args) -> int:
    env = load_environment(args.env)
    traj = load_trajectory(args.trajectory)
    anchor = load_reference_pair(args.refs) if args.refs else DEFAULT_GEO_ANCHOR
    cfg = SimConfig(
        seed=args.seed,
        epoch_period_ms=args.period_ms,
        gps_noise_m=args.gps_noise_m,
        geo_anchor=anchor,
    )
    trace, truth = generate_trace(env, traj, cfg)
    save_trace(trace, args.trace_out)
    save_truth(truth, args.truth_out)
    return 0


def cmd_locate(args) -> int:
    trace = load_trace(args.trace)
    radio_map = load_radio_map(args.radio_map)
    refs = load_reference_pair(args.refs)
    fixes = run_session(
        trace,
        refs,
        radio_map,
        k=args.k,
        floor_dbm=args.floor_dbm,
        gps_timeout_epochs=args.gps_timeout,
        emit_last_known=args.emit_last_known,
    )
    save_fixes(fixes, args.out)
    return 0


def cmd_evaluate(args) -> int:
    fixes = load_fixes(args.fixes)
    truth = load_truth(args.truth)
    if not fixes:
        raise InputError(f"{args.fixes}: no fixes to evaluate")
    errors = per_fix_errors(fixes, truth)
    stats = summarize(errors, thresholds=args.threshold)
    sys.stdout.write(format_table(stats))
    if args.json_out:
        save_stats_json(stats, args.json_out)
    if args.errors_out:
        save_errors_csv(zip((f.epoch_ms for f in fixes), errors), args.errors_out)
    if args.cdf_out:
        save_cdf_csv(errors, args.cdf_out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridnav",
        description="Hybrid GPS/WLAN positioning over CSV traces.",
        epilog="Exit codes: 0 ok, 2 input error, 3 data-consistency error.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser(
        "survey",
        help="simulate a site survey and build a radio map",
        description="Simulate an offline site survey over a point grid and "
        "write the resulting radio map.",
        epilog=f"Grid CSV header: {GRID_HEADER!r}. "
        f"Radio-map CSV header: {RADIO_MAP_HEADER!r}.",
    )
    p.add_argument("--env", required=True, help="radio environment JSON")
    p.add_argument("--grid", required=True, help="survey point grid CSV")
    p.add_argument("--out", required=True, help="radio-map CSV to write")
    p.add_argument("--seed", required=True, type=int, help="PRNG seed (required)")
    p.add_argument(
        "--samples",
        type=_positive_int,
        default=5,
        help="samples per point/orientation/AP (default 5)",
    )
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser(
        "simulate",
        help="generate a sensor trace and ground truth along a trajectory",
        description="Walk a trajectory through the environment, emitting GPS "
        "readings (denied inside indoor regions) and per-AP RSSI scans.",
        epilog=f"Trajectory CSV header: {TRAJECTORY_HEADER!r}. "
        f"Trace CSV header: {TRACE_HEADER!r}. Truth CSV header: {TRUTH_HEADER!r}.",
    )
    p.add_argument("--env", required=True, help="radio environment JSON")
    p.add_argument("--trajectory", required=True, help="trajectory waypoint CSV")
    p.add_argument("--trace-out", required=True, help="sensor trace CSV to write")
    p.add_argument("--truth-out", required=True, help="ground-truth CSV to write")
    p.add_argument("--seed", required=True, type=int, help="PRNG seed (required)")
    p.add_argument(
        "--refs",
        help="reference-pair JSON mapping lat/lon to map units "
        "(default: built-in anchor, 1e-5 degrees per map unit)",
    )
    p.add_argument("--period-ms", type=_positive_int, default=1000, help="epoch period (default 1000)")
    p.add_argument(
        "--gps-noise-m", type=float, default=3.0, help="GPS planar noise stddev (default 3.0)"
    )
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "locate",
        help="replay a trace through the hybrid switcher",
        description="Replay a sensor trace: valid GPS epochs fix via anchor "
        "interpolation, sustained GPS loss hands over to WLAN fingerprint "
        "matching against the radio map.",
        epilog=f"Trace CSV header: {TRACE_HEADER!r}. Fixes CSV header: {FIXES_HEADER!r}.",
    )
    p.add_argument("--trace", required=True, help="sensor trace CSV")
    p.add_argument("--radio-map", required=True, help="radio-map CSV")
    p.add_argument("--refs", required=True, help="reference-pair JSON")
    p.add_argument("--out", required=True, help="fixes CSV to write")
    p.add_argument("--k", type=_positive_int, default=1, help="KNN neighbor count (default 1)")
    p.add_argument(
        "--floor-dbm",
        type=float,
        default=DEFAULT_FLOOR_DBM,
        help="substitute for unheard APs (default %(default)s)",
    )
    p.add_argument(
        "--gps-timeout",
        type=_positive_int,
        default=DEFAULT_GPS_TIMEOUT_EPOCHS,
        help="consecutive GPS misses before WLAN handover (default %(default)s)",
    )
    p.add_argument(
        "--emit-last-known",
        action="store_true",
        help="repeat the last fix during debounce gaps instead of staying silent",
    )
    p.set_defaults(func=cmd_locate)

    p = sub.add_parser(
        "evaluate",
        help="compare fixes against ground truth",
        description="Match fixes to ground-truth epochs and print bucketed "
        "error statistics; buckets are half-open [lo, hi) meters.",
        epilog=f"Fixes CSV header: {FIXES_HEADER!r}. Truth CSV header: {TRUTH_HEADER!r}. "
        f"Optional outputs: stats JSON, {ERRORS_HEADER!r} CSV, CDF CSV.",
    )
    p.add_argument("--fixes", required=True, help="fixes CSV from locate")
    p.add_argument("--truth", required=True, help="ground-truth CSV")
    p.add_argument(
        "--threshold",
        type=float,
        action="append",
        default=[],
        help="report fraction of errors strictly below this (repeatable)",
    )
    p.add_argument("--json-out", help="write full-precision stats JSON here")
    p.add_argument("--errors-out", help="write per-epoch error CSV here")
    p.add_argument("--cdf-out", help="write empirical CDF CSV here")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"hybridnav: error: {e}", file=sys.stderr)
        return 2
    except DataError as e:
        print(f"hybridnav: error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"hybridnav: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
