"""Sweep the shadowing level and report indoor error quantiles.

For each sigma the demo site is resurveyed and the demo walk replayed with
fresh seeds, so the numbers show how log-normal shadowing alone degrades
fingerprinting accuracy. Only fixes produced while the walker is inside the
building are scored; outdoor epochs are positioned by simulated GPS and
would dilute the comparison.

    python3 scripts/shadowing_sweep.py --seeds 10 --sigmas 0,1.5,3,4.5
"""

import argparse
import dataclasses
import pathlib
import statistics

from hybridnav.evaluation import fraction_below, per_fix_errors
from hybridnav.geo import load_reference_pair
from hybridnav.geometry import point_in_polygon
from hybridnav.radio import load_environment
from hybridnav.radiomap import build_radio_map
from hybridnav.simulator import SimConfig, load_grid, load_trajectory, generate_trace, survey
from hybridnav.switcher import Source, run_session


def with_sigma(env, sigma_db):
    aps = tuple(dataclasses.replace(ap, sigma_db=sigma_db) for ap in env.aps)
    return dataclasses.replace(env, aps=aps)


def indoor_errors(env, grid, traj, refs, seed):
    samples = survey(env, grid, samples_per_point=3, cfg=SimConfig(seed=seed))
    radio_map = build_radio_map(samples)
    trace, truth = generate_trace(env, traj, SimConfig(seed=seed + 1, geo_anchor=refs))
    fixes = run_session(trace, refs, radio_map, k=3)
    truth_by_epoch = dict(truth)
    keep = [
        f for f in fixes
        if f.source is Source.WLAN
        and any(point_in_polygon(truth_by_epoch[f.epoch_ms], r) for r in env.indoor_regions)
    ]
    return per_fix_errors(keep, truth)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", default="data", type=pathlib.Path)
    parser.add_argument("--seeds", default=10, type=int)
    parser.add_argument("--sigmas", default="0,1.5,3,4.5",
                        type=lambda s: [float(v) for v in s.split(",")])
    args = parser.parse_args()

    base_env = load_environment(args.data_dir / "example_env.json")
    grid = load_grid(args.data_dir / "example_grid.csv")
    traj = load_trajectory(args.data_dir / "example_trajectory.csv")
    refs = load_reference_pair(args.data_dir / "example_refs.json")

    print(f"{'sigma_db':>8}  {'n':>5}  {'median_m':>8}  {'p90_m':>8}  {'<5m':>6}")
    for sigma in args.sigmas:
        env = with_sigma(base_env, sigma)
        errors = []
        for s in range(args.seeds):
            errors.extend(indoor_errors(env, grid, traj, refs, seed=7000 + 17 * s))
        errors.sort()
        p90 = errors[int(0.9 * (len(errors) - 1))]
        print(f"{sigma:>8.1f}  {len(errors):>5d}  {statistics.median(errors):>8.2f}"
              f"  {p90:>8.2f}  {fraction_below(errors, 5.0):>6.2f}")


if __name__ == "__main__":
    main()
