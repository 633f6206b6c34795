"""Regenerate the demo inputs under data/.

The demo site is a single 30 x 20 m building with one RF-relevant interior
wall and three access points. The survey grid covers the interior on a 3 m
pitch and the walk starts outdoors, enters through the west side, and loops
through the north gap where the interior wall ends.

Run from the repo root:

    python3 scripts/make_demo_inputs.py
"""

import argparse
import pathlib

from hybridnav.geo import GeoCoordinate, MapPoint, ReferencePair, save_reference_pair
from hybridnav.radio import AccessPoint, RadioEnvironment, Wall, save_environment
from hybridnav.simulator import Trajectory, TrajectoryPoint, save_grid, save_trajectory

P = MapPoint

BUILDING = (P(0.0, 0.0), P(30.0, 0.0), P(30.0, 20.0), P(0.0, 20.0))


def demo_environment():
    return RadioEnvironment(
        aps=(
            AccessPoint("ap-west", P(5.0, 5.0), p0_dbm=-38.5, n=2.8, sigma_db=3.0),
            AccessPoint("ap-east", P(25.0, 5.0), p0_dbm=-39.0, n=3.1, sigma_db=3.0),
            AccessPoint("ap-north", P(15.0, 18.0), p0_dbm=-37.5, n=2.6, sigma_db=3.0),
        ),
        walls=(Wall(P(15.0, 0.0), P(15.0, 14.0), waf_db=3.1),),
        indoor_regions=(BUILDING,),
        body_attenuation_db=5.0,
    )


def demo_grid():
    # interior points only, 3 m pitch, skipping the wall line itself
    points = []
    for ix, x in enumerate(range(2, 30, 3)):
        for iy, y in enumerate(range(2, 20, 3)):
            points.append((f"wp-{ix}-{iy}", P(float(x), float(y))))
    return points


def demo_trajectory():
    return Trajectory(
        (
            TrajectoryPoint(0, P(-8.0, 10.0), 90.0),
            TrajectoryPoint(16_000, P(8.0, 10.0), 90.0),
            TrajectoryPoint(22_000, P(8.0, 16.0), 0.0),
            TrajectoryPoint(36_000, P(22.0, 16.0), 90.0),
            TrajectoryPoint(46_000, P(22.0, 6.0), 180.0),
        )
    )


def demo_refs():
    # campus frame: 1e-5 degrees per metre on both axes, latitude along x
    return ReferencePair(
        a_geo=GeoCoordinate(1.5575444, 103.6365806),
        a_map=P(0.0, 0.0),
        b_geo=GeoCoordinate(1.5585444, 103.6370806),
        b_map=P(100.0, 50.0),
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default="data", type=pathlib.Path)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    save_environment(demo_environment(), args.out_dir / "example_env.json")
    save_grid(demo_grid(), args.out_dir / "example_grid.csv")
    save_trajectory(demo_trajectory(), args.out_dir / "example_trajectory.csv")
    save_reference_pair(demo_refs(), args.out_dir / "example_refs.json")
    for name in ("example_env.json", "example_grid.csv",
                 "example_trajectory.csv", "example_refs.json"):
        print(f"wrote {args.out_dir / name}")


if __name__ == "__main__":
    main()
