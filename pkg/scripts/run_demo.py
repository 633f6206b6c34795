"""End-to-end demo: survey, simulate, locate, evaluate on the data/ site.

Drives the same entry point as the installed `hybridnav` command, so the
files left under --out-dir match what the CLI walkthrough in the README
produces. Reruns with the same seeds are byte-identical.
"""

import argparse
import pathlib
import sys

from hybridnav.cli import main as cli


def run(argv):
    print("$ hybridnav " + " ".join(argv))
    rc = cli(argv)
    if rc != 0:
        sys.exit(rc)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", default="data", type=pathlib.Path)
    parser.add_argument("--out-dir", default="runs/demo", type=pathlib.Path)
    parser.add_argument("--survey-seed", default=101, type=int)
    parser.add_argument("--walk-seed", default=202, type=int)
    parser.add_argument("--k", default=3, type=int)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    data, out = args.data_dir, args.out_dir

    run(["survey",
         "--env", str(data / "example_env.json"),
         "--grid", str(data / "example_grid.csv"),
         "--out", str(out / "radio_map.csv"),
         "--seed", str(args.survey_seed)])
    run(["simulate",
         "--env", str(data / "example_env.json"),
         "--trajectory", str(data / "example_trajectory.csv"),
         "--refs", str(data / "example_refs.json"),
         "--trace-out", str(out / "trace.csv"),
         "--truth-out", str(out / "truth.csv"),
         "--seed", str(args.walk_seed)])
    run(["locate",
         "--trace", str(out / "trace.csv"),
         "--radio-map", str(out / "radio_map.csv"),
         "--refs", str(data / "example_refs.json"),
         "--k", str(args.k),
         "--out", str(out / "fixes.csv")])
    run(["evaluate",
         "--fixes", str(out / "fixes.csv"),
         "--truth", str(out / "truth.csv"),
         "--threshold", "5.0",
         "--json-out", str(out / "stats.json"),
         "--errors-out", str(out / "errors.csv"),
         "--cdf-out", str(out / "cdf.csv")])
    print(f"\nartifacts in {out}/")


if __name__ == "__main__":
    main()
