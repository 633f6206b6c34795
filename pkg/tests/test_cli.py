import json
import subprocess
import sys

import pytest

from hybridnav.cli import main
from hybridnav.geo import MapPoint, save_reference_pair
from hybridnav.radio import AccessPoint, RadioEnvironment, Wall, save_environment
from hybridnav.simulator import (
    DEFAULT_GEO_ANCHOR,
    Trajectory,
    TrajectoryPoint,
    save_grid,
    save_trajectory,
)
from hybridnav.switcher import load_fixes

P = MapPoint


@pytest.fixture
def workspace(tmp_path):
    """Environment, survey grid, trajectory and refs for a small building."""
    room = (P(5, -5), P(25, -5), P(25, 20), P(5, 20))
    env = RadioEnvironment(
        aps=(
            AccessPoint("ap1", P(6, 0), -40.0, 2.5, sigma_db=2.0),
            AccessPoint("ap2", P(24, 0), -40.0, 2.5, sigma_db=2.0),
            AccessPoint("ap3", P(15, 18), -40.0, 2.5, sigma_db=2.0),
        ),
        walls=(Wall(P(15, -5), P(15, 20), 3.1),),
        indoor_regions=(room,),
        body_attenuation_db=5.0,
    )
    save_environment(env, tmp_path / "env.json")
    grid = [
        (f"g{ix}{iy}", P(6.0 + 3.0 * ix, -4.0 + 3.0 * iy))
        for ix in range(6)
        for iy in range(8)
    ]
    save_grid(grid, tmp_path / "grid.csv")
    traj = Trajectory(
        (
            TrajectoryPoint(0, P(-10.0, 5.0), 90.0),
            TrajectoryPoint(30_000, P(20.0, 5.0), 90.0),
        )
    )
    save_trajectory(traj, tmp_path / "traj.csv")
    save_reference_pair(DEFAULT_GEO_ANCHOR, tmp_path / "refs.json")
    return tmp_path


def run_pipeline(ws, seed=11):
    assert main(["survey", "--env", str(ws / "env.json"), "--grid", str(ws / "grid.csv"),
                 "--out", str(ws / "map.csv"), "--seed", "7", "--samples", "3"]) == 0
    assert main(["simulate", "--env", str(ws / "env.json"), "--trajectory", str(ws / "traj.csv"),
                 "--trace-out", str(ws / "trace.csv"), "--truth-out", str(ws / "truth.csv"),
                 "--refs", str(ws / "refs.json"), "--seed", str(seed)]) == 0
    assert main(["locate", "--trace", str(ws / "trace.csv"), "--radio-map", str(ws / "map.csv"),
                 "--refs", str(ws / "refs.json"), "--out", str(ws / "fixes.csv")]) == 0


def test_full_pipeline(workspace, capsys):
    run_pipeline(workspace)
    rc = main([
        "evaluate", "--fixes", str(workspace / "fixes.csv"), "--truth", str(workspace / "truth.csv"),
        "--threshold", "2.9", "--threshold", "3.4",
        "--json-out", str(workspace / "stats.json"),
        "--errors-out", str(workspace / "errors.csv"),
        "--cdf-out", str(workspace / "cdf.csv"),
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("error_m")
    assert "average_m" in out

    doc = json.loads((workspace / "stats.json").read_text())
    assert doc["n"] == len(load_fixes(workspace / "fixes.csv"))
    assert set(doc["fraction_below"]) == {"2.9", "3.4"}
    assert (workspace / "errors.csv").read_text().splitlines()[0] == "epoch_ms,error_m"
    assert (workspace / "cdf.csv").read_text().splitlines()[0] == "threshold_m,fraction"


def test_fix_sources_flip_indoors(workspace):
    run_pipeline(workspace)
    fixes = load_fixes(workspace / "fixes.csv")
    sources = [f.source.value for f in fixes]
    assert sources[0] == "GPS"
    assert sources[-1] == "WLAN"
    flips = sum(1 for a, b in zip(sources, sources[1:]) if a != b)
    assert flips == 1


def test_outputs_are_byte_identical_across_runs(workspace):
    ws = workspace
    for suffix in ("a", "b"):
        assert main(["survey", "--env", str(ws / "env.json"), "--grid", str(ws / "grid.csv"),
                     "--out", str(ws / f"map_{suffix}.csv"), "--seed", "7"]) == 0
        assert main(["simulate", "--env", str(ws / "env.json"),
                     "--trajectory", str(ws / "traj.csv"),
                     "--trace-out", str(ws / f"trace_{suffix}.csv"),
                     "--truth-out", str(ws / f"truth_{suffix}.csv"), "--seed", "3"]) == 0
    assert (ws / "map_a.csv").read_bytes() == (ws / "map_b.csv").read_bytes()
    assert (ws / "trace_a.csv").read_bytes() == (ws / "trace_b.csv").read_bytes()
    assert (ws / "truth_a.csv").read_bytes() == (ws / "truth_b.csv").read_bytes()


def test_missing_input_exits_2(workspace, capsys):
    rc = main(["locate", "--trace", str(workspace / "missing.csv"),
               "--radio-map", str(workspace / "also_missing.csv"),
               "--refs", str(workspace / "refs.json"), "--out", str(workspace / "x.csv")])
    assert rc == 2
    assert "missing.csv" in capsys.readouterr().err


def test_malformed_file_exits_2(workspace, capsys):
    bad = workspace / "bad_env.json"
    bad.write_text("{not json")
    rc = main(["survey", "--env", str(bad), "--grid", str(workspace / "grid.csv"),
               "--out", str(workspace / "m.csv"), "--seed", "1"])
    assert rc == 2
    assert "bad_env.json" in capsys.readouterr().err


def test_out_of_order_trace_exits_3(workspace, capsys):
    run_pipeline(workspace)
    trace = workspace / "trace.csv"
    lines = trace.read_text().splitlines()
    # swap two epoch groups to break time order
    lines.append(lines[1])
    trace.write_text("\n".join(lines) + "\n")
    rc = main(["locate", "--trace", str(trace), "--radio-map", str(workspace / "map.csv"),
               "--refs", str(workspace / "refs.json"), "--out", str(workspace / "f.csv")])
    assert rc == 3
    assert "epoch" in capsys.readouterr().err


def test_unaligned_truth_exits_3(workspace, capsys):
    run_pipeline(workspace)
    truth = workspace / "truth.csv"
    lines = truth.read_text().splitlines()
    truth.write_text("\n".join(lines[:3]) + "\n")  # drop most epochs
    rc = main(["evaluate", "--fixes", str(workspace / "fixes.csv"), "--truth", str(truth)])
    assert rc == 3
    assert "ground-truth" in capsys.readouterr().err


def test_seed_is_required():
    with pytest.raises(SystemExit) as exc:
        main(["survey", "--env", "e.json", "--grid", "g.csv", "--out", "m.csv"])
    assert exc.value.code == 2


def test_bad_k_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["locate", "--trace", "t.csv", "--radio-map", "m.csv", "--refs", "r.json",
              "--out", "o.csv", "--k", "0"])
    assert exc.value.code == 2


def test_help_documents_formats():
    for sub, fragment in [
        ("survey", "location_id,x_m,y_m,orientation_deg,ap_id,mean_dbm,stddev_db,sample_count"),
        ("simulate", "epoch_ms,kind,f1,f2,f3"),
        ("locate", "epoch_ms,source,x,y"),
        ("evaluate", "epoch_ms,x_m,y_m"),
    ]:
        proc = subprocess.run(
            [sys.executable, "-m", "hybridnav", sub, "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert fragment in proc.stdout


def test_console_entry_point_runs(workspace):
    # The installed script speaks the same CLI as python -m hybridnav.
    proc = subprocess.run(
        [sys.executable, "-m", "hybridnav", "survey",
         "--env", str(workspace / "env.json"), "--grid", str(workspace / "grid.csv"),
         "--out", str(workspace / "map_sub.csv"), "--seed", "7", "--samples", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    run_pipeline(workspace)
    assert (workspace / "map_sub.csv").read_bytes() == (workspace / "map.csv").read_bytes()


def test_emit_last_known_fills_gaps(workspace):
    run_pipeline(workspace)
    assert main(["locate", "--trace", str(workspace / "trace.csv"),
                 "--radio-map", str(workspace / "map.csv"),
                 "--refs", str(workspace / "refs.json"),
                 "--out", str(workspace / "fixes_filled.csv"), "--emit-last-known"]) == 0
    plain = load_fixes(workspace / "fixes.csv")
    filled = load_fixes(workspace / "fixes_filled.csv")
    assert len(filled) > len(plain)
    assert {f.epoch_ms for f in plain} <= {f.epoch_ms for f in filled}
