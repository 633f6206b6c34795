"""Acceptance gate: one test per release criterion.

Each test prints a single [acceptance] PASS line (visible with -s) and
enforces its own wall-clock budget.  These are end-to-end checks against
independent oracles, not unit tests; the unit suites live next door.
"""

import json
import math
import statistics
import time

import numpy as np

from hybridnav.cli import main
from hybridnav.evaluation import per_fix_errors, summarize
from hybridnav.geo import (
    GeoCoordinate,
    MapPoint,
    ReferencePair,
    interpolate_map_position,
    parse_dms,
    save_reference_pair,
)
from hybridnav.matcher import knn_locate
from hybridnav.radio import (
    AccessPoint,
    RadioEnvironment,
    Wall,
    invert_distance,
    predict_rssi,
    save_environment,
)
from hybridnav.radiomap import ApStats, Fingerprint, RadioMap, build_radio_map
from hybridnav.simulator import (
    DEFAULT_GEO_ANCHOR,
    SimConfig,
    Trajectory,
    TrajectoryPoint,
    generate_trace,
    save_grid,
    save_trajectory,
    survey,
)
from hybridnav.switcher import Source, run_session

P = MapPoint


class Budget:
    def __init__(self, seconds):
        self.limit = seconds
        self.t0 = time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.t0
        assert elapsed < self.limit, f"budget exceeded: {elapsed:.2f}s >= {self.limit}s"
        return elapsed


def announce(n, name, budget):
    elapsed = budget.check()
    print(f"[acceptance] criterion {n} ({name}): PASS ({elapsed:.2f}s)")


def test_criterion_1_bucket_probabilities(tmp_path, capsys):
    budget = Budget(1.0)
    counts = (11, 17, 61, 51, 33, 27)
    reps = (0.5, 1.5, 3.0, 5.0, 7.0, 9.0)
    errors = [r for r, c in zip(reps, counts) for _ in range(c)]
    assert len(errors) == 200

    stats = summarize(errors)
    assert stats.buckets == counts
    for got, count in zip(stats.probabilities, counts):
        assert abs(got - count / 200.0) <= 1e-9

    # Same numbers through the command line: craft fixes/truth whose
    # per-epoch distances are exactly the error list above.
    fixes_path = tmp_path / "fixes.csv"
    truth_path = tmp_path / "truth.csv"
    fixes_path.write_text(
        "epoch_ms,source,x,y\n"
        + "".join(f"{i},WLAN,{e!r},0.0\n" for i, e in enumerate(errors))
    )
    truth_path.write_text(
        "epoch_ms,x_m,y_m\n" + "".join(f"{i},0.0,0.0\n" for i in range(200))
    )
    rc = main(["evaluate", "--fixes", str(fixes_path), "--truth", str(truth_path),
               "--json-out", str(tmp_path / "stats.json")])
    assert rc == 0
    capsys.readouterr()
    doc = json.loads((tmp_path / "stats.json").read_text())
    assert doc["bucket_counts"] == list(counts)
    for got, count in zip(doc["bucket_probabilities"], counts):
        assert abs(got - count / 200.0) <= 1e-9

    # The average path is validated on a list whose mean is known in
    # closed form (the published bucket table does not determine a mean).
    six = summarize([0.5, 1.5, 3.0, 5.0, 7.0, 9.0])
    assert abs(six.average_m - 26.0 / 6.0) <= 1e-9

    announce(1, "bucket probabilities", budget)


def test_criterion_2_interpolation_anchoring():
    budget = Budget(1.0)
    refs = ReferencePair(
        a_geo=GeoCoordinate(parse_dms('1°33\'27.16"N'), parse_dms('103°38\'11.69"E')),
        a_map=P(1842.0, 1140.0),
        b_geo=GeoCoordinate(parse_dms('1°33\'45.84"N'), parse_dms('103°38\'13.82"E')),
        b_map=P(2112.0, 1156.0),
    )
    pa = interpolate_map_position(refs.a_geo, refs)
    pb = interpolate_map_position(refs.b_geo, refs)
    assert (pa.x, pa.y) == (1842.0, 1140.0)
    assert (pb.x, pb.y) == (2112.0, 1156.0)

    dlat = refs.b_geo.lat_deg - refs.a_geo.lat_deg
    dlon = refs.b_geo.lon_deg - refs.a_geo.lon_deg
    rng = np.random.default_rng(2024)
    for t in rng.uniform(-1.0, 2.0, size=1000):
        c = GeoCoordinate(refs.a_geo.lat_deg + t * dlat, refs.a_geo.lon_deg + t * dlon)
        p = interpolate_map_position(c, refs)
        assert abs(p.x - (1842.0 + t * 270.0)) <= 1e-9
        assert abs(p.y - (1140.0 + t * 16.0)) <= 1e-9

    announce(2, "interpolation anchoring", budget)


def test_criterion_3_path_loss_roundtrip():
    budget = Budget(5.0)
    rng = np.random.default_rng(31415)
    cases = 10_000
    for _ in range(cases):
        d = float(rng.uniform(1.0, 1000.0))
        n = float(rng.uniform(1.0, 5.0))
        waf = float(rng.uniform(0.0, 30.0))
        ap = AccessPoint(id="ap", position=P(0.0, 0.0), p0_dbm=-40.0, n=n, sigma_db=0.0)
        wall = Wall(P(d / 2.0, -1.0), P(d / 2.0, 1.0), waf_db=waf)
        rssi = predict_rssi(ap, P(d, 0.0), walls=(wall,))
        recovered = invert_distance(rssi, ap, total_waf_db=waf)
        assert abs(recovered - d) / d <= 1e-9

    announce(3, "path-loss roundtrip", budget)


def _oracle_knn(scan, radio_map, k, floor=-100.0):
    # Brute force: full sort of every fingerprint, no shared code paths.
    universe = set(radio_map.ap_ids) | set(scan)
    rows = []
    for fp in radio_map.fingerprints:
        acc = 0.0
        for ap in universe:
            lhs = scan.get(ap, floor)
            rhs = fp.ap_stats[ap].mean_dbm if ap in fp.ap_stats else floor
            acc += (lhs - rhs) ** 2
        rows.append((math.sqrt(acc), fp.location_id, fp.orientation_deg, fp.position))
    rows.sort(key=lambda r: r[:3])
    top = rows[: min(k, len(rows))]
    x = sum(r[3].x for r in top) / len(top)
    y = sum(r[3].y for r in top) / len(top)
    return x, y, [(r[1], r[2]) for r in top]


def test_criterion_4_matcher_oracle_equivalence():
    budget = Budget(10.0)
    rng = np.random.default_rng(271828)
    ap_pool = ["ap0", "ap1", "ap2", "ap3", "ap4"]
    orients = [0, 90, 180, 270]

    for _ in range(100):
        n_fp = int(rng.integers(1, 51))
        fps = []
        for i in range(n_fp):
            n_aps = int(rng.integers(1, 6))
            chosen = rng.choice(5, size=n_aps, replace=False)
            stats = {
                ap_pool[j]: ApStats(float(rng.uniform(-100.0, -25.0)), 0.0, 1)
                for j in sorted(chosen)
            }
            fps.append(
                Fingerprint(
                    location_id=f"L{i:03d}",
                    position=P(float(rng.uniform(0, 40)), float(rng.uniform(0, 40))),
                    orientation_deg=int(rng.choice(orients)),
                    ap_stats=stats,
                )
            )
        rm = RadioMap(
            fingerprints=tuple(fps),
            ap_ids=frozenset(ap for fp in fps for ap in fp.ap_stats),
        )
        for _ in range(100):
            n_read = int(rng.integers(1, 6))
            read_aps = [ap_pool[j] for j in rng.choice(5, size=n_read, replace=False)]
            if rng.random() < 0.2:
                read_aps.append("rogue")  # AP the survey never saw
            scan = {ap: float(rng.uniform(-100.0, -25.0)) for ap in read_aps}
            for k in (1, 2, 3):
                got = knn_locate(scan, rm, k=k)
                ox, oy, okeys = _oracle_knn(scan, rm, k)
                assert [(c.location_id, c.orientation_deg) for c in got.contributing] == okeys
                assert abs(got.position.x - ox) <= 1e-9
                assert abs(got.position.y - oy) <= 1e-9

    announce(4, "matcher oracle equivalence", budget)


def _indoor_median_error(sigma_db, n_seeds=20):
    room = (P(0.0, 0.0), P(16.0, 0.0), P(16.0, 12.0), P(0.0, 12.0))
    env = RadioEnvironment(
        aps=(
            AccessPoint("ap1", P(1.0, 1.0), -40.0, 2.5, sigma_db=sigma_db),
            AccessPoint("ap2", P(15.0, 1.0), -40.0, 2.5, sigma_db=sigma_db),
            AccessPoint("ap3", P(8.0, 11.0), -40.0, 2.5, sigma_db=sigma_db),
        ),
        indoor_regions=(room,),
        body_attenuation_db=5.0,
    )
    grid = [
        (f"g{ix}{iy}", P(1.0 + 2.0 * ix, 1.0 + 2.0 * iy))
        for ix in range(8)
        for iy in range(6)
    ]
    traj = Trajectory(
        (
            TrajectoryPoint(0, P(2.0, 2.0), 90.0),
            TrajectoryPoint(20_000, P(14.0, 6.0), 90.0),
            TrajectoryPoint(40_000, P(3.0, 10.0), 270.0),
        )
    )
    errors = []
    for s in range(n_seeds):
        samples = survey(env, grid, samples_per_point=3, cfg=SimConfig(seed=1000 + s))
        rm = build_radio_map(samples)
        trace, truth = generate_trace(env, traj, SimConfig(seed=2000 + s))
        fixes = run_session(trace, DEFAULT_GEO_ANCHOR, rm, k=1)
        assert all(f.source is Source.WLAN for f in fixes)  # fully indoors
        errors.extend(per_fix_errors(fixes, truth))
    return statistics.median(errors)


def test_criterion_5_end_to_end_simulation_sanity():
    budget = Budget(60.0)
    med = {sigma: _indoor_median_error(sigma) for sigma in (0.0, 1.5, 3.0)}
    assert med[3.0] < 10.0, f"median at sigma=3 is {med[3.0]:.2f} m"
    assert med[0.0] < med[1.5] < med[3.0], f"medians not monotone: {med}"

    announce(5, "end-to-end simulation sanity", budget)


def test_criterion_6_switching_behavior():
    budget = Budget(1.0)
    # Building occupies x >= 15; the walk crosses the doorway at t = 15 s.
    room = (P(15.0, -50.0), P(80.0, -50.0), P(80.0, 50.0), P(15.0, 50.0))
    env = RadioEnvironment(
        aps=(
            AccessPoint("ap1", P(20.0, 0.0), -40.0, 2.5, sigma_db=2.0),
            AccessPoint("ap2", P(40.0, 5.0), -40.0, 2.5, sigma_db=2.0),
            AccessPoint("ap3", P(30.0, -5.0), -40.0, 2.5, sigma_db=2.0),
        ),
        indoor_regions=(room,),
        body_attenuation_db=5.0,
    )
    traj = Trajectory(
        (TrajectoryPoint(0, P(0.0, 0.0), 90.0), TrajectoryPoint(30_000, P(30.0, 0.0), 90.0))
    )
    grid = [(f"g{i}", P(16.0 + 2.0 * i, 0.0)) for i in range(8)]
    rm = build_radio_map(survey(env, grid, samples_per_point=3, cfg=SimConfig(seed=5)))
    trace, _ = generate_trace(env, traj, SimConfig(seed=6))

    timeout = 3
    fixes = run_session(trace, DEFAULT_GEO_ANCHOR, rm, k=1, gps_timeout_epochs=timeout)
    by_epoch = {e.epoch_ms: e for e in trace}

    # no WLAN fix wherever GPS was valid
    for f in fixes:
        if by_epoch[f.epoch_ms].gps.valid:
            assert f.source is Source.GPS

    sources = [f.source for f in fixes]
    transitions = [
        (a, b) for a, b in zip(sources, sources[1:]) if a is not b
    ]
    assert transitions == [(Source.GPS, Source.WLAN)]  # exactly one handover

    # the debounce gap: exactly timeout - 1 silent epochs at the boundary
    first_wlan = next(f for f in fixes if f.source is Source.WLAN)
    last_gps = max(f.epoch_ms for f in fixes if f.source is Source.GPS)
    fix_epochs = {f.epoch_ms for f in fixes}
    gap = [
        e.epoch_ms
        for e in trace
        if last_gps < e.epoch_ms < first_wlan.epoch_ms and e.epoch_ms not in fix_epochs
    ]
    assert len(gap) == timeout - 1

    announce(6, "switching behavior", budget)


def test_criterion_7_orientation_effect():
    budget = Budget(5.0)
    body_db = 5.0
    env = RadioEnvironment(
        aps=(AccessPoint("ap1", P(0.0, 10.0), -40.0, 2.0, sigma_db=3.0),),
        body_attenuation_db=body_db,
    )
    # 0 deg faces +y (toward the AP), 180 deg faces away from it.
    samples = survey(
        env,
        [("spot", P(0.0, 0.0))],
        orientations=(0, 180),
        samples_per_point=1000,
        cfg=SimConfig(seed=77),
    )
    ahead = [s.rssi_dbm for s in samples if s.orientation_deg == 0]
    behind = [s.rssi_dbm for s in samples if s.orientation_deg == 180]
    assert len(ahead) == len(behind) == 1000
    diff = statistics.fmean(ahead) - statistics.fmean(behind)
    assert abs(diff - body_db) <= 0.5, f"mean difference {diff:.3f} dB not within 0.5 of {body_db}"

    announce(7, "orientation effect", budget)


def test_criterion_8_determinism(tmp_path):
    budget = Budget(5.0)
    room = (P(5.0, -5.0), P(25.0, -5.0), P(25.0, 20.0), P(5.0, 20.0))
    env = RadioEnvironment(
        aps=(
            AccessPoint("ap1", P(6.0, 0.0), -40.0, 2.5, sigma_db=2.0),
            AccessPoint("ap2", P(24.0, 0.0), -40.0, 2.5, sigma_db=2.0),
            AccessPoint("ap3", P(15.0, 18.0), -40.0, 2.5, sigma_db=2.0),
        ),
        indoor_regions=(room,),
        body_attenuation_db=5.0,
    )
    save_environment(env, tmp_path / "env.json")
    save_grid([(f"g{i}", P(6.0 + 2.0 * i, 1.0)) for i in range(10)], tmp_path / "grid.csv")
    save_trajectory(
        Trajectory(
            (TrajectoryPoint(0, P(-5.0, 5.0), 90.0), TrajectoryPoint(20_000, P(20.0, 5.0), 90.0))
        ),
        tmp_path / "traj.csv",
    )
    save_reference_pair(DEFAULT_GEO_ANCHOR, tmp_path / "refs.json")

    for run in ("a", "b"):
        assert main(["survey", "--env", str(tmp_path / "env.json"),
                     "--grid", str(tmp_path / "grid.csv"),
                     "--out", str(tmp_path / f"map_{run}.csv"), "--seed", "42"]) == 0
        assert main(["simulate", "--env", str(tmp_path / "env.json"),
                     "--trajectory", str(tmp_path / "traj.csv"),
                     "--trace-out", str(tmp_path / f"trace_{run}.csv"),
                     "--truth-out", str(tmp_path / f"truth_{run}.csv"),
                     "--refs", str(tmp_path / "refs.json"), "--seed", "43"]) == 0
    assert (tmp_path / "map_a.csv").read_bytes() == (tmp_path / "map_b.csv").read_bytes()
    assert (tmp_path / "trace_a.csv").read_bytes() == (tmp_path / "trace_b.csv").read_bytes()
    assert (tmp_path / "truth_a.csv").read_bytes() == (tmp_path / "truth_b.csv").read_bytes()

    announce(8, "determinism", budget)
