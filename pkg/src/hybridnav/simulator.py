"""Seeded generation of sensor traces, surveys and ground truth.

There is no real receiver hardware behind this package, so experiments
run against synthetic data with a strict determinism contract: one
integer seed drives a PCG64 stream, and the draw order is fixed and
documented.  Per trace epoch the order is GPS dx, GPS dy, then one
shadowing draw per access point in ascending id order.  GPS noise is
drawn even at epochs where GPS is denied, so the stream position never
depends on where the trajectory happens to be.  Surveys draw per point
(input order), per orientation (given order), per AP (ascending id),
samples innermost.

All draws are standard normal deviates scaled afterwards; a zero sigma
still consumes its draw, keeping stream positions config-independent.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .geo import GeoCoordinate, MapPoint, ReferencePair, geo_from_map_position
from .geometry import point_in_polygon
from .matcher import RssiScan
from .radio import RadioEnvironment, predict_rssi
from .radiomap import ORIENTATIONS, RssiSample
from .switcher import GpsReading, SensorEpoch

TRAJECTORY_HEADER = "epoch_ms,x_m,y_m,orientation_deg"
TRUTH_HEADER = "epoch_ms,x_m,y_m"
GRID_HEADER = "location_id,x_m,y_m"

# Identity-flavored anchor: 1 map meter = 1e-5 degrees on both axes, so a
# few hundred meters of trajectory stay within a fraction of a degree.
DEFAULT_GEO_ANCHOR = ReferencePair(
    a_geo=GeoCoordinate(0.0, 0.0),
    a_map=MapPoint(0.0, 0.0),
    b_geo=GeoCoordinate(0.01, 0.01),
    b_map=MapPoint(1000.0, 1000.0),
)


@dataclass(frozen=True)
class TrajectoryPoint:
    epoch_ms: int
    position: MapPoint
    orientation_deg: float

    def __post_init__(self):
        if not 0.0 <= self.orientation_deg < 360.0:
            raise ValueError(f"orientation {self.orientation_deg} outside [0, 360)")


@dataclass(frozen=True)
class Trajectory:
    """Waypoints with linear position interpolation between them.

    Orientation is held from the previous waypoint rather than angularly
    interpolated (a turn happens at a waypoint, not smoothly between
    two); position interpolates linearly.
    """

    waypoints: tuple[TrajectoryPoint, ...]

    def __post_init__(self):
        if not self.waypoints:
            raise ValueError("trajectory needs at least one waypoint")
        epochs = [w.epoch_ms for w in self.waypoints]
        if any(b <= a for a, b in zip(epochs, epochs[1:])):
            raise ValueError("trajectory epochs must be strictly increasing")

    @property
    def start_ms(self) -> int:
        return self.waypoints[0].epoch_ms

    @property
    def end_ms(self) -> int:
        return self.waypoints[-1].epoch_ms

    def sample(self, epoch_ms: int) -> tuple[MapPoint, float]:
        """Position and orientation at epoch_ms (clamped to the ends)."""
        wps = self.waypoints
        if epoch_ms <= wps[0].epoch_ms:
            return wps[0].position, wps[0].orientation_deg
        if epoch_ms >= wps[-1].epoch_ms:
            return wps[-1].position, wps[-1].orientation_deg
        for prev, nxt in zip(wps, wps[1:]):
            if epoch_ms < nxt.epoch_ms:
                t = (epoch_ms - prev.epoch_ms) / (nxt.epoch_ms - prev.epoch_ms)
                pos = MapPoint(
                    prev.position.x + t * (nxt.position.x - prev.position.x),
                    prev.position.y + t * (nxt.position.y - prev.position.y),
                )
                return pos, prev.orientation_deg
        return wps[-1].position, wps[-1].orientation_deg  # unreachable


@dataclass(frozen=True)
class SimConfig:
    seed: int
    epoch_period_ms: int = 1000
    gps_noise_m: float = 3.0
    rssi_floor_dbm: float = -120.0
    rssi_ceiling_dbm: float = 0.0
    geo_anchor: ReferencePair = field(default=DEFAULT_GEO_ANCHOR)

    def __post_init__(self):
        if self.epoch_period_ms <= 0:
            raise ValueError("epoch_period_ms must be > 0")
        if self.gps_noise_m < 0:
            raise ValueError("gps_noise_m must be >= 0")
        if self.rssi_floor_dbm >= self.rssi_ceiling_dbm:
            raise ValueError("rssi_floor_dbm must be below rssi_ceiling_dbm")


def body_attenuation(
    user_orientation_deg: float, user_pos: MapPoint, ap_pos: MapPoint, body_attenuation_db: float
) -> float:
    """Extra loss from the user's body blocking an AP behind them.

    Orientation is a compass bearing: 0 faces +y, 90 faces +x.  The AP is
    "behind" when the angle between the facing direction and the
    direction to the AP exceeds 90 degrees; exactly 90 stays unblocked.
    """
    if user_pos == ap_pos:
        raise ValueError("user and access point positions coincide")
    theta = math.radians(user_orientation_deg)
    facing = (math.sin(theta), math.cos(theta))
    to_ap = (ap_pos.x - user_pos.x, ap_pos.y - user_pos.y)
    dot = facing[0] * to_ap[0] + facing[1] * to_ap[1]
    return body_attenuation_db if dot < 0.0 else 0.0


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(max(value, lo), hi)


def _sorted_aps(env: RadioEnvironment):
    return sorted(env.aps, key=lambda ap: ap.id)


def _observed_rssi(env, ap, position, orientation_deg, z, cfg) -> float:
    """One simulated reading: path loss + walls + body blockage + scaled noise."""
    base = predict_rssi(ap, position, env.walls)
    if position != ap.position:
        base -= body_attenuation(orientation_deg, position, ap.position, env.body_attenuation_db)
    return _clamp(base + z * ap.sigma_db, cfg.rssi_floor_dbm, cfg.rssi_ceiling_dbm)


def generate_trace(
    env: RadioEnvironment, traj: Trajectory, cfg: SimConfig
) -> tuple[list[SensorEpoch], list[tuple[int, MapPoint]]]:
    """Walk the trajectory and synthesize what the sensors would report.

    Every epoch carries a GPS row (valid only outside every indoor
    region, with planar Gaussian noise mapped to lat/lon through
    cfg.geo_anchor) and one RSSI reading per AP, shadowed and clamped to
    [cfg.rssi_floor_dbm, cfg.rssi_ceiling_dbm].  Also returns the exact
    ground-truth positions for later error evaluation.
    """
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    aps = _sorted_aps(env)
    epochs: list[SensorEpoch] = []
    truth: list[tuple[int, MapPoint]] = []

    for epoch_ms in range(traj.start_ms, traj.end_ms + 1, cfg.epoch_period_ms):
        pos, orient = traj.sample(epoch_ms)
        indoor = any(point_in_polygon(pos, poly) for poly in env.indoor_regions)

        dx = rng.standard_normal() * cfg.gps_noise_m
        dy = rng.standard_normal() * cfg.gps_noise_m
        reported = MapPoint(pos.x + dx, pos.y + dy)
        gps = GpsReading(
            coordinate=geo_from_map_position(reported, cfg.geo_anchor), valid=not indoor
        )

        readings = {}
        for ap in aps:
            z = rng.standard_normal()
            readings[ap.id] = _observed_rssi(env, ap, pos, orient, z, cfg)

        epochs.append(
            SensorEpoch(
                epoch_ms=epoch_ms, gps=gps, wlan=RssiScan(epoch_ms=epoch_ms, readings=readings)
            )
        )
        truth.append((epoch_ms, pos))
    return epochs, truth


def survey(
    env: RadioEnvironment,
    grid,
    orientations=ORIENTATIONS,
    samples_per_point: int = 5,
    cfg: SimConfig | None = None,
    seed: int | None = None,
) -> list[RssiSample]:
    """Simulate the offline site survey over a grid of named points.

    ``grid`` is a sequence of (location_id, MapPoint).  Either pass a
    full SimConfig or just a seed.  Emits samples_per_point noisy
    readings per (point, orientation, AP), ready for build_radio_map.
    """
    if cfg is None:
        if seed is None:
            raise ValueError("survey needs a SimConfig or a seed")
        cfg = SimConfig(seed=seed)
    grid = list(grid)
    if not grid:
        raise ValueError("survey grid must be non-empty")
    if samples_per_point < 1:
        raise ValueError("samples_per_point must be >= 1")
    for orient in orientations:
        if orient not in ORIENTATIONS:
            raise ValueError(f"orientation {orient} not in {ORIENTATIONS}")

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    aps = _sorted_aps(env)
    samples: list[RssiSample] = []
    for location_id, pos in grid:
        for orient in orientations:
            for ap in aps:
                for _ in range(samples_per_point):
                    z = rng.standard_normal()
                    samples.append(
                        RssiSample(
                            location_id=location_id,
                            position=pos,
                            orientation_deg=orient,
                            ap_id=ap.id,
                            rssi_dbm=_observed_rssi(env, ap, pos, orient, z, cfg),
                        )
                    )
    return samples


# --- file formats owned by the simulator ------------------------------------


def save_trajectory(traj: Trajectory, path) -> None:
    with open(str(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER.split(","))
        for w in traj.waypoints:
            writer.writerow(
                [w.epoch_ms, repr(w.position.x), repr(w.position.y), repr(w.orientation_deg)]
            )


def load_trajectory(path) -> Trajectory:
    path = str(path)
    waypoints = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty trajectory file") from None
        if header != TRAJECTORY_HEADER.split(","):
            raise InputError(
                f"{path}:1: bad header {','.join(header)!r}, expected {TRAJECTORY_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise InputError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            try:
                waypoints.append(
                    TrajectoryPoint(
                        epoch_ms=int(row[0]),
                        position=MapPoint(float(row[1]), float(row[2])),
                        orientation_deg=float(row[3]),
                    )
                )
            except ValueError as e:
                raise InputError(f"{path}:{lineno}: {e}") from e
    try:
        return Trajectory(waypoints=tuple(waypoints))
    except ValueError as e:
        raise InputError(f"{path}: {e}") from e


def save_truth(truth, path) -> None:
    """Write (epoch_ms, MapPoint) ground truth as CSV."""
    with open(str(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRUTH_HEADER.split(","))
        for epoch_ms, pos in truth:
            writer.writerow([epoch_ms, repr(pos.x), repr(pos.y)])


def load_truth(path) -> list[tuple[int, MapPoint]]:
    path = str(path)
    truth: list[tuple[int, MapPoint]] = []
    seen: dict[int, int] = {}
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty truth file") from None
        if header != TRUTH_HEADER.split(","):
            raise InputError(
                f"{path}:1: bad header {','.join(header)!r}, expected {TRUTH_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise InputError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            try:
                epoch_ms = int(row[0])
                pos = MapPoint(float(row[1]), float(row[2]))
            except ValueError as e:
                raise InputError(f"{path}:{lineno}: {e}") from e
            if epoch_ms in seen:
                raise InputError(
                    f"{path}:{lineno}: duplicate truth epoch {epoch_ms} "
                    f"(first at line {seen[epoch_ms]})"
                )
            seen[epoch_ms] = lineno
            truth.append((epoch_ms, pos))
    return truth


def save_grid(grid, path) -> None:
    """Write (location_id, MapPoint) survey points as CSV."""
    with open(str(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(GRID_HEADER.split(","))
        for location_id, pos in grid:
            writer.writerow([location_id, repr(pos.x), repr(pos.y)])


def load_grid(path) -> list[tuple[str, MapPoint]]:
    path = str(path)
    grid: list[tuple[str, MapPoint]] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty grid file") from None
        if header != GRID_HEADER.split(","):
            raise InputError(
                f"{path}:1: bad header {','.join(header)!r}, expected {GRID_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise InputError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            location_id = row[0]
            if not location_id:
                raise InputError(f"{path}:{lineno}: empty location_id")
            if location_id in seen:
                raise InputError(
                    f"{path}:{lineno}: duplicate location_id {location_id!r} "
                    f"(first at line {seen[location_id]})"
                )
            seen[location_id] = lineno
            try:
                grid.append((location_id, MapPoint(float(row[1]), float(row[2]))))
            except ValueError as e:
                raise InputError(f"{path}:{lineno}: {e}") from e
    return grid
