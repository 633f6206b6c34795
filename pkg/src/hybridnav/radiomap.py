"""Offline-phase radio map: per-location, per-orientation RSSI statistics.

Survey samples are grouped by (location, orientation, access point) and
reduced to mean / population standard deviation / count.  Orientation is
part of the fingerprint key because received strength depends on which
way the surveyor faced; the online matcher is free to search across all
orientations.
"""

import csv
import math
from dataclasses import dataclass

from .errors import ConsistencyError, InputError
from .geo import MapPoint

ORIENTATIONS = (0, 90, 180, 270)

RADIO_MAP_HEADER = "location_id,x_m,y_m,orientation_deg,ap_id,mean_dbm,stddev_db,sample_count"

RSSI_MIN_DBM = -120.0
RSSI_MAX_DBM = 0.0


@dataclass(frozen=True)
class RssiSample:
    """One surveyed RSSI observation."""

    location_id: str
    position: MapPoint
    orientation_deg: int
    ap_id: str
    rssi_dbm: float

    def __post_init__(self):
        if self.orientation_deg not in ORIENTATIONS:
            raise ValueError(
                f"orientation must be one of {ORIENTATIONS}, got {self.orientation_deg}"
            )
        if not RSSI_MIN_DBM <= self.rssi_dbm <= RSSI_MAX_DBM:
            raise ValueError(f"rssi {self.rssi_dbm} dBm outside [{RSSI_MIN_DBM}, {RSSI_MAX_DBM}]")


@dataclass(frozen=True)
class ApStats:
    mean_dbm: float
    stddev_db: float
    sample_count: int

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if self.stddev_db < 0:
            raise ValueError("stddev_db must be >= 0")


@dataclass(frozen=True)
class Fingerprint:
    """Recorded per-AP statistics for one (location, orientation)."""

    location_id: str
    position: MapPoint
    orientation_deg: int
    ap_stats: dict[str, ApStats]

    @property
    def key(self) -> tuple[str, int]:
        return (self.location_id, self.orientation_deg)


@dataclass(frozen=True)
class RadioMap:
    """Immutable fingerprint database; safe to share across readers."""

    fingerprints: tuple[Fingerprint, ...]
    ap_ids: frozenset[str]

    def __post_init__(self):
        if not self.fingerprints:
            raise ValueError("radio map must contain at least one fingerprint")
        keys = [fp.key for fp in self.fingerprints]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (location, orientation) fingerprints")
        for fp in self.fingerprints:
            extra = set(fp.ap_stats) - self.ap_ids
            if extra:
                raise ValueError(f"fingerprint {fp.key} references unknown APs {sorted(extra)}")

    def __len__(self) -> int:
        return len(self.fingerprints)


def _population_stats(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(var)


def build_radio_map(samples) -> RadioMap:
    """Reduce raw survey samples to a RadioMap.

    The result is independent of sample order: fingerprints are sorted by
    (location_id, orientation_deg).  All samples for one location_id must
    share one position.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("cannot build a radio map from zero samples")

    positions: dict[str, MapPoint] = {}
    for s in samples:
        prev = positions.setdefault(s.location_id, s.position)
        if prev != s.position:
            raise ConsistencyError(
                f"location {s.location_id!r} has conflicting positions "
                f"({prev.x}, {prev.y}) and ({s.position.x}, {s.position.y})"
            )

    grouped: dict[tuple[str, int], dict[str, list[float]]] = {}
    for s in samples:
        grouped.setdefault((s.location_id, s.orientation_deg), {}).setdefault(
            s.ap_id, []
        ).append(s.rssi_dbm)

    fingerprints = []
    for (loc, orient) in sorted(grouped):
        per_ap = grouped[(loc, orient)]
        stats = {}
        for ap_id in sorted(per_ap):
            mean, std = _population_stats(per_ap[ap_id])
            stats[ap_id] = ApStats(mean_dbm=mean, stddev_db=std, sample_count=len(per_ap[ap_id]))
        fingerprints.append(
            Fingerprint(
                location_id=loc,
                position=positions[loc],
                orientation_deg=orient,
                ap_stats=stats,
            )
        )
    ap_ids = frozenset(s.ap_id for s in samples)
    return RadioMap(fingerprints=tuple(fingerprints), ap_ids=ap_ids)


def save_radio_map(radio_map: RadioMap, path) -> None:
    """Write the radio-map CSV (UTF-8, LF, '.' decimals, repr floats).

    Rows are sorted by (location_id, orientation_deg, ap_id) so identical
    maps always serialize to identical bytes.
    """
    with open(str(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(RADIO_MAP_HEADER.split(","))
        for fp in sorted(radio_map.fingerprints, key=lambda fp: fp.key):
            for ap_id in sorted(fp.ap_stats):
                st = fp.ap_stats[ap_id]
                writer.writerow(
                    [
                        fp.location_id,
                        repr(fp.position.x),
                        repr(fp.position.y),
                        fp.orientation_deg,
                        ap_id,
                        repr(st.mean_dbm),
                        repr(st.stddev_db),
                        st.sample_count,
                    ]
                )


def load_radio_map(path) -> RadioMap:
    """Read a radio-map CSV back into a RadioMap.

    Round-trips save_radio_map exactly (repr-formatted floats parse back
    bit-identical).  Malformed or duplicate rows are rejected with their
    line number.
    """
    path = str(path)
    rows = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty radio-map file") from None
        if header != RADIO_MAP_HEADER.split(","):
            raise InputError(
                f"{path}:1: bad header {','.join(header)!r}, expected {RADIO_MAP_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 8:
                raise InputError(f"{path}:{lineno}: expected 8 columns, got {len(row)}")
            try:
                loc = row[0]
                pos = MapPoint(float(row[1]), float(row[2]))
                orient = int(row[3])
                ap_id = row[4]
                stats = ApStats(
                    mean_dbm=float(row[5]),
                    stddev_db=float(row[6]),
                    sample_count=int(row[7]),
                )
            except ValueError as e:
                raise InputError(f"{path}:{lineno}: {e}") from e
            if orient not in ORIENTATIONS:
                raise InputError(
                    f"{path}:{lineno}: orientation must be one of {ORIENTATIONS}, got {orient}"
                )
            rows.append((lineno, loc, pos, orient, ap_id, stats))

    if not rows:
        raise InputError(f"{path}: radio-map file has no data rows")

    seen: dict[tuple[str, int, str], int] = {}
    positions: dict[str, tuple[int, MapPoint]] = {}
    grouped: dict[tuple[str, int], dict[str, ApStats]] = {}
    for lineno, loc, pos, orient, ap_id, stats in rows:
        key = (loc, orient, ap_id)
        if key in seen:
            raise InputError(
                f"{path}:{lineno}: duplicate row for {key} (first seen at line {seen[key]})"
            )
        seen[key] = lineno
        if loc in positions:
            first_line, first_pos = positions[loc]
            if first_pos != pos:
                raise InputError(
                    f"{path}:{lineno}: location {loc!r} position differs from line {first_line}"
                )
        else:
            positions[loc] = (lineno, pos)
        grouped.setdefault((loc, orient), {})[ap_id] = stats

    fingerprints = tuple(
        Fingerprint(
            location_id=loc,
            position=positions[loc][1],
            orientation_deg=orient,
            ap_stats=dict(sorted(grouped[(loc, orient)].items())),
        )
        for (loc, orient) in sorted(grouped)
    )
    ap_ids = frozenset(ap_id for (_, _, _, _, ap_id, _) in rows)
    return RadioMap(fingerprints=fingerprints, ap_ids=ap_ids)
