"""Online-phase matching: nearest neighbor(s) in signal space.

A live scan (ap_id -> rssi_dbm) is compared against every fingerprint in
the radio map by Euclidean distance over a shared AP universe.  APs
absent from a scan or a fingerprint contribute a floor value, not zero:
an unheard AP is evidence of weak signal, and 0 dBm would be the
strongest possible reading.

The universe is the union of the map's APs and the scan's APs.  Scan-only
APs add the same squared term to every fingerprint's distance, so the
ranking is identical to the map-only universe; they are kept so reported
distances account for the whole scan.
"""

import math
from collections.abc import Mapping
from dataclasses import dataclass

from .geo import MapPoint
from .radiomap import RSSI_MAX_DBM, RSSI_MIN_DBM, Fingerprint, RadioMap

DEFAULT_FLOOR_DBM = -100.0


@dataclass(frozen=True)
class RssiScan:
    """One epoch's WLAN observation set."""

    epoch_ms: int
    readings: dict

    def __post_init__(self):
        if not self.readings:
            raise ValueError("scan must contain at least one reading")
        for ap_id, rssi in self.readings.items():
            if not RSSI_MIN_DBM <= rssi <= RSSI_MAX_DBM:
                raise ValueError(
                    f"rssi {rssi} dBm for {ap_id!r} outside [{RSSI_MIN_DBM}, {RSSI_MAX_DBM}]"
                )


@dataclass(frozen=True)
class Contribution:
    """One fingerprint's entry in a KNN result."""

    location_id: str
    orientation_deg: int
    signal_distance: float
    position: MapPoint


@dataclass(frozen=True)
class MatchResult:
    position: MapPoint
    contributing: tuple[Contribution, ...]

    @property
    def k_used(self) -> int:
        return len(self.contributing)

    @property
    def best(self) -> Contribution:
        return self.contributing[0]


def euclidean(p: MapPoint, q: MapPoint) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def _readings(scan) -> Mapping:
    if isinstance(scan, RssiScan):
        return scan.readings
    if isinstance(scan, Mapping):
        return scan
    raise TypeError(f"scan must be an RssiScan or a mapping, got {type(scan).__name__}")


def signal_distance(scan, fingerprint: Fingerprint, ap_universe, floor_dbm: float = DEFAULT_FLOOR_DBM) -> float:
    """Euclidean distance in dB space over `ap_universe`.

    A reading missing on either side (unheard AP in the scan, or AP never
    recorded at this fingerprint) substitutes floor_dbm.
    """
    obs = _readings(scan)
    total = 0.0
    for ap_id in ap_universe:
        observed = obs.get(ap_id, floor_dbm)
        stats = fingerprint.ap_stats.get(ap_id)
        recorded = stats.mean_dbm if stats is not None else floor_dbm
        total += (observed - recorded) ** 2
    return math.sqrt(total)


def rank_fingerprints(scan, radio_map: RadioMap, floor_dbm: float = DEFAULT_FLOOR_DBM) -> list[Contribution]:
    """All fingerprints ordered by signal distance.

    Ties break on (location_id, orientation_deg) so the ranking depends
    only on (scan, map) content, never on storage order.
    """
    universe = sorted(radio_map.ap_ids | set(_readings(scan)))
    entries = [
        Contribution(
            location_id=fp.location_id,
            orientation_deg=fp.orientation_deg,
            signal_distance=signal_distance(scan, fp, universe, floor_dbm),
            position=fp.position,
        )
        for fp in radio_map.fingerprints
    ]
    entries.sort(key=lambda c: (c.signal_distance, c.location_id, c.orientation_deg))
    return entries


def knn_locate(scan, radio_map: RadioMap, k: int = 1, floor_dbm: float = DEFAULT_FLOOR_DBM) -> MatchResult:
    """Estimate a position for one scan.

    k = 1 is plain nearest neighbor in signal space; k > 1 averages the
    map coordinates of the k closest fingerprints (unweighted centroid).
    k beyond the number of fingerprints is clamped.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ranked = rank_fingerprints(scan, radio_map, floor_dbm)
    if not ranked:
        raise ValueError("cannot locate against an empty radio map")
    k = min(k, len(ranked))
    chosen = tuple(ranked[:k])
    x = math.fsum(c.position.x for c in chosen) / k
    y = math.fsum(c.position.y for c in chosen) / k
    return MatchResult(position=MapPoint(x, y), contributing=chosen)
