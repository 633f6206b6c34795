"""Wall-attenuated log-distance path-loss model and its inverse.

Received power at distance d from an access point:

    rssi = p0_dbm - 10 * n * log10(d / d0_m) - sum(WAF over crossed walls) + X

where X is zero-mean Gaussian shadowing with the AP's sigma_db, drawn
from a caller-supplied noise source (or 0 when none is given).  The
distance inversion is the exact base-10 algebraic inverse of that model.
Receivers closer than d0_m are clamped to d0_m, where the model is
anchored.
"""

import json
import math
from dataclasses import dataclass

from .errors import InputError
from .geo import MapPoint
from .geometry import polygon_is_simple, segments_properly_intersect

DEFAULT_WAF_DB = 3.1
DEFAULT_SIGMA_DB = 3.0
DEFAULT_BODY_ATTENUATION_DB = 5.0


@dataclass(frozen=True)
class AccessPoint:
    """A transmitter with its path-loss parameters (position in meters)."""

    id: str
    position: MapPoint
    p0_dbm: float
    n: float
    d0_m: float = 1.0
    sigma_db: float = DEFAULT_SIGMA_DB

    def __post_init__(self):
        if not self.id:
            raise ValueError("access point id must be non-empty")
        if self.d0_m <= 0:
            raise ValueError(f"ap {self.id!r}: d0_m must be > 0, got {self.d0_m}")
        if self.n <= 0:
            raise ValueError(f"ap {self.id!r}: path-loss exponent must be > 0, got {self.n}")
        if self.sigma_db < 0:
            raise ValueError(f"ap {self.id!r}: sigma_db must be >= 0, got {self.sigma_db}")
        if not -100.0 <= self.p0_dbm <= 0.0:
            raise ValueError(f"ap {self.id!r}: p0_dbm {self.p0_dbm} outside [-100, 0]")


@dataclass(frozen=True)
class Wall:
    """An attenuating wall segment; waf_db is the penalty per crossing."""

    p1: MapPoint
    p2: MapPoint
    waf_db: float = DEFAULT_WAF_DB

    def __post_init__(self):
        if self.p1 == self.p2:
            raise ValueError("wall endpoints must differ")
        if self.waf_db < 0:
            raise ValueError(f"waf_db must be >= 0, got {self.waf_db}")


@dataclass(frozen=True)
class RadioEnvironment:
    """The RF world: access points, walls and GPS-denied indoor polygons."""

    aps: tuple[AccessPoint, ...]
    walls: tuple[Wall, ...] = ()
    indoor_regions: tuple[tuple[MapPoint, ...], ...] = ()
    body_attenuation_db: float = DEFAULT_BODY_ATTENUATION_DB

    def __post_init__(self):
        ids = [ap.id for ap in self.aps]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate access point ids: {dupes}")
        for poly in self.indoor_regions:
            if len(poly) < 3:
                raise ValueError("indoor region needs at least 3 vertices")
            if not polygon_is_simple(poly):
                raise ValueError("indoor region polygon is self-intersecting")
        if self.body_attenuation_db < 0:
            raise ValueError("body_attenuation_db must be >= 0")


def count_walls(src: MapPoint, dst: MapPoint, walls) -> tuple[int, float]:
    """Count walls properly crossed by the open segment src-dst.

    Returns (count, summed waf_db).  Endpoint touches and collinear
    overlaps do not count as crossings.
    """
    count = 0
    total_waf = 0.0
    for wall in walls:
        if segments_properly_intersect(src, dst, wall.p1, wall.p2):
            count += 1
            total_waf += wall.waf_db
    return count, total_waf


def predict_rssi(ap: AccessPoint, receiver: MapPoint, walls=(), rng=None) -> float:
    """Received power in dBm at the receiver from this access point.

    ``rng`` is an optional noise source with a ``normal(mean, sigma)``
    method (e.g. a seeded numpy Generator); when given, one shadowing
    draw with the AP's sigma_db is added, otherwise the prediction is
    deterministic.  The return value is not clamped to any RSSI range.
    """
    d = math.hypot(receiver.x - ap.position.x, receiver.y - ap.position.y)
    d = max(d, ap.d0_m)
    _, total_waf = count_walls(ap.position, receiver, walls)
    shadowing = rng.normal(0.0, ap.sigma_db) if rng is not None else 0.0
    return ap.p0_dbm - 10.0 * ap.n * math.log10(d / ap.d0_m) - total_waf + shadowing


def invert_distance(rssi_dbm: float, ap: AccessPoint, total_waf_db: float = 0.0) -> float:
    """Distance in meters implied by an RSSI reading (no shadowing term).

    Exact algebraic inverse of predict_rssi's deterministic part:
    d = d0 * 10 ** ((p0 - rssi - total_waf) / (10 n)).  Any real RSSI
    yields a positive distance.
    """
    exponent = (ap.p0_dbm - rssi_dbm - total_waf_db) / (10.0 * ap.n)
    return ap.d0_m * 10.0**exponent


def _require(obj: dict, key: str, context: str, path: str):
    if key not in obj:
        raise InputError(f"{path}: {context} missing key {key!r}")
    return obj[key]


def load_environment(path) -> RadioEnvironment:
    """Read a RadioEnvironment JSON file.

    Schema: ``{"aps": [{"id","x","y","p0_dbm","d0_m","n","sigma_db"}],
    "walls": [{"x1","y1","x2","y2","waf_db"}],
    "indoor_regions": [[[x,y],...]], "body_attenuation_db": num}``.
    d0_m, sigma_db, waf_db and body_attenuation_db may be omitted and take
    the module defaults.
    """
    path = str(path)
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}: invalid JSON: {e.msg}") from e
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")

    try:
        aps = []
        for i, entry in enumerate(doc.get("aps", [])):
            ctx = f"aps[{i}]"
            aps.append(
                AccessPoint(
                    id=str(_require(entry, "id", ctx, path)),
                    position=MapPoint(
                        float(_require(entry, "x", ctx, path)),
                        float(_require(entry, "y", ctx, path)),
                    ),
                    p0_dbm=float(_require(entry, "p0_dbm", ctx, path)),
                    n=float(_require(entry, "n", ctx, path)),
                    d0_m=float(entry.get("d0_m", 1.0)),
                    sigma_db=float(entry.get("sigma_db", DEFAULT_SIGMA_DB)),
                )
            )
        walls = []
        for i, entry in enumerate(doc.get("walls", [])):
            ctx = f"walls[{i}]"
            walls.append(
                Wall(
                    p1=MapPoint(
                        float(_require(entry, "x1", ctx, path)),
                        float(_require(entry, "y1", ctx, path)),
                    ),
                    p2=MapPoint(
                        float(_require(entry, "x2", ctx, path)),
                        float(_require(entry, "y2", ctx, path)),
                    ),
                    waf_db=float(entry.get("waf_db", DEFAULT_WAF_DB)),
                )
            )
        regions = tuple(
            tuple(MapPoint(float(v[0]), float(v[1])) for v in poly)
            for poly in doc.get("indoor_regions", [])
        )
        env = RadioEnvironment(
            aps=tuple(aps),
            walls=tuple(walls),
            indoor_regions=regions,
            body_attenuation_db=float(
                doc.get("body_attenuation_db", DEFAULT_BODY_ATTENUATION_DB)
            ),
        )
    except (TypeError, ValueError, IndexError) as e:
        raise InputError(f"{path}: {e}") from e
    if not env.aps:
        raise InputError(f"{path}: environment declares no access points")
    return env


def save_environment(env: RadioEnvironment, path) -> None:
    doc = {
        "aps": [
            {
                "id": ap.id,
                "x": ap.position.x,
                "y": ap.position.y,
                "p0_dbm": ap.p0_dbm,
                "n": ap.n,
                "d0_m": ap.d0_m,
                "sigma_db": ap.sigma_db,
            }
            for ap in env.aps
        ],
        "walls": [
            {"x1": w.p1.x, "y1": w.p1.y, "x2": w.p2.x, "y2": w.p2.y, "waf_db": w.waf_db}
            for w in env.walls
        ],
        "indoor_regions": [[[v.x, v.y] for v in poly] for poly in env.indoor_regions],
        "body_attenuation_db": env.body_attenuation_db,
    }
    with open(str(path), "w", encoding="utf-8", newline="\n") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
