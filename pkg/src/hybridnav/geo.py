"""Geodetic input parsing and two-anchor relative interpolation.

An outdoor map window is georeferenced by two anchor points with known
latitude/longitude and window coordinates.  Positions are mapped linearly
between the anchors: the latitude ratio scales the x axis and the
longitude ratio scales the y axis.  Anchor pairs must be chosen with that
axis assignment in mind; there is no projection or datum handling, the
mapping is purely affine and extrapolates freely beyond the anchors.
"""

import json
import math
import re
from dataclasses import dataclass

from .errors import DmsParseError, GeometryError, InputError

# D°MM'SS.SS"H with ASCII fallbacks d/m/s for the degree/minute/second marks.
_DMS_RE = re.compile(
    r"^\s*(?P<deg>\d+)\s*[°d]\s*(?P<min>\d+)\s*['m]\s*"
    r"(?P<sec>\d+(?:\.\d+)?)\s*[\"s]\s*(?P<hemi>[NSEW])\s*$"
)

_HEMISPHERE_SIGN = {"N": 1.0, "S": -1.0, "E": 1.0, "W": -1.0}
_HEMISPHERE_BOUND = {"N": 90.0, "S": 90.0, "E": 180.0, "W": 180.0}


@dataclass(frozen=True)
class GeoCoordinate:
    """Latitude/longitude in signed decimal degrees."""

    lat_deg: float
    lon_deg: float

    def __post_init__(self):
        if not (math.isfinite(self.lat_deg) and math.isfinite(self.lon_deg)):
            raise ValueError("coordinate components must be finite")
        if not -90.0 <= self.lat_deg <= 90.0:
            raise ValueError(f"latitude {self.lat_deg} outside [-90, 90]")
        if not -180.0 <= self.lon_deg <= 180.0:
            raise ValueError(f"longitude {self.lon_deg} outside [-180, 180]")


@dataclass(frozen=True)
class MapPoint:
    """A point in map units: window pixels outdoors, meters indoors."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("map coordinates must be finite")


@dataclass(frozen=True)
class ReferencePair:
    """Two anchors tying the geodetic frame to the map window frame."""

    a_geo: GeoCoordinate
    a_map: MapPoint
    b_geo: GeoCoordinate
    b_map: MapPoint

    def __post_init__(self):
        if self.a_geo.lat_deg == self.b_geo.lat_deg:
            raise GeometryError("reference anchors share the same latitude")
        if self.a_geo.lon_deg == self.b_geo.lon_deg:
            raise GeometryError("reference anchors share the same longitude")


def parse_dms(text: str) -> float:
    """Parse a D°MM'SS.SS"H string into signed decimal degrees.

    Hemisphere letters S and W produce negative values.  ASCII markers
    d/m/s are accepted in place of the degree, minute and second symbols.
    Raises DmsParseError naming the offending field on bad input.
    """
    m = _DMS_RE.match(text)
    if m is None:
        raise DmsParseError(
            f"malformed DMS string {text!r}: expected D°MM'SS.SS\"H with H in N/S/E/W"
        )
    degrees = int(m.group("deg"))
    minutes = int(m.group("min"))
    seconds = float(m.group("sec"))
    hemi = m.group("hemi")

    if not 0 <= minutes < 60:
        raise DmsParseError(f"minutes out of range [0, 60) in {text!r}: {minutes}")
    if not 0.0 <= seconds < 60.0:
        raise DmsParseError(f"seconds out of range [0, 60) in {text!r}: {seconds}")
    bound = _HEMISPHERE_BOUND[hemi]
    if degrees > bound:
        raise DmsParseError(
            f"degrees out of range for hemisphere {hemi} in {text!r}: {degrees} > {bound:g}"
        )
    value = degrees + minutes / 60.0 + seconds / 3600.0
    if value > bound:
        raise DmsParseError(
            f"degrees out of range for hemisphere {hemi} in {text!r}: {value!r} > {bound:g}"
        )
    return _HEMISPHERE_SIGN[hemi] * value


def format_dms(value_deg: float, axis: str = "lat") -> str:
    """Format decimal degrees as D°MM'SS.SS…"H (inverse of parse_dms).

    ``axis`` selects the hemisphere letters: "lat" gives N/S, "lon" gives
    E/W.  Seconds carry up to 7 decimal places so that
    parse_dms(format_dms(x)) recovers x to well within 1e-9 degrees.
    """
    if axis == "lat":
        hemi = "N" if value_deg >= 0 else "S"
        bound = 90.0
    elif axis == "lon":
        hemi = "E" if value_deg >= 0 else "W"
        bound = 180.0
    else:
        raise ValueError(f"axis must be 'lat' or 'lon', got {axis!r}")
    mag = abs(value_deg)
    if not math.isfinite(mag) or mag > bound:
        raise ValueError(f"{axis} value {value_deg!r} outside ±{bound:g}")

    degrees = int(mag)
    rem_min = (mag - degrees) * 60.0
    minutes = int(rem_min)
    seconds = (rem_min - minutes) * 60.0
    # Rounding seconds can carry all the way up to the degrees field.
    seconds = round(seconds, 7)
    if seconds >= 60.0:
        seconds -= 60.0
        minutes += 1
    if minutes >= 60:
        minutes -= 60
        degrees += 1

    sec_str = f"{seconds:.7f}".rstrip("0")
    if sec_str.endswith("."):
        sec_str += "0"
    frac = sec_str.split(".", 1)[1]
    if len(frac) < 2:
        sec_str += "0" * (2 - len(frac))
    return f"{degrees}°{minutes}'{sec_str}\"{hemi}"


def interpolate_map_position(c_geo: GeoCoordinate, refs: ReferencePair) -> MapPoint:
    """Map a geodetic position onto the window via the two anchors.

    Latitude drives x and longitude drives y.  Positions outside the
    anchor span extrapolate along the same line.
    """
    dlat = refs.b_geo.lat_deg - refs.a_geo.lat_deg
    dlon = refs.b_geo.lon_deg - refs.a_geo.lon_deg
    if dlat == 0.0 or dlon == 0.0:
        raise GeometryError("degenerate reference pair: zero latitude or longitude span")
    t_lat = (c_geo.lat_deg - refs.a_geo.lat_deg) / dlat
    t_lon = (c_geo.lon_deg - refs.a_geo.lon_deg) / dlon
    x = refs.a_map.x + t_lat * (refs.b_map.x - refs.a_map.x)
    y = refs.a_map.y + t_lon * (refs.b_map.y - refs.a_map.y)
    return MapPoint(x, y)


def geo_from_map_position(p: MapPoint, refs: ReferencePair) -> GeoCoordinate:
    """Inverse of interpolate_map_position (map window back to lat/lon)."""
    dx = refs.b_map.x - refs.a_map.x
    dy = refs.b_map.y - refs.a_map.y
    if dx == 0.0 or dy == 0.0:
        raise GeometryError("reference anchors share a map coordinate; cannot invert")
    t_x = (p.x - refs.a_map.x) / dx
    t_y = (p.y - refs.a_map.y) / dy
    lat = refs.a_geo.lat_deg + t_x * (refs.b_geo.lat_deg - refs.a_geo.lat_deg)
    lon = refs.a_geo.lon_deg + t_y * (refs.b_geo.lon_deg - refs.a_geo.lon_deg)
    return GeoCoordinate(lat, lon)


def _anchor_from_json(obj: dict, label: str, path: str) -> tuple[GeoCoordinate, MapPoint]:
    try:
        lat = parse_dms(str(obj["lat_dms"]))
        lon = parse_dms(str(obj["lon_dms"]))
        point = MapPoint(float(obj["x"]), float(obj["y"]))
    except KeyError as e:
        raise InputError(f"{path}: anchor {label!r} missing key {e.args[0]!r}") from e
    except (TypeError, ValueError, DmsParseError) as e:
        raise InputError(f"{path}: anchor {label!r}: {e}") from e
    return GeoCoordinate(lat, lon), point


def load_reference_pair(path) -> ReferencePair:
    """Read a reference-pair JSON file.

    Schema: ``{"a": {"lat_dms", "lon_dms", "x", "y"}, "b": {...}}`` with
    DMS-formatted coordinate strings.
    """
    path = str(path)
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}: invalid JSON: {e.msg}") from e
    if not isinstance(doc, dict) or "a" not in doc or "b" not in doc:
        raise InputError(f"{path}: expected a JSON object with anchors 'a' and 'b'")
    a_geo, a_map = _anchor_from_json(doc["a"], "a", path)
    b_geo, b_map = _anchor_from_json(doc["b"], "b", path)
    return ReferencePair(a_geo=a_geo, a_map=a_map, b_geo=b_geo, b_map=b_map)


def save_reference_pair(refs: ReferencePair, path) -> None:
    doc = {
        "a": {
            "lat_dms": format_dms(refs.a_geo.lat_deg, "lat"),
            "lon_dms": format_dms(refs.a_geo.lon_deg, "lon"),
            "x": refs.a_map.x,
            "y": refs.a_map.y,
        },
        "b": {
            "lat_dms": format_dms(refs.b_geo.lat_deg, "lat"),
            "lon_dms": format_dms(refs.b_geo.lon_deg, "lon"),
            "x": refs.b_map.x,
            "y": refs.b_map.y,
        },
    }
    with open(str(path), "w", encoding="utf-8", newline="\n") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")
