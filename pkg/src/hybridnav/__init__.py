"""Hybrid GPS/WLAN positioning: anchored outdoor mapping, indoor RSSI
fingerprinting, and the switching logic that picks between them."""

from .errors import (
    AlignmentError,
    ConsistencyError,
    DataError,
    DmsParseError,
    GeometryError,
    InputError,
    PositioningError,
    SequencingError,
)
from .evaluation import ErrorStats, fraction_below, per_fix_errors, summarize
from .geo import (
    GeoCoordinate,
    MapPoint,
    ReferencePair,
    format_dms,
    geo_from_map_position,
    interpolate_map_position,
    parse_dms,
)
from .matcher import MatchResult, RssiScan, euclidean, knn_locate, signal_distance
from .radio import (
    AccessPoint,
    RadioEnvironment,
    Wall,
    count_walls,
    invert_distance,
    predict_rssi,
)
from .radiomap import Fingerprint, RadioMap, RssiSample, build_radio_map
from .simulator import SimConfig, Trajectory, TrajectoryPoint, generate_trace, survey
from .switcher import (
    Mode,
    PositionFix,
    SensorEpoch,
    Source,
    SwitchState,
    run_session,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "AccessPoint",
    "AlignmentError",
    "ConsistencyError",
    "DataError",
    "DmsParseError",
    "ErrorStats",
    "Fingerprint",
    "GeoCoordinate",
    "GeometryError",
    "InputError",
    "MapPoint",
    "MatchResult",
    "Mode",
    "PositionFix",
    "PositioningError",
    "RadioEnvironment",
    "RadioMap",
    "ReferencePair",
    "RssiSample",
    "RssiScan",
    "SensorEpoch",
    "SequencingError",
    "SimConfig",
    "Source",
    "SwitchState",
    "Trajectory",
    "TrajectoryPoint",
    "Wall",
    "build_radio_map",
    "count_walls",
    "euclidean",
    "format_dms",
    "fraction_below",
    "generate_trace",
    "geo_from_map_position",
    "interpolate_map_position",
    "invert_distance",
    "knn_locate",
    "parse_dms",
    "per_fix_errors",
    "predict_rssi",
    "run_session",
    "signal_distance",
    "step",
    "summarize",
    "survey",
    "__version__",
]
