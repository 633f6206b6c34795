"""Hybrid outdoor/indoor source selection.

A valid GPS reading always wins: the fix comes from two-anchor
interpolation and the machine is (or returns to) Outdoor immediately.
When GPS is absent or flagged invalid for gps_timeout_epochs consecutive
epochs, the machine hands over to WLAN fingerprint matching (Indoor) or,
lacking any scan, reports Unknown and stays silent.  The debounce gap
before the handover emits nothing rather than a stale position.

This module also owns the two CSV formats the machine speaks: the sensor
trace it consumes and the fix list it produces.
"""

import csv
import enum
from dataclasses import dataclass, replace

from .errors import InputError, SequencingError
from .geo import GeoCoordinate, MapPoint, ReferencePair, interpolate_map_position
from .matcher import DEFAULT_FLOOR_DBM, RssiScan, knn_locate
from .radiomap import RadioMap

DEFAULT_GPS_TIMEOUT_EPOCHS = 3

TRACE_HEADER = "epoch_ms,kind,f1,f2,f3"
FIXES_HEADER = "epoch_ms,source,x,y"


class Mode(enum.Enum):
    OUTDOOR = "Outdoor"
    INDOOR = "Indoor"
    UNKNOWN = "Unknown"


class Source(enum.Enum):
    GPS = "GPS"
    WLAN = "WLAN"


@dataclass(frozen=True)
class GpsReading:
    coordinate: GeoCoordinate
    valid: bool


@dataclass(frozen=True)
class SensorEpoch:
    """Everything the sensors delivered at one timestamp."""

    epoch_ms: int
    gps: GpsReading | None = None
    wlan: RssiScan | None = None

    def __post_init__(self):
        if self.wlan is not None and self.wlan.epoch_ms != self.epoch_ms:
            raise ValueError(
                f"scan timestamp {self.wlan.epoch_ms} disagrees with epoch {self.epoch_ms}"
            )


@dataclass(frozen=True)
class SwitchState:
    mode: Mode = Mode.UNKNOWN
    consecutive_gps_misses: int = 0
    gps_timeout_epochs: int = DEFAULT_GPS_TIMEOUT_EPOCHS
    last_epoch_ms: int | None = None

    def __post_init__(self):
        if self.gps_timeout_epochs < 1:
            raise ValueError("gps_timeout_epochs must be >= 1")
        if self.consecutive_gps_misses < 0:
            raise ValueError("consecutive_gps_misses must be >= 0")
        if self.mode is Mode.OUTDOOR and self.consecutive_gps_misses >= self.gps_timeout_epochs:
            raise ValueError("Outdoor mode requires misses below the timeout")


@dataclass(frozen=True)
class PositionFix:
    epoch_ms: int
    position: MapPoint
    source: Source


def step(
    state: SwitchState,
    epoch: SensorEpoch,
    refs: ReferencePair,
    radio_map: RadioMap,
    k: int = 1,
    floor_dbm: float = DEFAULT_FLOOR_DBM,
) -> tuple[SwitchState, PositionFix | None]:
    """Advance the machine by one epoch; maybe emit a fix.

    A valid GPS reading resets the miss counter, forces Outdoor and emits
    a GPS fix.  Otherwise the counter grows; once it reaches the timeout
    the machine emits WLAN fixes while scans are available (Indoor) and
    nothing when they are not (Unknown).  Below the timeout nothing is
    emitted: the gap is deliberate debounce, not data loss.
    """
    if state.last_epoch_ms is not None and epoch.epoch_ms <= state.last_epoch_ms:
        raise SequencingError(
            f"epoch {epoch.epoch_ms} is not after previous epoch {state.last_epoch_ms}"
        )

    if epoch.gps is not None and epoch.gps.valid:
        new_state = replace(
            state, mode=Mode.OUTDOOR, consecutive_gps_misses=0, last_epoch_ms=epoch.epoch_ms
        )
        fix = PositionFix(
            epoch_ms=epoch.epoch_ms,
            position=interpolate_map_position(epoch.gps.coordinate, refs),
            source=Source.GPS,
        )
        return new_state, fix

    misses = state.consecutive_gps_misses + 1
    if misses < state.gps_timeout_epochs:
        new_state = replace(
            state, consecutive_gps_misses=misses, last_epoch_ms=epoch.epoch_ms
        )
        return new_state, None

    if epoch.wlan is not None:
        new_state = replace(
            state,
            mode=Mode.INDOOR,
            consecutive_gps_misses=misses,
            last_epoch_ms=epoch.epoch_ms,
        )
        result = knn_locate(epoch.wlan, radio_map, k=k, floor_dbm=floor_dbm)
        fix = PositionFix(epoch_ms=epoch.epoch_ms, position=result.position, source=Source.WLAN)
        return new_state, fix

    new_state = replace(
        state, mode=Mode.UNKNOWN, consecutive_gps_misses=misses, last_epoch_ms=epoch.epoch_ms
    )
    return new_state, None


def run_session(
    epochs,
    refs: ReferencePair,
    radio_map: RadioMap,
    k: int = 1,
    floor_dbm: float = DEFAULT_FLOOR_DBM,
    gps_timeout_epochs: int = DEFAULT_GPS_TIMEOUT_EPOCHS,
    emit_last_known: bool = False,
) -> list[PositionFix]:
    """Fold step over a whole trace; fixes come out in time order.

    With emit_last_known, epochs that would stay silent instead repeat
    the most recent fix's position (re-stamped with the current epoch and
    keeping its original source tag).  Off by default: a repeated fix is
    a guess, and downstream error statistics should know the difference.
    """
    state = SwitchState(gps_timeout_epochs=gps_timeout_epochs)
    fixes: list[PositionFix] = []
    last_fix: PositionFix | None = None
    for i, epoch in enumerate(epochs):
        try:
            state, fix = step(state, epoch, refs, radio_map, k=k, floor_dbm=floor_dbm)
        except SequencingError as e:
            raise SequencingError(f"epoch index {i}: {e}") from e
        if fix is None and emit_last_known and last_fix is not None:
            fix = PositionFix(
                epoch_ms=epoch.epoch_ms, position=last_fix.position, source=last_fix.source
            )
        if fix is not None:
            fixes.append(fix)
            last_fix = fix
    return fixes


# --- trace and fix CSV formats ---------------------------------------------
#
# Trace rows: epoch_ms,kind,f1,f2,f3
#   kind=GPS   f1=lat_deg  f2=lon_deg  f3=valid (0|1)
#   kind=WLAN  f1=ap_id    f2=rssi_dbm f3 empty
# Rows sharing an epoch_ms form one SensorEpoch; epochs must not decrease
# down the file (a decrease is a sequencing error, not a parse error).


def save_trace(epochs, path) -> None:
    """Write SensorEpochs as trace CSV (UTF-8, LF, repr floats).

    Within an epoch the GPS row comes first, then WLAN rows in ascending
    ap_id order, so equal traces serialize to equal bytes.
    """
    with open(str(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRACE_HEADER.split(","))
        for epoch in epochs:
            if epoch.gps is not None:
                writer.writerow(
                    [
                        epoch.epoch_ms,
                        "GPS",
                        repr(epoch.gps.coordinate.lat_deg),
                        repr(epoch.gps.coordinate.lon_deg),
                        1 if epoch.gps.valid else 0,
                    ]
                )
            if epoch.wlan is not None:
                for ap_id in sorted(epoch.wlan.readings):
                    writer.writerow(
                        [epoch.epoch_ms, "WLAN", ap_id, repr(epoch.wlan.readings[ap_id]), ""]
                    )


def load_trace(path) -> list[SensorEpoch]:
    """Parse a trace CSV into SensorEpochs.

    Malformed rows raise InputError with path and line number; an
    epoch_ms that goes backwards raises SequencingError.
    """
    path = str(path)
    epochs: list[SensorEpoch] = []
    cur_epoch: int | None = None
    cur_gps: GpsReading | None = None
    cur_gps_line: int | None = None
    cur_readings: dict[str, float] = {}
    cur_lines: dict[str, int] = {}

    def flush():
        nonlocal cur_gps, cur_readings, cur_lines, cur_gps_line
        if cur_epoch is None:
            return
        wlan = RssiScan(epoch_ms=cur_epoch, readings=dict(cur_readings)) if cur_readings else None
        epochs.append(SensorEpoch(epoch_ms=cur_epoch, gps=cur_gps, wlan=wlan))
        cur_gps = None
        cur_gps_line = None
        cur_readings = {}
        cur_lines = {}

    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty trace file") from None
        if header != TRACE_HEADER.split(","):
            raise InputError(
                f"{path}:1: bad header {','.join(header)!r}, expected {TRACE_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise InputError(f"{path}:{lineno}: expected 5 columns, got {len(row)}")
            try:
                epoch_ms = int(row[0])
            except ValueError:
                raise InputError(f"{path}:{lineno}: bad epoch_ms {row[0]!r}") from None
            if cur_epoch is not None and epoch_ms < cur_epoch:
                raise SequencingError(
                    f"{path}:{lineno}: epoch {epoch_ms} after epoch {cur_epoch}"
                )
            if cur_epoch is None or epoch_ms > cur_epoch:
                flush()
                cur_epoch = epoch_ms

            kind = row[1]
            if kind == "GPS":
                if cur_gps is not None:
                    raise InputError(
                        f"{path}:{lineno}: second GPS row for epoch {epoch_ms} "
                        f"(first at line {cur_gps_line})"
                    )
                try:
                    coord = GeoCoordinate(float(row[2]), float(row[3]))
                except ValueError as e:
                    raise InputError(f"{path}:{lineno}: {e}") from e
                if row[4] not in ("0", "1"):
                    raise InputError(f"{path}:{lineno}: valid flag must be 0 or 1, got {row[4]!r}")
                cur_gps = GpsReading(coordinate=coord, valid=row[4] == "1")
                cur_gps_line = lineno
            elif kind == "WLAN":
                ap_id = row[2]
                if not ap_id:
                    raise InputError(f"{path}:{lineno}: WLAN row with empty ap_id")
                if ap_id in cur_readings:
                    raise InputError(
                        f"{path}:{lineno}: duplicate reading for AP {ap_id!r} at epoch "
                        f"{epoch_ms} (first at line {cur_lines[ap_id]})"
                    )
                try:
                    rssi = float(row[3])
                except ValueError:
                    raise InputError(f"{path}:{lineno}: bad rssi_dbm {row[3]!r}") from None
                if not -120.0 <= rssi <= 0.0:
                    raise InputError(f"{path}:{lineno}: rssi {rssi} dBm outside [-120, 0]")
                cur_readings[ap_id] = rssi
                cur_lines[ap_id] = lineno
            else:
                raise InputError(f"{path}:{lineno}: unknown row kind {kind!r}")
    flush()
    return epochs


def save_fixes(fixes, path) -> None:
    with open(str(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(FIXES_HEADER.split(","))
        for fix in fixes:
            writer.writerow(
                [fix.epoch_ms, fix.source.value, repr(fix.position.x), repr(fix.position.y)]
            )


def load_fixes(path) -> list[PositionFix]:
    path = str(path)
    fixes: list[PositionFix] = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty fixes file") from None
        if header != FIXES_HEADER.split(","):
            raise InputError(
                f"{path}:1: bad header {','.join(header)!r}, expected {FIXES_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise InputError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            try:
                source = Source(row[1])
            except ValueError:
                raise InputError(f"{path}:{lineno}: unknown source {row[1]!r}") from None
            try:
                fixes.append(
                    PositionFix(
                        epoch_ms=int(row[0]),
                        position=MapPoint(float(row[2]), float(row[3])),
                        source=source,
                    )
                )
            except ValueError as e:
                raise InputError(f"{path}:{lineno}: {e}") from e
    return fixes
