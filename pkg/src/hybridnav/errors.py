"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: InputError (and OS-level read
failures) exit with 2, DataError with 3.
"""


class PositioningError(Exception):
    """Base class for all hybridnav errors."""


class InputError(PositioningError):
    """Malformed or unusable input: bad files, bad formats, bad arguments."""


class DataError(PositioningError):
    """Inputs parsed fine but are mutually inconsistent."""


class DmsParseError(InputError):
    """A degrees-minutes-seconds string could not be parsed."""


class GeometryError(InputError):
    """Degenerate geometry, e.g. reference anchors sharing a latitude."""


class ConsistencyError(DataError):
    """Conflicting survey data, e.g. one location id with two positions."""


class SequencingError(DataError):
    """Sensor epochs arrived out of time order."""


class AlignmentError(DataError):
    """Estimated fixes could not be matched to ground-truth epochs."""
