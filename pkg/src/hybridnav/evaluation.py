"""Positioning error statistics: buckets, averages, threshold fractions.

Errors are Euclidean distances between estimated fixes and ground truth
at matching epochs.  The histogram uses half-open buckets [lo, hi) with
edges 1, 2, 4, 6, 8 meters; the open notation "0~1" is printed but the
lower edge is inclusive and the upper exclusive.  fraction_below uses a
strict comparison, so an error exactly at the threshold does not count.

The module is called evaluation, not eval, to stay clear of the builtin.
"""

import csv
import json
import math
from bisect import bisect_right
from dataclasses import dataclass

from .errors import AlignmentError, InputError
from .matcher import euclidean

BUCKET_EDGES = (1.0, 2.0, 4.0, 6.0, 8.0)
BUCKET_LABELS = ("0~1", "1~2", "2~4", "4~6", "6~8", "8~")

ERRORS_HEADER = "epoch_ms,error_m"
CDF_HEADER = "threshold_m,fraction"


@dataclass(frozen=True)
class ErrorStats:
    buckets: tuple[int, ...]
    probabilities: tuple[float, ...]
    average_m: float
    n: int
    percent_below: dict

    def __post_init__(self):
        if len(self.buckets) != len(BUCKET_LABELS):
            raise ValueError(f"expected {len(BUCKET_LABELS)} buckets, got {len(self.buckets)}")
        if sum(self.buckets) != self.n:
            raise ValueError("bucket counts must sum to n")
        if self.n > 0 and abs(sum(self.probabilities) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1")
        if self.average_m < 0:
            raise ValueError("average_m must be >= 0")


def per_fix_errors(fixes, truth) -> list[float]:
    """Distance between each fix and the true position at its epoch.

    ``truth`` is a sequence of (epoch_ms, MapPoint).  Every fix epoch
    must appear in the truth exactly once; a missing or ambiguous epoch
    raises AlignmentError naming it.
    """
    positions = {}
    for epoch_ms, pos in truth:
        if epoch_ms in positions and positions[epoch_ms] != pos:
            raise AlignmentError(f"ground truth lists epoch {epoch_ms} twice with different positions")
        positions[epoch_ms] = pos
    errors = []
    for fix in fixes:
        if fix.epoch_ms not in positions:
            raise AlignmentError(f"fix at epoch {fix.epoch_ms} has no ground-truth entry")
        errors.append(euclidean(fix.position, positions[fix.epoch_ms]))
    return errors


def fraction_below(errors, threshold_m: float) -> float:
    """Fraction of errors strictly below the threshold."""
    errors = list(errors)
    if not errors:
        raise ValueError("fraction_below needs at least one error")
    return sum(1 for e in errors if e < threshold_m) / len(errors)


def summarize(errors, thresholds=()) -> ErrorStats:
    """Bucket counts, probabilities, mean, and requested below-threshold fractions."""
    errors = list(errors)
    if not errors:
        raise ValueError("summarize needs at least one error")
    if any(e < 0 for e in errors):
        raise ValueError("errors must be >= 0")

    counts = [0] * len(BUCKET_LABELS)
    for e in errors:
        counts[bisect_right(BUCKET_EDGES, e)] += 1
    n = len(errors)
    return ErrorStats(
        buckets=tuple(counts),
        probabilities=tuple(c / n for c in counts),
        average_m=math.fsum(errors) / n,
        n=n,
        percent_below={t: fraction_below(errors, t) for t in thresholds},
    )


def format_table(stats: ErrorStats) -> str:
    """Render stats as a fixed-width text table (4 decimal places)."""

    def row(label, values):
        return label.ljust(12) + "".join(f"{v:>8}" for v in values)

    lines = [
        row("error_m", BUCKET_LABELS),
        row("count", stats.buckets),
        row("probability", (f"{p:.4f}" for p in stats.probabilities)),
        "",
        f"n          {stats.n}",
        f"average_m  {stats.average_m:.4f}",
    ]
    for t in sorted(stats.percent_below):
        lines.append(f"below {t:g} m  {stats.percent_below[t]:.4f}")
    return "\n".join(lines) + "\n"


def stats_to_dict(stats: ErrorStats) -> dict:
    """Full-precision JSON-ready form of ErrorStats."""
    return {
        "bucket_labels": list(BUCKET_LABELS),
        "bucket_counts": list(stats.buckets),
        "bucket_probabilities": list(stats.probabilities),
        "average_m": stats.average_m,
        "n": stats.n,
        "fraction_below": {repr(t): f for t, f in sorted(stats.percent_below.items())},
    }


def save_stats_json(stats: ErrorStats, path) -> None:
    with open(str(path), "w", encoding="utf-8", newline="\n") as f:
        json.dump(stats_to_dict(stats), f, indent=2, sort_keys=True)
        f.write("\n")


def save_errors_csv(epochs_and_errors, path) -> None:
    """Write (epoch_ms, error_m) pairs for external plotting."""
    with open(str(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(ERRORS_HEADER.split(","))
        for epoch_ms, error in epochs_and_errors:
            writer.writerow([epoch_ms, repr(error)])


def cdf_points(errors) -> list[tuple[float, float]]:
    """Empirical CDF support points: (error value, fraction of errors <= it).

    Note the closed comparison here (each listed value includes itself),
    unlike fraction_below's strict one; the two answer different
    questions and both conventions are stated where used.
    """
    errors = sorted(errors)
    if not errors:
        raise ValueError("cdf_points needs at least one error")
    n = len(errors)
    points = []
    for i, e in enumerate(errors, start=1):
        # Collapse duplicate error values onto the highest fraction.
        if points and points[-1][0] == e:
            points[-1] = (e, i / n)
        else:
            points.append((e, i / n))
    return points


def save_cdf_csv(errors, path) -> None:
    with open(str(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CDF_HEADER.split(","))
        for threshold, fraction in cdf_points(errors):
            writer.writerow([repr(threshold), repr(fraction)])


def load_errors_csv(path) -> list[tuple[int, float]]:
    path = str(path)
    out: list[tuple[int, float]] = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty errors file") from None
        if header != ERRORS_HEADER.split(","):
            raise InputError(
                f"{path}:1: bad header {','.join(header)!r}, expected {ERRORS_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise InputError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                out.append((int(row[0]), float(row[1])))
            except ValueError as e:
                raise InputError(f"{path}:{lineno}: {e}") from e
    return out
