"""Validated sample batches and the four interval cost metrics.

A batch stores each sample in *band form*: the observation ``y``, the point
prediction ``y_hat``, and the non-negative distances ``z_lower``/``z_upper``
from the prediction to the interval edges.  Band form makes the central
operation -- multiplicative re-scaling of the interval widths -- exact and
cheap; bound form ``(y, y_hat, y_lower, y_upper)`` is converted on ingestion.

All metrics are plain functions over immutable batches and are safe to call
concurrently.  Accumulations use 64-bit floats with numpy's pairwise
summation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyBatch,
    InvalidScale,
    NegativeBand,
    NonFiniteValue,
)

__all__ = [
    "Batch",
    "CriticalScaleSet",
    "validate_batch",
    "miss_rate",
    "bandwidth",
    "excess",
    "deficit",
    "scale_batch",
    "critical_scales",
]


def _column(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return arr


def _first_bad(mask: np.ndarray) -> int:
    return int(np.flatnonzero(mask)[0])


@dataclass(frozen=True)
class Batch:
    """An ordered, validated collection of interval predictions.

    Attributes
    ----------
    y : ndarray
        Observed targets.
    y_hat : ndarray
        Point predictions.
    z_lower, z_upper : ndarray
        Non-negative band widths below/above the prediction, so the
        interval is ``[y_hat - z_lower, y_hat + z_upper]``.

    Sample order is preserved exactly as ingested; pairing between batches
    relies on the index.
    """

    y: np.ndarray
    y_hat: np.ndarray
    z_lower: np.ndarray
    z_upper: np.ndarray

    def __post_init__(self):
        cols = {}
        for name in ("y", "y_hat", "z_lower", "z_upper"):
            arr = _column(getattr(self, name), name).copy()
            arr.setflags(write=False)
            cols[name] = arr
            object.__setattr__(self, name, arr)
        n = len(cols["y"])
        if any(len(c) != n for c in cols.values()):
            raise ValueError("all columns must have equal length")
        if n == 0:
            raise EmptyBatch("batch must contain at least one sample")
        finite = np.isfinite(cols["y"]) & np.isfinite(cols["y_hat"]) \
            & np.isfinite(cols["z_lower"]) & np.isfinite(cols["z_upper"])
        if not finite.all():
            raise NonFiniteValue(_first_bad(~finite))
        negative = (cols["z_lower"] < 0) | (cols["z_upper"] < 0)
        if negative.any():
            raise NegativeBand(_first_bad(negative))

    @classmethod
    def from_bands(cls, y, y_hat, z_lower, z_upper) -> "Batch":
        """Build a batch directly from band widths."""
        return cls(y, y_hat, z_lower, z_upper)

    @classmethod
    def from_bounds(cls, y, y_hat, y_lower, y_upper) -> "Batch":
        """Build a batch from interval bounds, converting to band form."""
        y = _column(y, "y")
        y_hat = _column(y_hat, "y_hat")
        y_lower = _column(y_lower, "y_lower")
        y_upper = _column(y_upper, "y_upper")
        if not (len(y) == len(y_hat) == len(y_lower) == len(y_upper)):
            raise ValueError("all columns must have equal length")
        if len(y) == 0:
            raise EmptyBatch("batch must contain at least one sample")
        finite = np.isfinite(y) & np.isfinite(y_hat) \
            & np.isfinite(y_lower) & np.isfinite(y_upper)
        if not finite.all():
            raise NonFiniteValue(_first_bad(~finite))
        return cls(y, y_hat, y_hat - y_lower, y_upper - y_hat)

    def __len__(self) -> int:
        return len(self.y)

    @property
    def error(self) -> np.ndarray:
        """Observed error ``y - y_hat`` per sample."""
        return self.y - self.y_hat

    @property
    def lower_bounds(self) -> np.ndarray:
        return self.y_hat - self.z_lower

    @property
    def upper_bounds(self) -> np.ndarray:
        return self.y_hat + self.z_upper


@dataclass(frozen=True)
class CriticalScaleSet:
    """Per-sample critical scales plus the count of unbounded samples.

    ``scales[i]`` is the smallest factor by which sample *i*'s bands must be
    multiplied for the interval to capture the observation with no slack.
    Samples with nonzero error but a zero active band can never be captured
    at any finite scale; they carry the sentinel ``+inf`` and are counted in
    ``unbounded_count``.
    """

    scales: np.ndarray
    unbounded_count: int

    def __post_init__(self):
        arr = np.asarray(self.scales, dtype=np.float64).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "scales", arr)

    @property
    def finite(self) -> np.ndarray:
        return self.scales[np.isfinite(self.scales)]


def validate_batch(raw) -> Batch:
    """Validate rows of ``(y, y_hat, y_lower, y_upper)`` bound-form tuples.

    Returns a band-form :class:`Batch`.  Raises :class:`EmptyBatch`,
    :class:`NonFiniteValue` (with the offending row index) or
    :class:`NegativeBand` (when a lower bound exceeds the prediction or an
    upper bound falls below it).
    """
    rows = list(raw)
    if not rows:
        raise EmptyBatch("batch must contain at least one sample")
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise ValueError("expected rows of 4 values (y, y_hat, y_lower, y_upper)")
    return Batch.from_bounds(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])


def _captured(batch: Batch) -> np.ndarray:
    # Closed interval: an observation exactly on a bound counts as captured.
    z = batch.error
    return (z >= -batch.z_lower) & (z <= batch.z_upper)


def miss_rate(batch: Batch) -> float:
    """Fraction of observations strictly outside their intervals."""
    return float(np.count_nonzero(~_captured(batch)) / len(batch))


def bandwidth(batch: Batch) -> float:
    """Mean interval half-width, ``(1/2N) * sum(upper - lower)``."""
    return float(np.sum(batch.z_lower + batch.z_upper) / (2.0 * len(batch)))


def excess(batch: Batch) -> float:
    """Mean slack above the minimum width needed for capture.

    Captured samples contribute ``min(y - lower, upper - y)``; missed
    samples contribute zero.  The divisor is the full batch size N.
    """
    z = batch.error
    slack = np.minimum(z + batch.z_lower, batch.z_upper - z)
    return float(np.sum(np.where(_captured(batch), slack, 0.0)) / len(batch))


def deficit(batch: Batch) -> float:
    """Mean shortfall distance from a missed observation to its nearest bound.

    Missed samples contribute ``min(|y - lower|, |y - upper|)``; captured
    samples contribute zero.  The divisor is the full batch size N.
    """
    z = batch.error
    shortfall = np.minimum(np.abs(z + batch.z_lower), np.abs(z - batch.z_upper))
    return float(np.sum(np.where(_captured(batch), 0.0, shortfall)) / len(batch))


def scale_batch(batch: Batch, k: float) -> Batch:
    """Return a new batch with both bands multiplied by ``k`` (k >= 0).

    Observations and predictions are unchanged; the input batch is not
    modified.
    """
    k = float(k)
    if not np.isfinite(k) or k < 0:
        raise InvalidScale(f"scale must be finite and >= 0, got {k!r}")
    return Batch(batch.y, batch.y_hat, k * batch.z_lower, k * batch.z_upper)


def critical_scales(batch: Batch) -> CriticalScaleSet:
    """Smallest band scale capturing each observation with zero slack.

    For error ``z = y - y_hat``: ``z / z_upper`` when ``z >= 0``, else
    ``-z / z_lower``.  Conventions: zero error yields scale 0 even when the
    active band is zero (a zero-width interval already contains an exact
    prediction); nonzero error over a zero active band yields the sentinel
    ``+inf`` and increments ``unbounded_count`` rather than raising, leaving
    policy to the caller.
    """
    z = batch.error
    with np.errstate(divide="ignore", invalid="ignore"):
        scales = np.where(z >= 0, z / batch.z_upper, -z / batch.z_lower)
    scales[z == 0] = 0.0
    unbounded = int(np.count_nonzero(np.isinf(scales)))
    return CriticalScaleSet(scales, unbounded)
