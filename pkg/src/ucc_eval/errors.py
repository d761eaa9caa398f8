"""Exception types raised by the evaluator.

Every error carries a stable class name so callers (including the CLI and
foreign-language bindings) can dispatch on it; indexed errors expose the
offending sample position as ``.index``.
"""

from __future__ import annotations


class UccError(Exception):
    """Base class for all evaluator errors."""


class _IndexedError(UccError):
    def __init__(self, index: int, message: str | None = None):
        self.index = int(index)
        super().__init__(message or f"{type(self).__name__} at index {index}")


class NonFiniteValue(_IndexedError):
    """A sample contains NaN or infinity."""


class NegativeBand(_IndexedError):
    """A lower bound exceeds the prediction, or an upper bound falls below it."""


class EmptyBatch(UccError):
    """A batch must contain at least one sample."""


class InvalidScale(UccError):
    """Scale factors must be finite and non-negative."""


class AllUnbounded(UccError):
    """No sample has a finite critical scale; no curve can be built."""


class PartialSupport(UccError):
    """The curve never reaches zero miss rate, so the full area diverges.

    Use a partial area over a miss-rate window instead.
    """


class EmptyWindow(UccError):
    """No curve point falls inside the requested y-axis window."""


class DegenerateReference(UccError):
    """The constant-band reference has zero area (all predictions exact)."""


class UnreachableTarget(UccError):
    """The requested miss rate lies below the curve's residual floor."""


class InsufficientCalibrationData(UccError):
    """The calibration set is too small for the requested miss level."""


class UnboundedScores(UccError):
    """A calibration sample has nonzero error but a zero active band."""


class UnpairedBatches(UccError):
    """The two batches do not share (y, y_hat) pairs index by index."""


class InvalidTradeoff(UccError):
    """The cost trade-off factor must lie in [0, 1]."""


class AsymmetricBands(UccError):
    """The operation requires symmetric bands (z_lower == z_upper)."""


class ParseError(UccError):
    """A data file line failed to parse."""

    def __init__(self, line: int, message: str | None = None):
        self.line = int(line)
        super().__init__(message or f"parse error at line {line}")


class HeaderMismatch(UccError):
    """A CSV header does not match the declared format."""


class MixedCoordinates(UccError):
    """Curves passed together must share one coordinate system."""
