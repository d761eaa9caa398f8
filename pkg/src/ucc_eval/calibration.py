"""Split-conformal scaling of interval bands.

The conformity score of a sample is its critical scale, which for symmetric
bands reduces to ``|y - y_hat| / z``.  Ranking the calibration scores and
picking the ``ceil((n+1)(1-alpha))``-th smallest yields a multiplicative
correction factor: scaling every band by it captures at least that many
calibration samples, and fresh exchangeable samples with probability at
least ``1 - alpha`` (at most ``1 - alpha + 1/(n+1)`` for continuous scores).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InsufficientCalibrationData, UnboundedScores
from .metrics import Batch, critical_scales, scale_batch

__all__ = ["CalibrationResult", "conformal_scale", "apply_calibration"]


@dataclass(frozen=True)
class CalibrationResult:
    """A fitted scale factor and what it achieved on the calibration set."""

    q_hat: float
    alpha: float
    n: int
    achieved_coverage: float


def _rank(n: int, alpha: float) -> int:
    # Exact rational arithmetic: float products like 10 * 0.9 can land an
    # ulp above the integer and push ceil off by one.
    return math.ceil(Fraction(n + 1) * (1 - Fraction(alpha)))


def conformal_scale(cal: Batch, alpha: float) -> CalibrationResult:
    """Fit the correction factor on a calibration batch at miss level ``alpha``.

    Scores are the batch's critical scales; ``q_hat`` is the order statistic
    at rank ``ceil((n+1)(1-alpha))`` (1-based, no interpolation).  Ties over-
    cover, which the guarantee permits.

    Raises :class:`InsufficientCalibrationData` when the rank exceeds ``n``
    and :class:`UnboundedScores` when any score is the ``+inf`` sentinel.
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    css = critical_scales(cal)
    if css.unbounded_count > 0:
        raise UnboundedScores(
            f"{css.unbounded_count} calibration sample(s) have nonzero error "
            "over a zero active band"
        )
    n = len(cal)
    rank = _rank(n, alpha)
    if rank > n:
        raise InsufficientCalibrationData(
            f"need ceil((n+1)(1-alpha)) = {rank} <= n = {n}"
        )
    scores = np.sort(css.scales)
    q_hat = float(scores[rank - 1])
    achieved = float(np.count_nonzero(css.scales <= q_hat) / n)
    return CalibrationResult(q_hat=q_hat, alpha=alpha, n=n, achieved_coverage=achieved)


def apply_calibration(batch: Batch, result: CalibrationResult) -> Batch:
    """Scale a batch's bands by the fitted factor ``q_hat``."""
    return scale_batch(batch, result.q_hat)
