"""Linear operating-point costs, minimum-cost search, and scoring-rule checks.

The linear cost ``C(k) = c * bandwidth(k) + (1 - c) * miss_rate(k)`` trades
interval width against misses with an application factor ``c``.  On the
curve's coordinates, equal-cost points lie on an isocost line of slope
``-c / (1 - c)``.  Because the miss rate only drops at critical scales and
the bandwidth grows linearly between them, the minimum over all scales is
attained at ``k = 0`` or at a critical scale, so the search space is finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import _Profile, _evaluate
from .errors import AllUnbounded, AsymmetricBands, InvalidScale, InvalidTradeoff
from .metrics import Batch

__all__ = [
    "CostCurve",
    "cost_at",
    "min_cost",
    "mean_absolute_error_check",
    "interval_score",
    "isocost_slope",
]


@dataclass(frozen=True)
class CostCurve:
    """Cost evaluations over the candidate scales and the minimizer."""

    c: float
    evaluations: tuple[tuple[float, float], ...]
    k_star: float
    min_cost: float


def _check_tradeoff(c: float) -> float:
    c = float(c)
    if not (0.0 <= c <= 1.0) or not np.isfinite(c):
        raise InvalidTradeoff(f"trade-off factor must lie in [0, 1], got {c!r}")
    return c


def isocost_slope(c: float) -> float:
    """Slope of the equal-cost line in curve coordinates, ``-c / (1 - c)``."""
    c = _check_tradeoff(c)
    if c == 1.0:
        return float("-inf")
    return -c / (1.0 - c)


def cost_at(batch: Batch, k: float, c: float) -> float:
    """Linear cost of the batch re-scaled by ``k``."""
    c = _check_tradeoff(c)
    k = float(k)
    if not np.isfinite(k) or k < 0:
        raise InvalidScale(f"scale must be finite and >= 0, got {k!r}")
    miss, bw, _, _ = _evaluate(_Profile(batch), np.array([k]))
    return float(c * bw[0] + (1.0 - c) * miss[0])


def min_cost(batch: Batch, c: float) -> CostCurve:
    """Minimize the linear cost over ``{0} | {finite critical scales}``.

    The miss rate only decreases at critical scales and the bandwidth is
    linear in between, so this candidate set contains a global minimizer.
    Ties break toward the smaller scale (narrower bands at equal cost).

    Raises :class:`AllUnbounded` when no finite critical scale exists.
    """
    c = _check_tradeoff(c)
    profile = _Profile(batch)
    finite = profile.crit[np.isfinite(profile.crit)]
    if finite.size == 0:
        raise AllUnbounded("no sample has a finite critical scale")
    ks = np.unique(finite)
    if ks[0] > 0.0:
        ks = np.concatenate(([0.0], ks))
    miss, bw, _, _ = _evaluate(profile, ks)
    costs = c * bw + (1.0 - c) * miss
    best = int(np.argmin(costs))  # first minimum = smallest k
    return CostCurve(
        c=c,
        evaluations=tuple((float(k), float(v)) for k, v in zip(ks, costs)),
        k_star=float(ks[best]),
        min_cost=float(costs[best]),
    )


def mean_absolute_error_check(batch: Batch, k: float) -> tuple[float, float]:
    """Cross-check the symmetric-band cost against a direct mean error.

    For symmetric bands ``z``, the equally-weighted excess/deficit cost at
    scale ``k`` is half the mean absolute difference between the absolute
    error and the scaled band:

        0.5 * excess(k) + 0.5 * deficit(k)  ==  0.5 * mean(||y - y_hat| - k*z|)

    Returns ``(cost_based, direct_mae)`` with ``cost_based == direct_mae / 2``
    to within accumulation error; both values are exposed so callers can pin
    the convention.

    Raises :class:`AsymmetricBands` when bands differ beyond 1e-12.
    """
    k = float(k)
    if not np.isfinite(k) or k < 0:
        raise InvalidScale(f"scale must be finite and >= 0, got {k!r}")
    if np.max(np.abs(batch.z_lower - batch.z_upper)) > 1e-12:
        raise AsymmetricBands("bands must satisfy z_lower == z_upper (1e-12)")
    profile = _Profile(batch)
    _, _, ex, de = _evaluate(profile, np.array([k]))
    cost_based = float(0.5 * ex[0] + 0.5 * de[0])
    direct_mae = float(np.mean(np.abs(profile.abs_z - k * batch.z_upper)))
    return cost_based, direct_mae


def interval_score(batch: Batch, alpha: float) -> float:
    """Mean interval score at miss level ``alpha``.

    Per sample: the interval width, plus ``(2/alpha)`` times the distance by
    which the observation escapes the interval (one-sided; observations on a
    bound incur no penalty).  Decomposes exactly into
    ``2 * bandwidth + (2/alpha) * deficit``.
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    z = batch.error
    width = batch.z_lower + batch.z_upper
    over = z - batch.z_upper
    under = -z - batch.z_lower
    penalty = np.where(over > 0, over, 0.0) + np.where(under > 0, under, 0.0)
    return float(np.mean(width + (2.0 / alpha) * penalty))
