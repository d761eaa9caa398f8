"""Operating-characteristic curve construction, areas, and gains.

Sweeping a common multiplicative scale ``k`` over a batch's bands traces a
staircase of operating points: each distinct per-sample critical scale is a
step at which one or more observations become captured.  The curve is that
staircase, evaluated in one of three coordinate systems; its area under the
right-endpoint rectangular rule estimates the mean per-sample x-metric at
the data-induced operating points.

Capture at an evaluation scale ``k`` is decided by comparing the precomputed
critical scale ``k_i <= k``.  This matches the closed-interval membership
test everywhere except within one floating-point ulp of the boundary (where
materializing ``k * z`` can round below the error), and it is what makes tie
handling and the boundary-inclusive convention exact: a point evaluated at a
tied scale reflects *all* tied captures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllUnbounded,
    DegenerateReference,
    EmptyWindow,
    PartialSupport,
    UnreachableTarget,
)
from .metrics import Batch, critical_scales

__all__ = [
    "CoordinateSystem",
    "BANDWIDTH_MISS_RATE",
    "EXCESS_MISS_RATE",
    "EXCESS_DEFICIT",
    "OperatingPoint",
    "Curve",
    "GainReport",
    "build_curve",
    "auucc",
    "partial_auucc",
    "constant_reference",
    "auucc_gain",
    "op_at_miss_rate",
]

_SUPPORTED_AXES = {
    ("bandwidth", "miss_rate"),
    ("excess", "miss_rate"),
    ("excess", "deficit"),
}


@dataclass(frozen=True)
class CoordinateSystem:
    """An (x, y) axis pairing for the curve.

    Supported pairs are exactly (bandwidth, miss_rate),
    (excess, miss_rate) and (excess, deficit).
    """

    x_axis: str
    y_axis: str

    def __post_init__(self):
        if (self.x_axis, self.y_axis) not in _SUPPORTED_AXES:
            raise ValueError(
                f"unsupported coordinate system ({self.x_axis}, {self.y_axis})"
            )

    def __str__(self) -> str:
        return f"{self.x_axis}-{self.y_axis}"


BANDWIDTH_MISS_RATE = CoordinateSystem("bandwidth", "miss_rate")
EXCESS_MISS_RATE = CoordinateSystem("excess", "miss_rate")
EXCESS_DEFICIT = CoordinateSystem("excess", "deficit")


@dataclass(frozen=True)
class OperatingPoint:
    """One scale together with the four metric values it induces."""

    k: float
    miss_rate: float
    bandwidth: float
    excess: float
    deficit: float

    def value(self, axis: str) -> float:
        return getattr(self, axis)


@dataclass(frozen=True)
class Curve:
    """Operating points sorted by ascending scale, plus integration metadata.

    ``miss_floor`` is the residual miss rate contributed by samples that no
    finite scale can capture; the last point's miss rate equals it.
    """

    points: tuple[OperatingPoint, ...]
    coords: CoordinateSystem
    miss_floor: float
    source_n: int

    def xs(self) -> np.ndarray:
        return np.array([p.value(self.coords.x_axis) for p in self.points])

    def ys(self) -> np.ndarray:
        return np.array([p.value(self.coords.y_axis) for p in self.points])

    def scales(self) -> np.ndarray:
        return np.array([p.k for p in self.points])


@dataclass(frozen=True)
class GainReport:
    """Areas of a model and its constant-band reference, and the relative gain."""

    auucc_model: float
    auucc_const: float
    gain_percent: float
    partial_window: tuple[float, float] | None = None


class _Profile:
    """Scale-independent per-sample quantities shared by all evaluations."""

    def __init__(self, batch: Batch):
        self.n = len(batch)
        self.z = batch.error
        self.z_lower = batch.z_lower
        self.z_upper = batch.z_upper
        css = critical_scales(batch)
        self.crit = css.scales
        self.unbounded = css.unbounded_count
        # abs(z) and the active band feed the missed-sample shortfall,
        # which is |z| - k * active for every scale below the critical one.
        self.abs_z = np.abs(self.z)
        self.active = np.where(self.z >= 0, self.z_upper, self.z_lower)
        self.halfwidth_mean = float(
            np.sum(self.z_lower + self.z_upper) / (2.0 * self.n)
        )


def _evaluate(profile: _Profile, ks: np.ndarray):
    """Metrics of the scaled batch at each scale in ``ks`` (ascending or not).

    Returns four arrays (miss, bandwidth, excess, deficit) of ``len(ks)``.
    Work is chunked so peak memory stays near 2e6 floats.
    """
    n = profile.n
    miss = np.empty(len(ks))
    ex = np.empty(len(ks))
    de = np.empty(len(ks))
    chunk = max(1, 2_000_000 // max(n, 1))
    for start in range(0, len(ks), chunk):
        kk = ks[start : start + chunk, np.newaxis]
        captured = profile.crit <= kk
        lo_slack = profile.z + kk * profile.z_lower
        up_slack = kk * profile.z_upper - profile.z
        # Zero slack at a sample's own critical scale can round one ulp
        # negative; clamp, the true contribution there is exactly 0.
        slack = np.maximum(np.minimum(lo_slack, up_slack), 0.0)
        shortfall = profile.abs_z - kk * profile.active
        sl = start
        miss[sl : sl + kk.shape[0]] = (n - captured.sum(axis=1)) / n
        ex[sl : sl + kk.shape[0]] = np.where(captured, slack, 0.0).sum(axis=1) / n
        de[sl : sl + kk.shape[0]] = np.where(captured, 0.0, shortfall).sum(axis=1) / n
    bw = ks * profile.halfwidth_mean
    return miss, bw, ex, de


def build_curve(batch: Batch, coords: CoordinateSystem = BANDWIDTH_MISS_RATE) -> Curve:
    """Trace the curve of ``batch`` over its distinct critical scales.

    One operating point per distinct finite critical scale, each evaluated
    by re-scaling the whole batch at that scale; ties collapse into a single
    point that reflects all tied captures.  A ``k = 0`` anchor is prepended
    when no sample has zero error, so the curve always reaches the y-axis.
    Samples that no finite scale can capture raise the curve's residual
    ``miss_floor`` and never produce points.

    Raises :class:`AllUnbounded` when no finite critical scale exists.
    """
    profile = _Profile(batch)
    finite = profile.crit[np.isfinite(profile.crit)]
    if finite.size == 0:
        raise AllUnbounded("no sample has a finite critical scale")
    ks = np.unique(finite)
    if ks[0] > 0.0:
        ks = np.concatenate(([0.0], ks))
    miss, bw, ex, de = _evaluate(profile, ks)
    points = tuple(
        OperatingPoint(float(k), float(m), float(b), float(e), float(d))
        for k, m, b, e, d in zip(ks, miss, bw, ex, de)
    )
    return Curve(
        points=points,
        coords=coords,
        miss_floor=profile.unbounded / profile.n,
        source_n=profile.n,
    )


_RULES = ("rectangular", "trapezoidal")


def auucc(curve: Curve, rule: str = "rectangular") -> float:
    """Area under the curve.

    The default rectangular rule weighs each x-segment with its right
    endpoint's y-value, summing ``y_i * (x_i - x_{i-1})`` with ``x_0 = 0``
    at the anchor; this makes the area an estimator of the mean per-sample
    x-metric (excluding the largest).  The trapezoidal rule is an
    alternative estimator for smoother comparisons.

    Raises :class:`PartialSupport` when the curve has a positive miss
    floor: the area out to infinite bandwidth diverges, so only a partial
    area over a y-window is meaningful.
    """
    if rule not in _RULES:
        raise ValueError(f"rule must be one of {_RULES}, got {rule!r}")
    if curve.miss_floor > 0:
        raise PartialSupport(
            "curve never reaches zero miss rate; use partial_auucc"
        )
    xs = curve.xs()
    ys = curve.ys()
    if len(xs) < 2:
        return 0.0
    dx = np.diff(xs)
    if rule == "rectangular":
        return float(np.sum(ys[1:] * dx))
    return float(np.sum(0.5 * (ys[1:] + ys[:-1]) * dx))


def partial_auucc(curve: Curve, y_window: tuple[float, float]) -> float:
    """Area restricted to segments whose y-value lies in ``[y_lo, y_hi]``.

    The curve is a step function in its y-axis, so window boundaries cut at
    the step locations with no interpolation: a segment is included exactly
    when its (right-endpoint) y-value falls inside the window.  The full
    window [0, 1] therefore reproduces :func:`auucc` when the miss floor is
    zero.

    Raises :class:`EmptyWindow` when no curve point falls in the window.
    """
    lo, hi = float(y_window[0]), float(y_window[1])
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError(f"window must satisfy 0 <= lo < hi <= 1, got {y_window!r}")
    xs = curve.xs()
    ys = curve.ys()
    inside = (ys >= lo) & (ys <= hi)
    if not inside.any():
        raise EmptyWindow(f"no curve point has y in [{lo}, {hi}]")
    if len(xs) < 2:
        return 0.0
    seg = inside[1:]
    return float(np.sum(np.where(seg, ys[1:] * np.diff(xs), 0.0)))


def constant_reference(batch: Batch) -> Batch:
    """The non-informative reference: same predictions, all bands 1.0.

    The curve of a constant-band batch is invariant to the constant's
    magnitude (only the scale axis relabels), so 1.0 is as good as any.
    """
    ones = np.ones(len(batch))
    return Batch(batch.y, batch.y_hat, ones, ones)


def auucc_gain(
    model: Batch,
    coords: CoordinateSystem = BANDWIDTH_MISS_RATE,
    window: tuple[float, float] | None = None,
    rule: str = "rectangular",
) -> GainReport:
    """Percentage area reduction of ``model`` against its constant reference.

    ``gain = (A_const - A_model) / A_const * 100``.  With ``window`` set,
    both areas are partial over the same y-window.  Raises
    :class:`DegenerateReference` when the reference area is zero (all
    predictions exact) and propagates :class:`PartialSupport` from the full
    area of a model with unbounded samples.
    """
    model_curve = build_curve(model, coords)
    const_curve = build_curve(constant_reference(model), coords)
    if window is None:
        a_model = auucc(model_curve, rule)
        a_const = auucc(const_curve, rule)
    else:
        a_model = partial_auucc(model_curve, window)
        a_const = partial_auucc(const_curve, window)
    if a_const == 0.0:
        raise DegenerateReference("constant reference has zero area")
    gain = (a_const - a_model) / a_const * 100.0
    return GainReport(a_model, a_const, gain, window)


def op_at_miss_rate(curve: Curve, target: float) -> OperatingPoint:
    """The operating point with the smallest scale whose miss rate <= target.

    Raises :class:`UnreachableTarget` when the target lies below the
    curve's miss floor.
    """
    target = float(target)
    if not (0.0 <= target <= 1.0):
        raise ValueError(f"target miss rate must lie in [0, 1], got {target!r}")
    if target < curve.miss_floor:
        raise UnreachableTarget(
            f"target {target} below residual miss floor {curve.miss_floor}"
        )
    for point in curve.points:
        if point.miss_rate <= target:
            return point
    raise UnreachableTarget(f"no operating point reaches miss rate {target}")
