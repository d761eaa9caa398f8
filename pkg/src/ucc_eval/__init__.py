"""Operating-point-agnostic evaluation of regression prediction intervals.

Build characteristics curves by sweeping a common scale over interval
bands, integrate them (fully or over a miss-rate window), normalize against
constant-band references, calibrate scale factors conformally, locate
minimum-cost operating points, and test model differences with a paired
permutation test.
"""

__version__ = "0.1.0"

from .calibration import CalibrationResult, apply_calibration, conformal_scale
from .cost import (
    CostCurve,
    cost_at,
    interval_score,
    isocost_slope,
    mean_absolute_error_check,
    min_cost,
)
from .curve import (
    BANDWIDTH_MISS_RATE,
    EXCESS_DEFICIT,
    EXCESS_MISS_RATE,
    CoordinateSystem,
    Curve,
    GainReport,
    OperatingPoint,
    auucc,
    auucc_gain,
    build_curve,
    constant_reference,
    op_at_miss_rate,
    partial_auucc,
)
from .errors import (
    AllUnbounded,
    AsymmetricBands,
    DegenerateReference,
    EmptyBatch,
    EmptyWindow,
    HeaderMismatch,
    InsufficientCalibrationData,
    InvalidScale,
    InvalidTradeoff,
    MixedCoordinates,
    NegativeBand,
    NonFiniteValue,
    ParseError,
    PartialSupport,
    UccError,
    UnboundedScores,
    UnpairedBatches,
    UnreachableTarget,
)
from .fixtures import GapFixture, generate_gap_fixture
from .io import Report, read_batch, write_batch_csv
from .metrics import (
    Batch,
    CriticalScaleSet,
    bandwidth,
    critical_scales,
    deficit,
    excess,
    miss_rate,
    scale_batch,
    validate_batch,
)
from .significance import TestResult, compare_auucc
from .svg import render_svg

__all__ = [
    "__version__",
    "Batch",
    "CriticalScaleSet",
    "validate_batch",
    "miss_rate",
    "bandwidth",
    "excess",
    "deficit",
    "scale_batch",
    "critical_scales",
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
    "CalibrationResult",
    "conformal_scale",
    "apply_calibration",
    "TestResult",
    "compare_auucc",
    "CostCurve",
    "cost_at",
    "min_cost",
    "mean_absolute_error_check",
    "interval_score",
    "isocost_slope",
    "Report",
    "read_batch",
    "write_batch_csv",
    "render_svg",
    "GapFixture",
    "generate_gap_fixture",
    "UccError",
    "NonFiniteValue",
    "NegativeBand",
    "EmptyBatch",
    "InvalidScale",
    "AllUnbounded",
    "PartialSupport",
    "EmptyWindow",
    "DegenerateReference",
    "UnreachableTarget",
    "InsufficientCalibrationData",
    "UnboundedScores",
    "UnpairedBatches",
    "InvalidTradeoff",
    "AsymmetricBands",
    "ParseError",
    "HeaderMismatch",
    "MixedCoordinates",
]
