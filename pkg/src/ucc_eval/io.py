"""Data ingestion and report serialization.

Input formats: ``csv_bounds`` (header ``y,y_hat,y_lower,y_upper``),
``csv_bands`` (header ``y,y_hat,z_lower,z_upper``) and newline-delimited
JSON objects carrying either key set.  Values parse at full round-trip
precision and row order is preserved.  Reports serialize to a single JSON
document that round-trips losslessly.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import HeaderMismatch, NegativeBand, NonFiniteValue, ParseError, UccError
from .metrics import Batch, validate_batch

__all__ = ["FORMATS", "read_batch", "write_batch_csv", "Report", "file_sha256"]

FORMATS = ("csv_bounds", "csv_bands", "json")

_HEADERS = {
    "csv_bounds": ["y", "y_hat", "y_lower", "y_upper"],
    "csv_bands": ["y", "y_hat", "z_lower", "z_upper"],
}
_BOUND_KEYS = frozenset(_HEADERS["csv_bounds"])
_BAND_KEYS = frozenset(_HEADERS["csv_bands"])


def _parse_float(token: str, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(line, f"line {line}: cannot parse {token!r} as a number")
    return value


def _attach_line(err: UccError, first_data_line: int) -> UccError:
    # Core validation errors carry a sample index; restate it as a file line.
    if isinstance(err, (NonFiniteValue, NegativeBand)):
        line = err.index + first_data_line
        return type(err)(err.index, f"{type(err).__name__} at line {line}")
    return err


def _read_csv(path: Path, fmt: str) -> Batch:
    expected = _HEADERS[fmt]
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise HeaderMismatch(f"{path}: empty file, expected header {expected}")
        if [h.strip() for h in header] != expected:
            raise HeaderMismatch(f"{path}: header {header!r} != {expected}")
        rows = []
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ParseError(line, f"line {line}: expected 4 columns, got {len(row)}")
            rows.append(tuple(_parse_float(tok.strip(), line) for tok in row))
    try:
        if fmt == "csv_bounds":
            return validate_batch(rows)
        arr = list(zip(*rows)) if rows else [[], [], [], []]
        return Batch.from_bands(arr[0], arr[1], arr[2], arr[3])
    except (NonFiniteValue, NegativeBand) as err:
        raise _attach_line(err, first_data_line=2) from None


def _read_ndjson(path: Path) -> Batch:
    bounds_rows = []
    bands_rows = []
    with open(path) as handle:
        for line, text in enumerate(handle, start=1):
            text = text.strip()
            if not text:
                continue
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as err:
                raise ParseError(line, f"line {line}: {err.msg}") from None
            if not isinstance(obj, dict):
                raise ParseError(line, f"line {line}: expected a JSON object")
            keys = frozenset(obj)
            if keys == _BOUND_KEYS:
                bounds_rows.append((line, obj))
            elif keys == _BAND_KEYS:
                bands_rows.append((line, obj))
            else:
                raise ParseError(
                    line,
                    f"line {line}: keys must be exactly {sorted(_BOUND_KEYS)} "
                    f"or {sorted(_BAND_KEYS)}",
                )
    if bounds_rows and bands_rows:
        raise ParseError(
            max(bounds_rows[0][0], bands_rows[0][0]),
            "file mixes bound-form and band-form objects",
        )
    rows = bounds_rows or bands_rows
    for idx, (line, obj) in enumerate(rows):
        for key, value in obj.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ParseError(line, f"line {line}: {key} must be numeric")
            if not math.isfinite(value):
                raise NonFiniteValue(idx, f"NonFiniteValue at line {line}")
    if bounds_rows:
        data = [(o["y"], o["y_hat"], o["y_lower"], o["y_upper"]) for _, o in bounds_rows]
        try:
            return validate_batch(data)
        except (NonFiniteValue, NegativeBand) as err:
            raise type(err)(err.index, f"{type(err).__name__} at line {bounds_rows[err.index][0]}") from None
    data = [(o["y"], o["y_hat"], o["z_lower"], o["z_upper"]) for _, o in bands_rows]
    try:
        cols = list(zip(*data)) if data else [[], [], [], []]
        return Batch.from_bands(cols[0], cols[1], cols[2], cols[3])
    except (NonFiniteValue, NegativeBand) as err:
        raise type(err)(err.index, f"{type(err).__name__} at line {bands_rows[err.index][0]}") from None


def read_batch(path, fmt: str) -> Batch:
    """Read a batch from ``path`` in one of :data:`FORMATS`."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    path = Path(path)
    if fmt == "json":
        return _read_ndjson(path)
    return _read_csv(path, fmt)


def write_batch_csv(batch: Batch, path, fmt: str = "csv_bands") -> None:
    """Write a batch as CSV in band or bound form (full float precision)."""
    if fmt not in _HEADERS:
        raise ValueError(f"format must be csv_bounds or csv_bands, got {fmt!r}")
    path = Path(path)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(_HEADERS[fmt])
        if fmt == "csv_bands":
            columns = (batch.y, batch.y_hat, batch.z_lower, batch.z_upper)
        else:
            columns = (batch.y, batch.y_hat, batch.lower_bounds, batch.upper_bounds)
        for row in zip(*columns):
            writer.writerow([repr(float(v)) for v in row])


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    digest.update(Path(path).read_bytes())
    return digest.hexdigest()


@dataclass
class Report:
    """A single JSON document collecting everything one invocation produced.

    ``parse(serialize(r))`` returns an equal report; numbers survive the
    round trip bit-for-bit (shortest-repr floats on both sides).
    """

    command: str
    metadata: dict
    schema_version: int = 1
    curves: list = field(default_factory=list)
    gain: dict | None = None
    test: dict | None = None
    calibration: dict | None = None
    cost: dict | None = None

    def to_json(self) -> str:
        payload = {
            "schema_version": self.schema_version,
            "command": self.command,
            "metadata": self.metadata,
            "curves": self.curves,
            "gain": self.gain,
            "test": self.test,
            "calibration": self.calibration,
            "cost": self.cost,
        }
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        return cls(
            command=data["command"],
            metadata=data["metadata"],
            schema_version=data["schema_version"],
            curves=data["curves"],
            gain=data["gain"],
            test=data["test"],
            calibration=data["calibration"],
            cost=data["cost"],
        )

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())
