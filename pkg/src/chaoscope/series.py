"""Loading and transforming scalar time series.

All estimators in this package consume a TimeSeries; the recommended
pipeline is load -> (optional log returns) -> min-max normalize, so that
box grids and distance scales are unit-free.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TimeSeries",
    "SeriesError",
    "load_csv",
    "to_log_returns",
    "min_max_normalize",
]


class SeriesError(ValueError):
    """Invalid series input (bad file, bad values, too short)."""


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled scalar observations.

    values are immutable (ndarray with writeable=False); sample_interval is
    in abstract time units, 1.0 meaning one observation step.
    """

    values: np.ndarray
    sample_interval: float = 1.0
    label: str = ""
    transform_history: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 2:
            raise SeriesError(
                f"series must contain at least 2 observations, got {arr.size}"
            )
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise SeriesError(f"non-finite value at index {bad}")
        if not self.sample_interval > 0:
            raise SeriesError(f"sample_interval must be > 0, got {self.sample_interval}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "transform_history", tuple(self.transform_history))

    def __len__(self) -> int:
        return int(self.values.size)

    def with_values(self, values: np.ndarray, transform: str) -> "TimeSeries":
        return TimeSeries(
            values=values,
            sample_interval=self.sample_interval,
            label=self.label,
            transform_history=self.transform_history + (transform,),
        )


def load_csv(
    path,
    value_column=0,
    delimiter: str = ",",
    skip_header: bool = False,
    label: str | None = None,
) -> TimeSeries:
    """Read one scalar observation per row from a delimited text file.

    value_column may be a 0-based index or, when the file has a header, a
    column name. Missing or unparseable cells are hard errors naming the
    offending row.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise SeriesError(f"cannot read {path}: {exc}") from exc

    values = []
    with fh:
        reader = csv.reader(fh, delimiter=delimiter)
        col = value_column
        for rownum, row in enumerate(reader, start=1):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            if rownum == 1 and (skip_header or isinstance(col, str)):
                if isinstance(col, str):
                    try:
                        col = row.index(col)
                    except ValueError:
                        raise SeriesError(
                            f"column {value_column!r} not found in header {row}"
                        ) from None
                continue
            if not isinstance(col, int):
                raise SeriesError(
                    f"value_column {col!r} is a name but the file has no header row"
                )
            if col >= len(row):
                raise SeriesError(f"row {rownum}: no column {col}")
            cell = row[col].strip()
            try:
                values.append(float(cell))
            except ValueError:
                raise SeriesError(
                    f"row {rownum}: cannot parse {cell!r} as a number"
                ) from None

    if len(values) < 2:
        raise SeriesError(f"fewer than 2 observations in {path}")
    return TimeSeries(
        values=np.array(values),
        label=label if label is not None else str(path),
        transform_history=("raw",),
    )


def to_log_returns(s: TimeSeries) -> TimeSeries:
    """ln(x[i+1]/x[i]); requires strictly positive values."""
    x = s.values
    if np.any(x <= 0):
        bad = int(np.flatnonzero(x <= 0)[0])
        raise SeriesError(f"log returns need positive values; values[{bad}] = {x[bad]}")
    return s.with_values(np.diff(np.log(x)), "log_returns")


def min_max_normalize(s: TimeSeries) -> TimeSeries:
    """Affine map of values onto [0, 1]; errors on a constant series."""
    x = s.values
    lo, hi = float(x.min()), float(x.max())
    if not hi > lo:
        raise SeriesError("cannot normalize a constant series (zero range)")
    return s.with_values((x - lo) / (hi - lo), "min_max_normalize")
