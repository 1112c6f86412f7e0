"""Cleaning of the active-power series.

Two filters run in sequence: a wind-range cut that keeps the diagonal part
of the power curve, then a quartile filter on the power/wind ratio that
removes outliers. Quantiles use linear interpolation between order
statistics and the kept interval is closed, [Q1, Q3].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .ingest import SampleRecord

DEFAULT_WIND_MIN = 4.5
DEFAULT_WIND_MAX = 9.0


@dataclass
class CleanSeries:
    """Records surviving both filters, with per-filter removal counts."""

    records: list[SampleRecord]
    removed_wind_range: int = 0
    removed_ratio_iqr: int = 0

    def __len__(self) -> int:
        return len(self.records)


def power_wind_ratio(power: float, wind: float) -> float:
    """Ratio of produced power to wind speed at one instant."""
    if wind <= 0:
        raise DataError(f"power/wind ratio undefined for wind {wind}")
    return power / wind


def filter_wind_range(
    records: list[SampleRecord],
    wind_min: float = DEFAULT_WIND_MIN,
    wind_max: float = DEFAULT_WIND_MAX,
) -> tuple[list[SampleRecord], int]:
    """Keep records with wind in [wind_min, wind_max); order preserved.

    Returns the survivors and the number of removed records. An empty
    result is legal; callers are expected to flag it.
    """
    if not wind_min < wind_max:
        raise DataError(f"invalid wind range [{wind_min}, {wind_max})")
    kept = [r for r in records if wind_min <= r.wind_speed < wind_max]
    return kept, len(records) - len(kept)


def iqr_ratio_filter(records: list[SampleRecord]) -> tuple[list[SampleRecord], int]:
    """Keep records whose power/wind ratio lies in [Q1, Q3] of the ratios.

    Quartiles are computed over the input itself, so the filter is
    invariant under a uniform positive rescaling of power. Order is
    preserved (stable filtering).

    Raises:
        DataError: fewer than 4 records (quartiles ill-defined) or
            non-positive wind present.
    """
    if len(records) < 4:
        raise DataError(f"ratio filter needs at least 4 records, got {len(records)}")
    ratios = np.array([power_wind_ratio(r.power, r.wind_speed) for r in records])
    q1, q3 = np.quantile(ratios, [0.25, 0.75], method="linear")
    kept = [r for r, pw in zip(records, ratios) if q1 <= pw <= q3]
    return kept, len(records) - len(kept)


def clean_series(
    records: list[SampleRecord],
    wind_min: float = DEFAULT_WIND_MIN,
    wind_max: float = DEFAULT_WIND_MAX,
) -> CleanSeries:
    """Wind-range cut followed by the ratio quartile filter."""
    in_range, removed_range = filter_wind_range(records, wind_min, wind_max)
    if not in_range:
        return CleanSeries(records=[], removed_wind_range=removed_range)
    kept, removed_iqr = iqr_ratio_filter(in_range)
    return CleanSeries(
        records=kept,
        removed_wind_range=removed_range,
        removed_ratio_iqr=removed_iqr,
    )
