"""Regression-based health index.

Per sub-bin, the memberships to the high-power concept of every window are
concatenated in time order and fitted with an ordinary least-squares line
against the observation index 1..N. A negative slope means high power
production becomes less typical with time, i.e. aging. The same fit on the
low-power concept flips the reading: there a positive slope means aging.
Because memberships live in [0, 1], slopes are comparable across turbines
and data sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .concepts import WindowConcepts
from .errors import DataError
from .tables import HealthTable

RANK_HIGH = "high"
RANK_MODERATE = "moderate"
RANK_LOW = "low"

DEFAULT_SLOPE_SCALE = 1e5  # table entries are slope * scale


@dataclass(frozen=True)
class MembershipSequence:
    """Concatenated membership values of one rank, in time order."""

    rank: str
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class RegressionIndex:
    """OLS fit of a membership sequence against time order."""

    rank: str
    slope: float
    intercept: float
    n: int


def _rank_column(n_concepts: int, rank: str) -> int:
    if rank == RANK_HIGH:
        return 0
    if rank == RANK_LOW:
        return n_concepts - 1
    if rank == RANK_MODERATE:
        if n_concepts != 3:
            raise DataError("moderate rank is only defined for C=3")
        return 1
    raise DataError(f"unknown rank {rank!r}")


def concat_memberships(
    window_concepts: list[WindowConcepts], rank: str
) -> MembershipSequence:
    """Concatenate one rank's membership column across windows.

    Order is window order, then within-window time order; the result has
    one value per (value, change) point of the sub-bin.
    """
    if not window_concepts:
        raise DataError("no window concepts given")
    cols = []
    for wc in window_concepts:
        col = _rank_column(wc.memberships.shape[1], rank)
        cols.append(wc.memberships[:, col])
    return MembershipSequence(rank=rank, values=np.concatenate(cols))


def ols_slope(sequence: MembershipSequence) -> RegressionIndex:
    """Closed-form least squares of the sequence against x = 1..N."""
    y = np.asarray(sequence.values, dtype=float)
    n = len(y)
    if n < 2:
        raise DataError(f"need at least 2 observations, got {n}")
    x = np.arange(1, n + 1, dtype=float)
    x_mean = x.mean()
    y_mean = y.mean()
    slope = float(((x - x_mean) * (y - y_mean)).sum() / ((x - x_mean) ** 2).sum())
    return RegressionIndex(
        rank=sequence.rank,
        slope=slope,
        intercept=float(y_mean - slope * x_mean),
        n=n,
    )


def regression_table(
    indexes: dict[tuple[int, int], RegressionIndex],
    row_labels: list[str],
    col_labels: list[str],
    scale: float = DEFAULT_SLOPE_SCALE,
) -> HealthTable:
    """Arrange per-sub-bin slopes as a table of slope * scale.

    indexes is keyed by (row, col) positions; cells without an index stay
    missing. A final "sum" row carries the column sums.
    """
    values = np.full((len(row_labels), len(col_labels)), np.nan)
    for (i, j), index in indexes.items():
        values[i, j] = index.slope * scale
    return HealthTable(
        row_labels=list(row_labels),
        col_labels=list(col_labels),
        values=values,
        with_row_sums=False,
    )
