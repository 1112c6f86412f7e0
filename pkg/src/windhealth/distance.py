"""Distance-based health index.

For each concept rank, the R window centroids form a short sequence in
(value, change of value) space. A secondary fuzzy 2-means run splits that
sequence into a low pair member v_L and a high pair member v_H (sorted by
the power coordinate). The distance index of a sub-bin is the sum of the
pair distances over the three ranks, computed on coordinates normalized to
fixed per-dimension bounds so values are comparable across turbines. A
stationary process yields near-coincident pairs and an index near zero;
drift pushes the pair apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fcm
from .concepts import WindowConcepts
from .errors import DataError
from .tables import HealthTable

METRIC_EUCLIDEAN = "euclidean"
METRIC_MANHATTAN = "manhattan"

DEFAULT_POWER_MIN = 40_000.0
DEFAULT_POWER_MAX = 100_000.0
DEFAULT_DPOWER_MIN = -20_000.0
DEFAULT_DPOWER_MAX = 20_000.0


@dataclass(frozen=True)
class NormBounds:
    """Per-dimension normalization bounds for (power, change of power)."""

    power_min: float = DEFAULT_POWER_MIN
    power_max: float = DEFAULT_POWER_MAX
    dpower_min: float = DEFAULT_DPOWER_MIN
    dpower_max: float = DEFAULT_DPOWER_MAX

    def __post_init__(self):
        if self.power_max <= self.power_min or self.dpower_max <= self.dpower_min:
            raise DataError("normalization bounds need max > min per dimension")

    @property
    def mins(self) -> np.ndarray:
        return np.array([self.power_min, self.dpower_min])

    @property
    def spans(self) -> np.ndarray:
        return np.array(
            [self.power_max - self.power_min, self.dpower_max - self.dpower_min]
        )

    def contains(self, point: np.ndarray) -> bool:
        p = np.asarray(point, dtype=float)
        return bool((p >= self.mins).all() and (p <= self.mins + self.spans).all())


@dataclass(frozen=True)
class CentroidPair:
    """The secondary-clustering pair of one rank, sorted by power coordinate."""

    rank: str
    v_low: np.ndarray
    v_high: np.ndarray


@dataclass(frozen=True)
class DistanceIndex:
    """Sub-bin distance index with its per-rank components."""

    value: float
    components: dict[str, float]


def rank_centroid_series(
    window_concepts: list[WindowConcepts], rank_position: int
) -> np.ndarray:
    """Window-ordered (R, 2) array of one rank's centroids."""
    if not window_concepts:
        raise DataError("no window concepts given")
    return np.array([wc.centroids[rank_position] for wc in window_concepts])


def secondary_clustering(
    centroid_series: np.ndarray,
    rank: str,
    m: float = fcm.DEFAULT_FUZZIFIER,
    eps: float = fcm.DEFAULT_EPS,
    max_iter: int = fcm.DEFAULT_MAX_ITER,
    seed: int = 0,
) -> CentroidPair:
    """Split one rank's window centroids into its (low, high) pair.

    The input is canonicalized by a lexicographic sort before clustering so
    the outcome cannot depend on the window order of equal multisets. The
    fitted pair is sorted by power coordinate (ties: change coordinate
    ascending).
    """
    pts = np.asarray(centroid_series, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DataError("centroid series must be an (R, 2) array")
    if len(pts) < 2:
        raise DataError(f"secondary clustering needs at least 2 centroids, got {len(pts)}")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    result = fcm.fcm_fit(pts[order], 2, m=m, eps=eps, max_iter=max_iter, seed=seed)
    a, b = result.centroids
    if (a[0], a[1]) <= (b[0], b[1]):
        low, high = a, b
    else:
        low, high = b, a
    return CentroidPair(rank=rank, v_low=low, v_high=high)


def normalize_coords(point: np.ndarray, bounds: NormBounds) -> np.ndarray:
    """Affine map of (power, change) coordinates onto the bounds box.

    Values outside the box map outside [0, 1] without clamping; use
    bounds.contains to flag them.
    """
    p = np.asarray(point, dtype=float)
    return (p - bounds.mins) / bounds.spans


def pair_distance(pair: CentroidPair, metric: str = METRIC_EUCLIDEAN) -> float:
    diff = np.asarray(pair.v_high, dtype=float) - np.asarray(pair.v_low, dtype=float)
    if metric == METRIC_EUCLIDEAN:
        return float(np.sqrt((diff**2).sum()))
    if metric == METRIC_MANHATTAN:
        return float(np.abs(diff).sum())
    raise DataError(f"unknown metric {metric!r}")


def distance_index(
    pairs: list[CentroidPair], metric: str = METRIC_EUCLIDEAN
) -> DistanceIndex:
    """Sum of pair distances over the three concept ranks.

    Expects exactly the high/moderate/low pairs, already normalized when
    the normalized index is wanted.
    """
    if len(pairs) != 3:
        raise DataError(f"distance index needs exactly 3 rank pairs, got {len(pairs)}")
    ranks = [p.rank for p in pairs]
    if len(set(ranks)) != 3:
        raise DataError(f"duplicate ranks in {ranks}")
    components = {p.rank: pair_distance(p, metric) for p in pairs}
    return DistanceIndex(value=float(sum(components.values())), components=components)


def normalized_pair(pair: CentroidPair, bounds: NormBounds) -> CentroidPair:
    return CentroidPair(
        rank=pair.rank,
        v_low=normalize_coords(pair.v_low, bounds),
        v_high=normalize_coords(pair.v_high, bounds),
    )


def di_table(
    indexes: dict[tuple[int, int], DistanceIndex],
    row_labels: list[str],
    col_labels: list[str],
) -> HealthTable:
    """Arrange per-sub-bin distance indexes with row, column and grand sums."""
    values = np.full((len(row_labels), len(col_labels)), np.nan)
    for (i, j), index in indexes.items():
        values[i, j] = index.value
    return HealthTable(
        row_labels=list(row_labels),
        col_labels=list(col_labels),
        values=values,
        with_row_sums=True,
    )


def emit_region_map(
    pairs: list[CentroidPair], grid: int, path
) -> int:
    """Label a grid over the normalized unit square by nearest pair member.

    Cell centers of a grid x grid lattice over [0, 1]^2 are labelled L or H
    by the nearest of the six pair centroids (ties go to L). Pairs must be
    in normalized coordinates. Returns the number of rows written.
    """
    if grid < 1:
        raise DataError(f"grid resolution must be >= 1, got {grid}")
    if not pairs:
        raise DataError("no pairs given")
    lows = np.array([p.v_low for p in pairs])
    highs = np.array([p.v_high for p in pairs])
    coords = (np.arange(grid) + 0.5) / grid
    rows = 0
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        fh.write("x,y,label\n")
        for y in coords:
            for x in coords:
                cell = np.array([x, y])
                d_low = ((lows - cell) ** 2).sum(axis=1).min()
                d_high = ((highs - cell) ** 2).sum(axis=1).min()
                label = "L" if d_low <= d_high else "H"
                fh.write(f"{float(x)!r},{float(y)!r},{label}\n")
                rows += 1
    return rows
