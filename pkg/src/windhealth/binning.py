"""Operating-condition binning.

Clean data is partitioned into wind bins of fixed width crossed with
temperature intervals. Temperature intervals come from 1-D (or generally
n-D) k-means centroids: interval bounds are midpoints between consecutive
centroids, so assignment by interval equals nearest-centroid assignment,
with ties going to the lower centroid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .ingest import SampleRecord

DEFAULT_BIN_START = 5.0
DEFAULT_BIN_END = 7.5
DEFAULT_BIN_WIDTH = 0.5
DEFAULT_TEMP_CLUSTERS = 4

_REL_TOL = 1e-9


@dataclass(frozen=True)
class WindBin:
    """Half-open wind-speed interval [lower, upper)."""

    lower: float
    upper: float
    partial: bool = False  # trailing bin narrower than the configured width

    def contains(self, wind: float) -> bool:
        return self.lower <= wind < self.upper

    @property
    def label(self) -> str:
        return f"[{self.lower:g}, {self.upper:g})"


@dataclass(frozen=True)
class TempCluster:
    """Temperature interval (lower, upper] around one k-means centroid.

    Outermost bounds are infinite; a value on an interior bound belongs to
    the lower cluster, matching nearest-centroid assignment with ties
    broken toward the lower centroid.
    """

    centroid: float
    lower: float
    upper: float

    def contains(self, temp: float) -> bool:
        return self.lower < temp <= self.upper

    @property
    def label(self) -> str:
        return f"{self.centroid:.1f}"


@dataclass
class SubBin:
    """Time-ordered samples falling into one wind x temperature cell."""

    wind_bin: WindBin
    temp_cluster: TempCluster
    samples: list[SampleRecord] = field(default_factory=list)

    @property
    def key(self) -> tuple[str, str]:
        return (self.wind_bin.label, self.temp_cluster.label)


def make_wind_bins(
    start: float = DEFAULT_BIN_START,
    end: float = DEFAULT_BIN_END,
    width: float = DEFAULT_BIN_WIDTH,
) -> list[WindBin]:
    """Tile [start, end) with contiguous half-open bins of the given width.

    A trailing partial bin is emitted (and flagged) only when the range is
    not an exact multiple of the width.
    """
    if not start < end:
        raise DataError(f"invalid bin range [{start}, {end})")
    if width <= 0:
        raise DataError(f"invalid bin width {width}")
    span = (end - start) / width
    n_full = int(math.floor(span + _REL_TOL))
    bins = [WindBin(start + i * width, start + (i + 1) * width) for i in range(n_full)]
    last_edge = start + n_full * width
    if end - last_edge > _REL_TOL * width:
        bins.append(WindBin(last_edge, end, partial=True))
    return bins


def kmeans(
    points: np.ndarray,
    k: int,
    seed: int = 0,
    max_iter: int = 100,
    tol: float = 1e-10,
    n_restarts: int = 8,
) -> tuple[np.ndarray, np.ndarray]:
    """Lloyd k-means with seeded farthest-point starts and restarts.

    Each restart draws its first centroid from the seeded generator and
    picks every further one as the point farthest from the chosen set; the
    restart with the lowest within-cluster squared distance wins. An empty
    cluster is repaired by re-seeding it with the point farthest from its
    assigned centroid. Returns (centroids, assignment); every cluster is
    non-empty and identical inputs plus seed give identical output.

    Args:
        points: (n,) or (n, d) array.
        k: number of clusters, 1 <= k <= n.
        seed: PRNG seed.
        max_iter: Lloyd iteration cap per restart.
        tol: stop when the largest centroid movement falls below tol.
        n_restarts: independent seeded starts (first pick varies).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = len(pts)
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    if n < k:
        raise DataError(f"k-means needs at least k={k} points, got {n}")
    if not np.isfinite(pts).all():
        raise DataError("k-means input contains non-finite values")
    if n_restarts < 1:
        raise DataError(f"n_restarts must be >= 1, got {n_restarts}")

    rng = np.random.default_rng(seed)
    best: tuple[float, np.ndarray, np.ndarray] | None = None
    for _ in range(n_restarts):
        first = int(rng.integers(n))
        centroids, assign = _lloyd(pts, k, first, max_iter, tol)
        sse = float(((pts - centroids[assign]) ** 2).sum())
        if best is None or sse < best[0]:
            best = (sse, centroids, assign)
    return best[1], best[2]


def _lloyd(
    pts: np.ndarray, k: int, first: int, max_iter: int, tol: float
) -> tuple[np.ndarray, np.ndarray]:
    n = len(pts)
    chosen = [first]
    d2 = ((pts - pts[first]) ** 2).sum(axis=1)
    for _ in range(1, k):
        idx = int(np.argmax(d2))
        chosen.append(idx)
        d2 = np.minimum(d2, ((pts - pts[idx]) ** 2).sum(axis=1))
    centroids = pts[chosen].copy()

    assign = np.zeros(n, dtype=int)
    for _ in range(max_iter):
        dist2 = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = np.argmin(dist2, axis=1)  # ties resolve to the lowest index
        new_centroids = centroids.copy()
        _repair_empty_clusters(pts, new_centroids, assign, dist2)
        for j in range(k):
            members = assign == j
            if members.any():
                new_centroids[j] = pts[members].mean(axis=0)
        shift = np.abs(new_centroids - centroids).max()
        centroids = new_centroids
        if shift < tol:
            break
    dist2 = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    assign = np.argmin(dist2, axis=1)
    _repair_empty_clusters(pts, centroids, assign, dist2)
    return centroids, assign


def _repair_empty_clusters(
    pts: np.ndarray, centroids: np.ndarray, assign: np.ndarray, dist2: np.ndarray
) -> None:
    """Re-seed each empty cluster with the farthest spare point (in place).

    The donor is the point farthest from its assigned centroid among
    clusters that keep at least one member; with all distances zero
    (coincident points) any spare point serves.
    """
    k = len(centroids)
    n = len(pts)
    sizes = np.bincount(assign, minlength=k)
    if (sizes > 0).all():
        return
    own_dist2 = dist2[np.arange(n), assign].astype(float)
    for j in range(k):
        if sizes[j] > 0:
            continue
        spare = sizes[assign] > 1
        if not spare.any():
            continue
        masked = np.where(spare, own_dist2, -np.inf)
        far = int(np.argmax(masked))
        sizes[assign[far]] -= 1
        assign[far] = j
        sizes[j] = 1
        centroids[j] = pts[far]
        own_dist2[far] = -np.inf


def temperature_boundaries(centroids: list[float] | np.ndarray) -> list[TempCluster]:
    """Build covering temperature intervals from sorted, distinct centroids.

    Interior bounds are midpoints between consecutive centroids; the first
    and last intervals extend to -inf / +inf.
    """
    cents = [float(c) for c in centroids]
    if any(b <= a for a, b in zip(cents, cents[1:])):
        raise DataError("temperature centroids must be sorted and distinct")
    mids = [(a + b) / 2.0 for a, b in zip(cents, cents[1:])]
    bounds = [-math.inf] + mids + [math.inf]
    return [
        TempCluster(centroid=c, lower=bounds[i], upper=bounds[i + 1])
        for i, c in enumerate(cents)
    ]


def fit_temperature_clusters(
    temperatures: np.ndarray, k: int, seed: int = 0
) -> list[TempCluster]:
    """k-means on the temperature channel, returned as covering intervals."""
    centroids, _ = kmeans(np.asarray(temperatures, dtype=float), k, seed=seed)
    cents = np.sort(centroids[:, 0])
    if len(np.unique(cents)) < len(cents):
        # coincident centroids: collapse duplicates to keep intervals valid
        cents = np.unique(cents)
    return temperature_boundaries(cents)


def assign_subbins(
    records: list[SampleRecord],
    wind_bins: list[WindBin],
    temp_clusters: list[TempCluster],
) -> tuple[list[SubBin], int]:
    """Route each record into exactly one sub-bin, keeping time order.

    Records whose wind falls outside every bin are discarded (counted).
    Empty sub-bins are retained so callers can flag them. Returns
    (sub-bins in (wind, temperature) order, discarded count).
    """
    subbins = [
        SubBin(wind_bin=wb, temp_cluster=tc)
        for wb in wind_bins
        for tc in temp_clusters
    ]
    edges = [wb.lower for wb in wind_bins]
    n_temp = len(temp_clusters)
    discarded = 0
    for rec in records:
        wi = np.searchsorted(edges, rec.wind_speed, side="right") - 1
        if wi < 0 or not wind_bins[wi].contains(rec.wind_speed):
            discarded += 1
            continue
        ti = _temp_index(temp_clusters, rec.temperature)
        subbins[wi * n_temp + ti].samples.append(rec)
    return subbins, discarded


def _temp_index(clusters: list[TempCluster], temp: float) -> int:
    mids = [c.upper for c in clusters[:-1]]
    return int(np.searchsorted(mids, temp, side="left"))
