"""Drifting-concept extraction for one sub-bin.

The sub-bin's time-ordered power values are split into windows. Each
window is mapped into the two-dimensional space of (power value, change of
power value); a point is (z_i, z_i - z_{i-1}) for i = 2..P, so a window of
P values yields P-1 points. Fuzzy c-means then extracts C concepts per
window, which are rank-sorted by decreasing power coordinate: rank 1 is
the high-power concept, rank C the low-power one. Membership columns are
permuted to match the sort.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import fcm
from .errors import DataError, SubBinSkipped

DEFAULT_N_WINDOWS = 20
DEFAULT_N_CONCEPTS = 3
DEFAULT_MIN_WINDOW_DELTAS = 8

RANK_LABELS_3 = ("high", "moderate", "low")


def rank_labels(n_concepts: int) -> tuple[str, ...]:
    """Rank labels, descending by power coordinate; C=3 gets the
    high/moderate/low naming, other C fall back to rank_1..rank_C."""
    if n_concepts == 3:
        return RANK_LABELS_3
    return tuple(f"rank_{i + 1}" for i in range(n_concepts))


@dataclass(frozen=True)
class Concept:
    """One rank-labelled concept centroid of one window."""

    window_index: int  # 1-based
    rank: int  # 1-based, 1 = highest power coordinate
    rank_label: str
    z: float
    dz: float


@dataclass(frozen=True)
class WindowConcepts:
    """Concepts of one window with the matching membership columns.

    centroids has shape (C, 2) sorted by decreasing z (ties: dz
    descending, then original cluster index); memberships has shape
    (P-1, C) with column j belonging to centroids[j].
    """

    window_index: int
    centroids: np.ndarray
    memberships: np.ndarray
    labels: tuple[str, ...]

    @property
    def concepts(self) -> list[Concept]:
        return [
            Concept(
                window_index=self.window_index,
                rank=j + 1,
                rank_label=self.labels[j],
                z=float(self.centroids[j, 0]),
                dz=float(self.centroids[j, 1]),
            )
            for j in range(len(self.centroids))
        ]


def split_windows(samples: Sequence, n_windows: int, min_deltas: int = DEFAULT_MIN_WINDOW_DELTAS) -> list[Sequence]:
    """Split a time-ordered sequence into n_windows contiguous windows.

    Window sizes differ by at most one; the remainder goes to the earliest
    windows. Every window must afford at least min_deltas increment pairs
    (i.e. min_deltas + 1 samples), otherwise the sub-bin is not analyzable.

    Raises:
        SubBinSkipped: too few samples for the requested windowing.
    """
    if n_windows < 1:
        raise DataError(f"need at least one window, got {n_windows}")
    n = len(samples)
    base, rem = divmod(n, n_windows)
    if base < min_deltas + 1:
        raise SubBinSkipped(
            f"{n} samples cannot fill {n_windows} windows with at least "
            f"{min_deltas + 1} samples each"
        )
    windows = []
    start = 0
    for w in range(n_windows):
        size = base + (1 if w < rem else 0)
        windows.append(samples[start : start + size])
        start += size
    return windows


def split_windows_fixed_length(
    samples: Sequence, window_length: int, min_deltas: int = DEFAULT_MIN_WINDOW_DELTAS
) -> list[Sequence]:
    """Alternative windowing: consecutive windows of a fixed sample count.

    A trailing remainder shorter than window_length is dropped. The number
    of windows follows from the data size.
    """
    if window_length < min_deltas + 1:
        raise DataError(
            f"window length {window_length} below minimum {min_deltas + 1}"
        )
    n_windows = len(samples) // window_length
    if n_windows < 1:
        raise SubBinSkipped(
            f"{len(samples)} samples are fewer than one window of {window_length}"
        )
    return [
        samples[w * window_length : (w + 1) * window_length]
        for w in range(n_windows)
    ]


def delta_transform(values: Sequence[float]) -> np.ndarray:
    """Map a value sequence to (value, increment) pairs, starting at index 2.

    Returns a (P-1, 2) array of (z_i, z_i - z_{i-1}) for i = 2..P.
    """
    z = np.asarray(values, dtype=float)
    if len(z) < 2:
        raise DataError(f"delta transform needs at least 2 values, got {len(z)}")
    return np.column_stack([z[1:], np.diff(z)])


def _sort_concepts(result: fcm.FcmResult, labels: tuple[str, ...], window_index: int) -> WindowConcepts:
    cents = result.centroids
    # descending z, then descending dz, then original cluster index
    order = sorted(
        range(len(cents)), key=lambda j: (-cents[j, 0], -cents[j, 1], j)
    )
    return WindowConcepts(
        window_index=window_index,
        centroids=cents[order],
        memberships=result.memberships[:, order],
        labels=labels,
    )


def extract_concepts(
    power_values: Sequence[float],
    n_windows: int | None = DEFAULT_N_WINDOWS,
    n_concepts: int = DEFAULT_N_CONCEPTS,
    m: float = fcm.DEFAULT_FUZZIFIER,
    eps: float = fcm.DEFAULT_EPS,
    max_iter: int = fcm.DEFAULT_MAX_ITER,
    seed_fn: Callable[[int], int] = lambda w: w,
    window_length: int | None = None,
    min_deltas: int = DEFAULT_MIN_WINDOW_DELTAS,
) -> list[WindowConcepts]:
    """Window a sub-bin's power series and extract sorted concepts per window.

    Exactly one of n_windows / window_length selects the windowing mode.
    seed_fn maps the 1-based window index to the fuzzy c-means seed, which
    keeps windows independent yet reproducible.

    Raises:
        SubBinSkipped: not enough data for the windowing or clustering.
    """
    if (n_windows is None) == (window_length is None):
        raise DataError("set exactly one of n_windows / window_length")
    if window_length is not None:
        windows = split_windows_fixed_length(power_values, window_length, min_deltas)
    else:
        windows = split_windows(power_values, n_windows, min_deltas)

    out = []
    labels = rank_labels(n_concepts)
    for w, window_values in enumerate(windows, start=1):
        points = delta_transform(window_values)
        if len(points) < n_concepts:
            raise SubBinSkipped(
                f"window {w} has {len(points)} points, fewer than {n_concepts} concepts"
            )
        result = fcm.fcm_fit(
            points, n_concepts, m=m, eps=eps, max_iter=max_iter, seed=seed_fn(w)
        )
        out.append(_sort_concepts(result, labels, w))
    return out


def emit_concept_scatter(window_concepts: list[WindowConcepts], path: str | Path) -> int:
    """Write concepts as CSV rows (window_index, rank_label, z, dz).

    The window index doubles as the time/colour axis when re-plotting the
    concept drift. Returns the number of rows written.
    """
    if not window_concepts:
        raise DataError("no concepts to write")
    path = Path(path)
    rows = 0
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write("window_index,rank_label,z,dz\n")
        for wc in window_concepts:
            for c in wc.concepts:
                fh.write(f"{c.window_index},{c.rank_label},{c.z!r},{c.dz!r}\n")
                rows += 1
    return rows
