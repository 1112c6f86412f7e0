import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from windhealth.binning import (
    assign_subbins,
    fit_temperature_clusters,
    kmeans,
    make_wind_bins,
    temperature_boundaries,
)
from windhealth.errors import DataError
from tests.conftest import make_records


def test_make_wind_bins_table_layout():
    bins = make_wind_bins(5.0, 7.5, 0.5)
    assert [b.label for b in bins] == [
        "[5, 5.5)", "[5.5, 6)", "[6, 6.5)", "[6.5, 7)", "[7, 7.5)"
    ]
    assert not any(b.partial for b in bins)


def test_make_wind_bins_full_range_count():
    assert len(make_wind_bins(4.5, 9.0, 0.5)) == 9


def test_make_wind_bins_rejects_empty_range():
    with pytest.raises(DataError):
        make_wind_bins(5.0, 5.0, 0.5)


def test_make_wind_bins_partial_tail_is_flagged():
    bins = make_wind_bins(5.0, 7.3, 0.5)
    assert len(bins) == 5
    assert bins[-1].partial and bins[-1].upper == pytest.approx(7.3)


def brute_force_kmeans_2(points):
    """Best 2-cluster objective by enumerating every 2-partition."""
    best = (np.inf, None)
    n = len(points)
    pts = np.asarray(points, dtype=float).reshape(n, -1)
    for mask_bits in range(1, 2**n - 1):
        mask = np.array([(mask_bits >> i) & 1 for i in range(n)], dtype=bool)
        c0 = pts[mask].mean(axis=0)
        c1 = pts[~mask].mean(axis=0)
        sse = ((pts[mask] - c0) ** 2).sum() + ((pts[~mask] - c1) ** 2).sum()
        if sse < best[0]:
            best = (sse, sorted([float(c0[0]), float(c1[0])]))
    return best


def test_kmeans_matches_partition_enumeration():
    pts = np.array([0.0, 0.0, 10.0, 10.0])
    centroids, assign = kmeans(pts, 2, seed=1)
    got = sorted(centroids[:, 0].tolist())
    best_sse, best_centroids = brute_force_kmeans_2(pts)
    assert got == pytest.approx(best_centroids)
    # objective of the returned clustering equals the enumerated optimum
    sse = sum(
        (pts[i] - centroids[assign[i], 0]) ** 2 for i in range(len(pts))
    )
    assert sse == pytest.approx(best_sse)


def test_kmeans_identical_points_single_cluster():
    centroids, assign = kmeans(np.array([4.2, 4.2, 4.2]), 1, seed=0)
    assert centroids[0, 0] == pytest.approx(4.2)
    assert (assign == 0).all()


def test_kmeans_every_cluster_nonempty_even_with_duplicates():
    centroids, assign = kmeans(np.array([1.0, 1.0, 1.0, 1.0]), 2, seed=7)
    assert set(assign.tolist()) == {0, 1}


def test_kmeans_returns_fixed_point():
    rng = np.random.default_rng(3)
    pts = np.concatenate([rng.normal(0, 1, 30), rng.normal(12, 1, 30)])
    centroids, assign = kmeans(pts, 2, seed=5)
    dist2 = (pts[:, None] - centroids[None, :, 0]) ** 2
    assert np.array_equal(np.argmin(dist2, axis=1), assign)
    for j in range(2):
        assert centroids[j, 0] == pytest.approx(pts[assign == j].mean())


def test_kmeans_seed_determinism():
    pts = np.random.default_rng(0).normal(size=50)
    a = kmeans(pts, 3, seed=11)
    b = kmeans(pts, 3, seed=11)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_kmeans_too_few_points():
    with pytest.raises(DataError):
        kmeans(np.array([1.0]), 2)


def test_temperature_boundaries_midpoints():
    clusters = temperature_boundaries([15.0, 18.0, 22.0, 27.0])
    assert [c.upper for c in clusters[:-1]] == [16.5, 20.0, 24.5]
    assert clusters[0].lower == -np.inf and clusters[-1].upper == np.inf


def test_temperature_boundaries_single_centroid_covers_reals():
    clusters = temperature_boundaries([20.0])
    assert len(clusters) == 1
    assert clusters[0].contains(-1e9) and clusters[0].contains(1e9)


def test_temperature_boundary_tie_goes_to_lower_centroid():
    clusters = temperature_boundaries([0.0, 10.0])
    assert clusters[0].contains(5.0) and not clusters[1].contains(5.0)


def test_temperature_boundaries_reject_duplicates():
    with pytest.raises(DataError):
        temperature_boundaries([15.0, 15.0])


# eighth-steps are exactly representable, so midpoints and distance
# comparisons involve no rounding and the tie rule is exercised exactly
_grid = st.integers(min_value=-400, max_value=400).map(lambda i: i / 8.0)


@settings(max_examples=50, deadline=None)
@given(
    centroids=st.lists(_grid, min_size=1, max_size=6, unique=True),
    temps=st.lists(_grid, min_size=1, max_size=30),
)
def test_interval_assignment_equals_nearest_centroid(centroids, temps):
    cents = sorted(centroids)
    clusters = temperature_boundaries(cents)
    for t in temps:
        by_interval = next(i for i, c in enumerate(clusters) if c.contains(t))
        dists = [abs(t - c) for c in cents]
        by_nearest = int(np.argmin(dists))  # argmin ties -> lower centroid
        assert by_interval == by_nearest


def test_assign_subbins_routes_example_record():
    records = make_records(winds=[6.2], temps=[17.0])
    bins = make_wind_bins(5.0, 7.5, 0.5)
    clusters = temperature_boundaries([15.0, 18.0, 22.0, 27.0])
    subbins, discarded = assign_subbins(records, bins, clusters)
    assert discarded == 0
    hit = [sb for sb in subbins if sb.samples]
    assert len(hit) == 1
    assert hit[0].wind_bin.label == "[6, 6.5)"
    assert hit[0].temp_cluster.centroid == 18.0


def test_assign_subbins_discards_out_of_range_wind():
    records = make_records(winds=[9.5], temps=[20.0])
    bins = make_wind_bins(5.0, 7.5, 0.5)
    clusters = temperature_boundaries([15.0, 20.0])
    subbins, discarded = assign_subbins(records, bins, clusters)
    assert discarded == 1
    assert all(not sb.samples for sb in subbins)


def test_assign_subbins_keeps_time_order_and_empty_cells():
    rng = np.random.default_rng(2)
    records = make_records(
        winds=rng.uniform(5.0, 7.5, 200), temps=rng.uniform(10, 30, 200)
    )
    bins = make_wind_bins(5.0, 7.5, 0.5)
    clusters = temperature_boundaries([15.0, 18.0, 22.0, 27.0])
    subbins, discarded = assign_subbins(records, bins, clusters)
    assert len(subbins) == 20  # empty cells retained
    for sb in subbins:
        stamps = [r.timestamp for r in sb.samples]
        assert stamps == sorted(stamps)


@settings(max_examples=30, deadline=None)
@given(
    winds=st.lists(st.floats(min_value=0, max_value=12), min_size=1, max_size=60),
    temps_seed=st.integers(min_value=0, max_value=1000),
)
def test_partition_property(winds, temps_seed):
    rng = np.random.default_rng(temps_seed)
    records = make_records(winds=winds, temps=rng.uniform(0, 40, len(winds)))
    bins = make_wind_bins(5.0, 7.5, 0.5)
    clusters = temperature_boundaries([15.0, 25.0])
    subbins, discarded = assign_subbins(records, bins, clusters)
    assert sum(len(sb.samples) for sb in subbins) + discarded == len(records)


def test_uniform_data_fills_every_subbin():
    rng = np.random.default_rng(9)
    n = 4000
    centers = np.array([15.0, 18.0, 22.0, 27.0])
    records = make_records(
        winds=rng.uniform(5.0, 7.5, n),
        temps=centers[rng.integers(0, 4, n)] + rng.normal(0, 0.5, n),
    )
    clusters = fit_temperature_clusters(
        np.array([r.temperature for r in records]), 4, seed=1
    )
    bins = make_wind_bins(5.0, 7.5, 0.5)
    subbins, discarded = assign_subbins(records, bins, clusters)
    assert discarded == 0
    sizes = np.array([len(sb.samples) for sb in subbins])
    assert (sizes > 0).all()
    # 20 cells, uniform over wind x equiprobable clusters: n/20 each +- 5 sigma
    expected = n / 20
    sigma = np.sqrt(n * (1 / 20) * (19 / 20))
    assert np.abs(sizes - expected).max() < 5 * sigma


def test_fit_temperature_clusters_recovers_centers():
    rng = np.random.default_rng(4)
    centers = np.array([15.0, 18.0, 22.0, 27.0])
    temps = centers[rng.integers(0, 4, 5000)] + rng.normal(0, 0.8, 5000)
    clusters = fit_temperature_clusters(temps, 4, seed=2)
    fitted = np.array([c.centroid for c in clusters])
    assert np.abs(fitted - centers).max() < 0.5
