import numpy as np
import pytest

from windhealth.concepts import extract_concepts
from windhealth.distance import (
    CentroidPair,
    NormBounds,
    di_table,
    distance_index,
    DistanceIndex,
    emit_region_map,
    normalize_coords,
    normalized_pair,
    pair_distance,
    rank_centroid_series,
    secondary_clustering,
)
from windhealth.errors import DataError

BOUNDS = NormBounds()


def test_secondary_clustering_two_mass_series():
    series = np.array([[10.0, 0.0], [20.0, 0.0]] * 10)
    pair = secondary_clustering(series, "high", seed=3)
    assert np.abs(pair.v_low - [10.0, 0.0]).max() < 1e-6
    assert np.abs(pair.v_high - [20.0, 0.0]).max() < 1e-6


def test_secondary_clustering_identical_centroids_degenerate():
    series = np.array([[50.0, 1.0]] * 12)
    pair = secondary_clustering(series, "low", seed=1)
    np.testing.assert_allclose(pair.v_low, pair.v_high)
    assert pair_distance(pair) == pytest.approx(0.0)


def test_secondary_clustering_is_permutation_invariant():
    rng = np.random.default_rng(8)
    series = rng.normal([50_000.0, 0.0], [3000.0, 800.0], size=(20, 2))
    base = secondary_clustering(series, "high", seed=5)
    for perm_seed in range(4):
        perm = np.random.default_rng(perm_seed).permutation(20)
        other = secondary_clustering(series[perm], "high", seed=5)
        np.testing.assert_array_equal(base.v_low, other.v_low)
        np.testing.assert_array_equal(base.v_high, other.v_high)


def test_secondary_clustering_requires_two_points():
    with pytest.raises(DataError):
        secondary_clustering(np.array([[1.0, 2.0]]), "high")


def test_normalize_coords_paper_bounds():
    assert normalize_coords(np.array([40_000.0, 0.0]), BOUNDS)[0] == 0.0
    assert normalize_coords(np.array([100_000.0, 0.0]), BOUNDS)[0] == 1.0
    assert normalize_coords(np.array([70_000.0, 0.0]), BOUNDS)[0] == 0.5
    assert normalize_coords(np.array([70_000.0, 0.0]), BOUNDS)[1] == 0.5


def test_normalize_coords_no_clamping_outside_bounds():
    v = normalize_coords(np.array([130_000.0, -30_000.0]), BOUNDS)
    assert v[0] == pytest.approx(1.5)
    assert v[1] == pytest.approx(-0.25)
    assert not BOUNDS.contains(np.array([130_000.0, -30_000.0]))
    assert BOUNDS.contains(np.array([70_000.0, 0.0]))


def test_norm_bounds_reject_degenerate():
    with pytest.raises(DataError):
        NormBounds(power_min=1.0, power_max=1.0)


def make_pairs(sep=(0.0, 0.0, 0.0)):
    pairs = []
    for rank, s in zip(("high", "moderate", "low"), sep):
        pairs.append(
            CentroidPair(
                rank=rank,
                v_low=np.array([0.5 - s / 2, 0.5]),
                v_high=np.array([0.5 + s / 2, 0.5]),
            )
        )
    return pairs


def test_distance_index_zero_for_coincident_pairs():
    di = distance_index(make_pairs())
    assert di.value == 0.0
    assert all(v == 0.0 for v in di.components.values())


def test_distance_index_additivity():
    pairs = [
        CentroidPair("high", np.array([0.0, 0.0]), np.array([1.0, 0.0])),
        CentroidPair("moderate", np.array([0.0, 0.0]), np.array([0.0, 1.0])),
        CentroidPair("low", np.array([0.0, 0.0]), np.array([0.6, 0.8])),
    ]
    di = distance_index(pairs)
    assert di.value == pytest.approx(3.0)
    assert di.value == pytest.approx(sum(di.components.values()))


def test_distance_index_manhattan_metric():
    pairs = make_pairs((0.2, 0.0, 0.0))
    d_e = distance_index(pairs, metric="euclidean").value
    d_m = distance_index(pairs, metric="manhattan").value
    assert d_e == pytest.approx(0.2) and d_m == pytest.approx(0.2)
    diag = [CentroidPair("high", np.zeros(2), np.ones(2))] + make_pairs()[1:]
    assert distance_index(diag, metric="manhattan").value == pytest.approx(2.0)


def test_distance_index_requires_exactly_three_distinct_ranks():
    with pytest.raises(DataError):
        distance_index(make_pairs()[:2])
    dup = make_pairs()
    dup[1] = CentroidPair("high", dup[1].v_low, dup[1].v_high)
    with pytest.raises(DataError):
        distance_index(dup)


def test_distance_index_monotone_under_injected_drift():
    # rank centroids split into two halves separated by t along the power
    # axis; a larger separation must not shrink the index
    rng = np.random.default_rng(2)
    base = rng.normal([50_000.0, 0.0], [200.0, 100.0], size=(20, 2))
    values = []
    for t in (0.0, 2_000.0, 10_000.0):
        pairs = []
        for pos, rank in enumerate(("high", "moderate", "low")):
            series = base.copy()
            series[10:, 0] += t
            pairs.append(
                normalized_pair(
                    secondary_clustering(series, rank, seed=pos), BOUNDS
                )
            )
        values.append(distance_index(pairs).value)
    assert values[0] <= values[1] <= values[2]
    assert values[2] > values[0]


def test_rank_centroid_series_window_order():
    values = np.random.default_rng(0).uniform(0, 100, 120).tolist()
    wcs = extract_concepts(values, n_windows=4, n_concepts=3, seed_fn=lambda w: w)
    series = rank_centroid_series(wcs, 0)
    assert series.shape == (4, 2)
    for w, wc in enumerate(wcs):
        np.testing.assert_array_equal(series[w], wc.centroids[0])


def test_di_table_single_cell_and_grand_total():
    indexes = {(0, 0): DistanceIndex(0.52, {"high": 0.2, "moderate": 0.12, "low": 0.2})}
    table = di_table(indexes, ["15.0"], ["[5, 5.5)"])
    assert table.values[0, 0] == pytest.approx(0.52)
    assert table.grand_total() == pytest.approx(0.52)
    assert table.row_sums()[0] == pytest.approx(0.52)

    indexes = {
        (0, 0): DistanceIndex(0.5, {}),
        (0, 1): DistanceIndex(0.25, {}),
        (1, 0): DistanceIndex(0.125, {}),
    }
    table = di_table(indexes, ["15.0", "20.0"], ["a", "b"])
    assert table.grand_total() == pytest.approx(0.875)
    assert table.grand_total() == pytest.approx(
        table.row_sums().sum()
    ) == pytest.approx(table.col_sums().sum())


def test_di_table_csv_has_sum_column(tmp_path):
    indexes = {(0, 0): DistanceIndex(0.5, {})}
    table = di_table(indexes, ["15.0"], ["[5, 5.5)"])
    path = tmp_path / "di.csv"
    table.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0].endswith(",sum")
    assert lines[-1].split(",")[-1] == "0.5"


def test_region_map_bisector_split(tmp_path):
    pairs = [CentroidPair("high", np.array([0.0, 0.0]), np.array([1.0, 1.0]))]
    path = tmp_path / "region.csv"
    rows = emit_region_map(pairs, 10, path)
    assert rows == 100
    lines = path.read_text().strip().splitlines()[1:]
    for line in lines:
        x, y, label = line.split(",")
        margin = float(x) + float(y) - 1.0
        if abs(margin) < 1e-12:
            continue  # exact ties on the bisector are float hair
        assert label == ("L" if margin < 0 else "H")


def test_region_map_tie_goes_to_low(tmp_path):
    pairs = make_pairs()  # all six centroids coincide
    path = tmp_path / "region.csv"
    emit_region_map(pairs, 5, path)
    labels = {line.split(",")[2] for line in path.read_text().strip().splitlines()[1:]}
    assert labels == {"L"}


def test_region_map_row_count(tmp_path):
    path = tmp_path / "region.csv"
    assert emit_region_map(make_pairs(), 100, path) == 10_000
    assert len(path.read_text().strip().splitlines()) == 10_001
