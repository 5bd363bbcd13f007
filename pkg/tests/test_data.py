import numpy as np
import pytest

from outcodes import (
    DataFormatError,
    Dataset,
    EncodingScheme,
    FeatureScaling,
    FoldError,
    SchemeKind,
    TrainConfig,
    accuracy,
    blob_centers,
    dataset_to_csv_text,
    init_params,
    linearly_separable,
    load_csv,
    load_csv_text,
    make_blobs_dataset,
    make_params,
    make_quadrant_dataset,
    normalize_minmax,
    stratified_kfold,
    target_matrix,
    train,
)

# Quadrant occupied by each class; the class's binary code reads the sign
# bits ([y < 0], [x < 0]).
QUADRANT_SIGNS = {1: (1, 1), 2: (-1, 1), 3: (1, -1), 4: (-1, -1)}


# ---------------------------------------------------------------- CSV loading

def test_load_csv_text_remaps_labels():
    dataset = load_csv_text("1,2,0\n3,4,1\n5,6,0\n")
    assert dataset.n_features == 2
    assert dataset.class_count == 2
    assert dataset.labels.tolist() == [1, 2, 1]
    assert dataset.source_labels == (0, 1)
    assert dataset.features.tolist() == [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]


def test_load_csv_from_file_is_stable(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("0.5,1.5,7\n-1,2,9\n0,0,7\n")
    first = load_csv(path)
    second = load_csv(path)
    assert first.source_labels == (7, 9)
    assert np.array_equal(first.features, second.features)
    assert np.array_equal(first.labels, second.labels)


def test_load_csv_detects_header():
    dataset = load_csv_text("x1,x2,label\n1,2,0\n3,4,1\n")
    assert len(dataset) == 2
    assert dataset.labels.tolist() == [1, 2]


def test_load_csv_ragged_row_names_line():
    with pytest.raises(DataFormatError, match="line 2"):
        load_csv_text("1,2,0\n3,4\n5,6,1\n")


def test_load_csv_bad_feature_names_line_and_column():
    with pytest.raises(DataFormatError, match="line 3"):
        load_csv_text("1,2,0\n3,4,1\n5,oops,0\n")


def test_load_csv_bad_label_names_line():
    with pytest.raises(DataFormatError, match="line 2"):
        load_csv_text("1,2,0\n3,4,maybe\n")


def test_load_csv_rejects_nonfinite_feature():
    with pytest.raises(DataFormatError, match="line 1"):
        load_csv_text("nan,2,0\n3,4,1\n")


def test_load_csv_needs_two_columns():
    with pytest.raises(DataFormatError):
        load_csv_text("1\n2\n")


def test_load_csv_empty_input():
    with pytest.raises(DataFormatError):
        load_csv_text("")


def test_load_csv_needs_two_classes():
    with pytest.raises(DataFormatError):
        load_csv_text("1,2,5\n3,4,5\n")


def test_csv_round_trip_keeps_source_labels():
    dataset = load_csv_text("0.25,1,7\n0.5,2,9\n0.125,3,7\n")
    text = dataset_to_csv_text(dataset)
    again = load_csv_text(text)
    assert np.array_equal(dataset.features, again.features)
    assert np.array_equal(dataset.labels, again.labels)
    assert again.source_labels == (7, 9)


def test_dataset_requires_every_class_present():
    with pytest.raises(ValueError):
        Dataset(np.zeros((2, 1)), np.array([1, 3]), 3, (1, 2, 3))


# ---------------------------------------------------------------- scaling

def test_normalize_affine_map():
    dataset = load_csv_text("0,7,1\n5,7,2\n10,7,1\n")
    scaled, scaling = normalize_minmax(dataset)
    assert scaled.features[:, 0].tolist() == [0.0, 0.5, 1.0]
    assert scaled.features[:, 1].tolist() == [0.5, 0.5, 0.5]  # constant column
    assert scaling.minimums.tolist() == [0.0, 7.0]
    assert scaling.maximums.tolist() == [10.0, 7.0]


def test_scaling_extends_beyond_fitted_range():
    scaling = FeatureScaling(np.array([0.0]), np.array([10.0]))
    assert scaling.apply(np.array([[12.0]]))[0, 0] == pytest.approx(1.2, abs=0.0)


def test_normalize_is_idempotent():
    dataset = make_blobs_dataset(3, 20, 0.3, seed=5)
    once, _ = normalize_minmax(dataset)
    twice, _ = normalize_minmax(once)
    assert np.max(np.abs(once.features - twice.features)) < 1e-12


def test_scaling_text_round_trip():
    scaling = FeatureScaling(np.array([-1.5, 0.0]), np.array([2.5, 0.0]))
    again = FeatureScaling.from_text(scaling.to_text())
    assert np.array_equal(scaling.minimums, again.minimums)
    assert np.array_equal(scaling.maximums, again.maximums)


def test_scaling_text_rejects_garbage():
    with pytest.raises(DataFormatError):
        FeatureScaling.from_text("nope\n")


# ---------------------------------------------------------------- folds

def test_kfold_exact_divisibility():
    dataset = load_csv_text(
        "\n".join(f"{i},{i % 2 + 1}" for i in range(10)) + "\n"
    )
    assert dataset.class_counts.tolist() == [5, 5]
    plan = stratified_kfold(dataset, 5, seed=3)
    for fold in range(1, 6):
        members = plan.test_indices(fold)
        assert members.size == 2
        assert sorted(dataset.labels[members].tolist()) == [1, 2]


def test_kfold_is_deterministic():
    dataset = make_blobs_dataset(3, 11, 0.2, seed=8)
    first = stratified_kfold(dataset, 4, seed=9)
    second = stratified_kfold(dataset, 4, seed=9)
    assert np.array_equal(first.assignments, second.assignments)
    other = stratified_kfold(dataset, 4, seed=10)
    assert not np.array_equal(first.assignments, other.assignments)


def test_kfold_103_samples_partition():
    rows = [f"{i},0.5,1" for i in range(51)] + [f"{i},1.5,2" for i in range(52)]
    dataset = load_csv_text("\n".join(rows) + "\n")
    assert len(dataset) == 103
    plan = stratified_kfold(dataset, 5, seed=17)
    sizes = [plan.test_indices(fold).size for fold in range(1, 6)]
    assert set(sizes) <= {20, 21}
    assert sum(sizes) == 103
    seen = np.concatenate([plan.test_indices(fold) for fold in range(1, 6)])
    assert np.array_equal(np.sort(seen), np.arange(103))


def test_kfold_per_class_balance():
    dataset = make_blobs_dataset(4, 13, 0.2, seed=21)
    plan = stratified_kfold(dataset, 5, seed=2)
    for class_index in range(1, 5):
        counts = [
            int(np.sum(dataset.labels[plan.test_indices(fold)] == class_index))
            for fold in range(1, 6)
        ]
        assert max(counts) - min(counts) <= 1


def test_kfold_train_and_test_are_complementary():
    dataset = make_blobs_dataset(2, 9, 0.2, seed=4)
    plan = stratified_kfold(dataset, 3, seed=1)
    for fold in range(1, 4):
        test = set(plan.test_indices(fold).tolist())
        training = set(plan.train_indices(fold).tolist())
        assert not (test & training)
        assert test | training == set(range(len(dataset)))


def test_kfold_errors():
    dataset = load_csv_text("1,1\n2,2\n3,1\n")
    with pytest.raises(FoldError):
        stratified_kfold(dataset, 1, seed=0)
    with pytest.raises(FoldError):
        stratified_kfold(dataset, 4, seed=0)


# ---------------------------------------------------------------- quadrant

def test_quadrant_construction():
    dataset = make_quadrant_dataset(1, 0.5, seed=0)
    assert len(dataset) == 4
    assert np.all(np.abs(dataset.features) >= 0.5)
    assert dataset.class_counts.tolist() == [1, 1, 1, 1]


def test_quadrant_sign_pattern_matches_class():
    dataset = make_quadrant_dataset(25, 0.1, seed=6)
    for row, label in zip(dataset.features, dataset.labels):
        sx, sy = QUADRANT_SIGNS[int(label)]
        assert row[0] * sx >= 0.1
        assert row[1] * sy >= 0.1


def test_quadrant_respects_margin_and_bounds():
    dataset = make_quadrant_dataset(40, 0.25, seed=12)
    magnitudes = np.abs(dataset.features)
    assert magnitudes.min() >= 0.25
    assert magnitudes.max() <= 1.0


def test_quadrant_parameter_validation():
    with pytest.raises(ValueError):
        make_quadrant_dataset(0, 0.1, seed=0)
    with pytest.raises(ValueError):
        make_quadrant_dataset(5, 0.0, seed=0)
    with pytest.raises(ValueError):
        make_quadrant_dataset(5, 1.0, seed=0)


def test_quadrant_two_axis_network_is_perfect():
    # The two coordinate hyperplanes solve the problem exactly under the
    # binary code: output 1 reads [y < 0], output 2 reads [x < 0].
    dataset = make_quadrant_dataset(50, 0.1, seed=3)
    params = make_params([], [], [[0.0, -10.0], [-10.0, 0.0]], [0.0, 0.0],
                         n_inputs=2)
    scheme = EncodingScheme(SchemeKind.BINARY, 4)
    assert accuracy(params, dataset.features, dataset.labels, scheme) == 1.0


def test_quadrant_no_single_line_isolates_a_class():
    for seed in (3, 7):
        dataset = make_quadrant_dataset(50, 0.1, seed=seed)
        for class_index in range(1, 5):
            inside = dataset.features[dataset.labels == class_index]
            outside = dataset.features[dataset.labels != class_index]
            assert not linearly_separable(inside, outside)


def test_separability_oracle_detects_separable_sets():
    dataset = make_quadrant_dataset(30, 0.1, seed=5)
    upper = dataset.features[np.isin(dataset.labels, (1, 2))]  # y > 0
    lower = dataset.features[np.isin(dataset.labels, (3, 4))]  # y < 0
    assert linearly_separable(upper, lower)


def test_separability_oracle_validates_input():
    with pytest.raises(ValueError):
        linearly_separable(np.zeros((0, 2)), np.ones((3, 2)))
    with pytest.raises(ValueError):
        linearly_separable(np.zeros((2, 2)), np.ones((3, 3)))


# ---------------------------------------------------------------- blobs

def test_blobs_shape_and_counts():
    dataset = make_blobs_dataset(4, 50, 0.05, seed=1)
    assert len(dataset) == 200
    assert dataset.n_features == 2
    assert dataset.class_count == 4
    assert dataset.class_counts.tolist() == [50] * 4


def test_blobs_tiny_spread_hugs_centers():
    dataset = make_blobs_dataset(5, 8, 1e-9, seed=2)
    centers = blob_centers(5)
    for row, label in zip(dataset.features, dataset.labels):
        assert np.max(np.abs(row - centers[int(label) - 1])) < 1e-6


def test_blob_code_bits_are_linearly_separable_groups():
    # The Gray-code arrangement keeps every binary code bit a contiguous
    # arc of the circle, hence linearly separable from its complement.
    dataset = make_blobs_dataset(4, 30, 0.1, seed=9)
    scheme = EncodingScheme(SchemeKind.BINARY, 4)
    codes = target_matrix(scheme, dataset.labels)
    for bit in range(scheme.width):
        high = dataset.features[codes[:, bit] == 1.0]
        low = dataset.features[codes[:, bit] == 0.0]
        assert linearly_separable(high, low)


def test_blobs_train_to_high_accuracy_with_either_code():
    dataset = make_blobs_dataset(4, 50, 0.05, seed=3)
    config = TrainConfig(learning_rate=0.06, max_iterations=300, seed=11)
    for kind in (SchemeKind.ONE_TO_ONE, SchemeKind.BINARY):
        scheme = EncodingScheme(kind, 4)
        targets = target_matrix(scheme, dataset.labels)
        initial = init_params(2, 2, scheme.width, seed=11)
        params, _ = train(initial, dataset.features, targets, config)
        assert accuracy(params, dataset.features, dataset.labels, scheme) >= 0.99


def test_blobs_parameter_validation():
    with pytest.raises(ValueError):
        make_blobs_dataset(1, 5, 0.1, seed=0)
    with pytest.raises(ValueError):
        make_blobs_dataset(3, 0, 0.1, seed=0)
    with pytest.raises(ValueError):
        make_blobs_dataset(3, 5, 0.0, seed=0)
