import numpy as np
import pytest
from scipy import sparse

from offensive_classifier.core.config import (
    ForestConfig,
    LogisticConfig,
    ModelKind,
    SvmConfig,
)
from offensive_classifier.core.errors import ParseError, TrainingError, ValidationError
from offensive_classifier.models.calibration import fit_platt, platt_probability
from offensive_classifier.models.forest import (
    LEAF,
    DecisionTree,
    RandomForestModel,
    best_split,
    features_per_split,
    train_random_forest,
    varying_columns,
)
from offensive_classifier.models.io import (
    load_model,
    model_from_dict,
    model_to_dict,
    save_model,
)
from offensive_classifier.models.logistic import softmax_loss_and_grad, train_logistic
from offensive_classifier.models.svm import (
    hinge_objective,
    hinge_subgradient,
    train_linear_svm,
    with_bias,
)


def blobs(n=60, seed=0, classes=("NOT", "OFF"), gap=3.0):
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    for index, label in enumerate(classes):
        center = np.zeros(3)
        center[index % 3] = gap
        rows.append(rng.normal(size=(n, 3)) + center)
        labels += [label] * n
    return np.vstack(rows), labels


def xor_data(repeat=10):
    corners = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    return np.repeat(corners, repeat, axis=0), [
        label for label in ("A", "B", "B", "A") for _ in range(repeat)
    ]


def central_difference(function, point, eps=1e-6):
    grad = np.zeros_like(point)
    for index in np.ndindex(point.shape):
        step = np.zeros_like(point)
        step[index] = eps
        grad[index] = (function(point + step) - function(point - step)) / (2 * eps)
    return grad


def relative_error(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)


# forest


def test_stub_tree_routes_rows_to_leaves():
    tree = DecisionTree(
        feature=np.array([0, LEAF, LEAF]),
        threshold=np.array([0.5, 0.0, 0.0]),
        left=np.array([1, LEAF, LEAF]),
        right=np.array([2, LEAF, LEAF]),
        value=np.array([[0.5, 0.5], [1.0, 0.0], [0.0, 1.0]]),
    )
    np.testing.assert_array_equal(
        tree.predict_proba(np.array([[0.2], [0.5], [0.9]])), [[1, 0], [1, 0], [0, 1]]
    )
    forest = RandomForestModel(("NOT", "OFF"), 1, ForestConfig(n_trees=1), [tree])
    assert forest.predict([[0.9]]) == ["OFF"]


def test_best_split_finds_the_clean_threshold():
    features = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0], [4.0, 5.0]])
    targets = np.array([0, 0, 1, 1])
    assert best_split(features, targets, 2, [0, 1], 1) == (0, 2.5)


def test_constant_features_give_no_split():
    assert best_split(np.ones((4, 1)), np.array([0, 1, 0, 1]), 2, [0], 1) is None


def gini(features, targets, column, cut, n_classes):
    goes_left = features[:, column] <= cut
    total = 0.0
    for part in (targets[goes_left], targets[~goes_left]):
        shares = np.bincount(part, minlength=n_classes) / len(part)
        total += len(part) * (1.0 - np.sum(shares**2))
    return total / len(targets)


def test_best_split_matches_a_brute_force_search():
    rng = np.random.default_rng(22)
    for _ in range(25):
        features = rng.integers(0, 5, size=(15, 4)).astype(np.float64)
        targets = rng.integers(0, 3, size=15)
        lowest = min(
            gini(features, targets, column, cut, 3)
            for column in range(4)
            for cut in np.unique(features[:, column])[:-1]
        )
        column, threshold = best_split(features, targets, 3, range(4), 1)
        assert gini(features, targets, column, threshold, 3) == pytest.approx(
            lowest, abs=1e-12
        )


def test_best_split_prefers_the_lower_feature_on_ties():
    features = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [4.0, 4.0]])
    assert best_split(features, np.array([0, 0, 1, 1]), 2, [1, 0], 1) == (0, 2.5)


def test_varying_columns_match_a_dense_scan():
    rng = np.random.default_rng(21)
    features = rng.normal(size=(30, 12)) * (rng.random((30, 12)) < 0.3)
    features[:, 4] = 2.0
    features[:, 7] = 0.0
    features[:, 9] = rng.normal(size=30)
    rows = rng.integers(0, 30, size=18)
    expected = features[rows].min(axis=0) < features[rows].max(axis=0)
    np.testing.assert_array_equal(
        varying_columns(features, sparse.csr_matrix(features), rows), expected
    )
    assert not expected[4] and not expected[7] and expected[9]


@pytest.mark.parametrize(
    "rule, expected", [("sqrt", 3), ("log2", 3), ("all", 10), (4, 4), (40, 10)]
)
def test_features_per_split(rule, expected):
    assert features_per_split(rule, 10) == expected


def test_forest_learns_xor():
    features, labels = xor_data()
    forest = train_random_forest(
        features, labels, ForestConfig(n_trees=15, max_features="all", seed=3)
    )
    assert forest.predict([[0, 0], [0, 1], [1, 0], [1, 1]]) == ["A", "B", "B", "A"]


def test_forest_probabilities_are_distributions():
    features, labels = blobs(classes=("GRP", "IND", "OTH"))
    forest = train_random_forest(features, labels, ForestConfig(n_trees=10, seed=1))
    probabilities = forest.predict_proba(features)
    np.testing.assert_allclose(probabilities.sum(axis=1), 1.0)
    assert forest.classes == ("GRP", "IND", "OTH")


def test_forest_is_identical_for_any_worker_count():
    features, labels = blobs(seed=5)
    config = ForestConfig(n_trees=8, seed=11)
    serial = train_random_forest(features, labels, config, jobs=1)
    parallel = train_random_forest(features, labels, config, jobs=2)
    assert model_to_dict(serial) == model_to_dict(parallel)


def test_max_depth_limits_trees():
    features, labels = blobs(seed=2, gap=0.5)
    forest = train_random_forest(features, labels, ForestConfig(n_trees=3, max_depth=1))
    assert all(tree.node_count <= 3 for tree in forest.trees)


def test_forest_needs_two_rows():
    with pytest.raises(TrainingError):
        train_random_forest(np.ones((1, 2)), ["A"])


def test_non_finite_features_are_rejected():
    features, labels = blobs(n=5)
    features[3, 1] = np.inf
    with pytest.raises(TrainingError):
        train_random_forest(features, labels)


# svm


def test_hinge_subgradient_matches_finite_differences():
    rng = np.random.default_rng(6)
    features = with_bias(rng.normal(size=(30, 4)))
    signs = np.where(rng.random(30) < 0.5, -1.0, 1.0)
    weights = rng.normal(size=5) * 0.3
    analytic = hinge_subgradient(weights, features, signs, 0.1)
    numeric = central_difference(
        lambda w: hinge_objective(w, features, signs, 0.1), weights
    )
    assert relative_error(analytic, numeric) <= 1e-4


def test_svm_separates_blobs_with_positive_scores_for_the_second_class():
    features, labels = blobs(seed=7)
    model = train_linear_svm(features, labels, SvmConfig(epochs=10, seed=2))
    scores = model.decision_function(features)[:, 0]
    off = np.array(labels) == "OFF"
    assert np.mean(scores[off] > 0) > 0.95
    assert np.mean(scores[~off] < 0) > 0.95
    assert np.mean(np.array(model.predict(features)) == np.array(labels)) > 0.95


def test_svm_objective_falls_below_the_starting_point():
    features, labels = blobs(seed=8)
    model = train_linear_svm(features, labels, SvmConfig(epochs=10))
    history = model.objective_history["OFF"]
    assert history[0] == pytest.approx(1.0)
    assert history[-1] < history[0]


def test_svm_probabilities_grow_with_the_decision_score():
    features, labels = blobs(seed=9)
    model = train_linear_svm(features, labels, SvmConfig(epochs=10))
    scores = model.decision_function(features)[:, 0]
    positive = model.predict_proba(features)[:, 1]
    order = np.argsort(scores)
    assert np.all(np.diff(positive[order]) >= -1e-12)


def test_multiclass_svm_rows_sum_to_one():
    features, labels = blobs(classes=("GRP", "IND", "OTH"), seed=10)
    model = train_linear_svm(features, labels, SvmConfig(epochs=5))
    np.testing.assert_allclose(model.predict_proba(features).sum(axis=1), 1.0)
    assert model.weights.shape == (3, 4)


def test_svm_needs_two_classes():
    with pytest.raises(TrainingError):
        train_linear_svm(np.ones((4, 2)), ["A"] * 4)


def test_platt_fit_is_increasing_in_the_score():
    scores = np.array([-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0])
    positive = scores > 0
    a, b = fit_platt(scores, positive)
    assert a < 0
    probabilities = platt_probability(scores, a, b)
    assert np.all(np.diff(probabilities) > 0)
    assert probabilities[0] < 0.5 < probabilities[-1]


def test_platt_slope_is_clamped_for_inverted_scores():
    scores = np.array([1.0, 2.0, -1.0, -2.0])
    a, _ = fit_platt(scores, np.array([False, False, True, True]))
    assert a == 0.0


# logistic regression


def test_logistic_gradient_matches_finite_differences():
    rng = np.random.default_rng(12)
    design = with_bias(rng.normal(size=(20, 3)))
    onehot = np.eye(3)[rng.integers(0, 3, size=20)]
    weights = rng.normal(size=(4, 3))
    _, analytic = softmax_loss_and_grad(weights, design, onehot, 0.05)
    numeric = central_difference(
        lambda w: softmax_loss_and_grad(w, design, onehot, 0.05)[0], weights
    )
    assert relative_error(analytic, numeric) <= 1e-6


def test_untrained_logistic_model_is_uniform():
    features, labels = blobs(n=10)
    model = train_logistic(features, labels, LogisticConfig(max_iter=0))
    np.testing.assert_array_equal(model.predict_proba(features), 0.5)


def test_logistic_loss_never_increases():
    features, labels = blobs(seed=13, gap=1.0)
    model = train_logistic(features, labels, LogisticConfig(max_iter=50))
    assert len(model.loss_history) > 1
    assert np.all(np.diff(model.loss_history) <= 1e-12)
    assert model.loss_history[-1] < model.loss_history[0]


def test_logistic_separates_distant_blobs():
    features, labels = blobs(seed=13, gap=4.0)
    model = train_logistic(features, labels, LogisticConfig(max_iter=100))
    assert np.mean(np.array(model.predict(features)) == np.array(labels)) >= 0.95


# artifacts


@pytest.mark.parametrize(
    "train",
    [
        lambda f, l: train_random_forest(f, l, ForestConfig(n_trees=3)),
        lambda f, l: train_linear_svm(f, l, SvmConfig(epochs=3)),
        lambda f, l: train_logistic(f, l, LogisticConfig(max_iter=20)),
    ],
)
def test_saved_models_reload_to_identical_bytes(tmp_path, train):
    features, labels = blobs(n=15, seed=14)
    model = train(features, labels)
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    save_model(model, first)
    restored = load_model(first)
    save_model(restored, second)
    assert first.read_bytes() == second.read_bytes()
    np.testing.assert_array_equal(
        restored.predict_proba(features), model.predict_proba(features)
    )


def test_artifact_kind_is_checked():
    features, labels = blobs(n=5)
    data = model_to_dict(train_logistic(features, labels, LogisticConfig(max_iter=1)))
    data["kind"] = "boosting"
    with pytest.raises(ParseError):
        model_from_dict(data)
    assert ModelKind.LOGREG.value == "logreg"


def test_wrong_feature_width_is_rejected():
    features, labels = blobs(n=5)
    model = train_logistic(features, labels, LogisticConfig(max_iter=1))
    with pytest.raises(ValidationError):
        model.predict_proba(np.ones((2, 5)))
