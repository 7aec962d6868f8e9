"""random forest of CART trees with Gini splits, written against numpy.

each tree draws from its own generator seeded by (seed, tree index), so the
forest is the same whatever the number of workers.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy import sparse

from ..core.config import ForestConfig, ModelKind
from ..core.errors import TrainingError, ValidationError
from .base import ProbabilisticClassifier, check_features, encode_labels

logger = logging.getLogger(__name__)

LEAF = -1


@dataclass(frozen=True)
class DecisionTree:
    """flat node arrays; `feature == LEAF` marks a leaf, `value` holds class shares."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.feature)

    def apply(self, features: np.ndarray) -> np.ndarray:
        """leaf index reached by every row (`x <= threshold` goes left)."""
        nodes = np.zeros(features.shape[0], dtype=np.int64)
        while True:
            active = np.nonzero(self.feature[nodes] != LEAF)[0]
            if not len(active):
                return nodes
            current = nodes[active]
            go_left = features[active, self.feature[current]] <= self.threshold[current]
            nodes[active] = np.where(go_left, self.left[current], self.right[current])

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        return self.value[self.apply(features)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "feature": self.feature.tolist(),
            "threshold": [float(v) for v in self.threshold],
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DecisionTree":
        return cls(
            feature=np.asarray(data["feature"], dtype=np.int64),
            threshold=np.asarray(data["threshold"], dtype=np.float64),
            left=np.asarray(data["left"], dtype=np.int64),
            right=np.asarray(data["right"], dtype=np.int64),
            value=np.asarray(data["value"], dtype=np.float64).reshape(
                len(data["feature"]), -1
            ),
        )


def features_per_split(rule: Any, n_features: int) -> int:
    if rule == "sqrt":
        return max(1, int(math.sqrt(n_features)))
    if rule == "log2":
        return max(1, int(math.log2(n_features))) if n_features > 1 else 1
    if rule == "all":
        return n_features
    return max(1, min(int(rule), n_features))


def _split_over_columns(
    values: np.ndarray, targets: np.ndarray, n_classes: int, min_leaf: int
) -> Optional[Tuple[int, float]]:
    """best (column position, threshold) over every column of `values` at once."""
    n, width = values.shape
    order = np.argsort(values, axis=0, kind="mergesort")
    ordered = np.take_along_axis(values, order, axis=0)
    left = np.cumsum(np.eye(n_classes)[targets[order]], axis=0)[:-1]
    right = np.bincount(targets, minlength=n_classes) - left
    left_sizes = np.arange(1, n, dtype=np.float64)[:, None]
    right_sizes = n - left_sizes
    # weighted Gini: (n - sum(left^2) / |left| - sum(right^2) / |right|) / n
    impurity = (
        n - (left**2).sum(axis=2) / left_sizes - (right**2).sum(axis=2) / right_sizes
    ) / n
    large_enough = (left_sizes >= min_leaf) & (right_sizes >= min_leaf)
    valid = (ordered[:-1] < ordered[1:]) & large_enough
    impurity[~valid] = np.inf
    positions = np.argmin(impurity, axis=0)
    lowest = impurity[positions, np.arange(width)]
    if not np.isfinite(lowest).any():
        return None
    column = int(np.argmin(lowest))
    position = int(positions[column])
    low, high = ordered[position, column], ordered[position + 1, column]
    threshold = low + (high - low) / 2.0
    if not low <= threshold < high:
        threshold = low
    return column, float(threshold)


def best_split(
    features: np.ndarray,
    targets: np.ndarray,
    n_classes: int,
    candidates: Sequence[int],
    min_leaf: int,
) -> Optional[Tuple[int, float]]:
    """lowest weighted Gini impurity; ties keep the lower feature, then threshold."""
    columns = np.sort(np.asarray(candidates, dtype=np.int64))
    if len(targets) < 2 or not len(columns):
        return None
    split = _split_over_columns(features[:, columns], targets, n_classes, min_leaf)
    return None if split is None else (int(columns[split[0]]), split[1])


def varying_columns(
    features: np.ndarray, pattern: sparse.csr_matrix, rows: np.ndarray
) -> np.ndarray:
    """mask of the columns that are not constant over `rows`.

    `pattern` is `features` in CSR form. a column with nonzeros in only some
    of the rows varies; one that is nonzero everywhere is checked densely.
    """
    counts = np.bincount(pattern[rows].indices, minlength=features.shape[1])
    varying = (counts > 0) & (counts < len(rows))
    full = np.nonzero(counts == len(rows))[0]
    if len(full):
        block = features[np.ix_(rows, full)]
        varying[full] = block.min(axis=0) < block.max(axis=0)
    return varying


def grow_tree(
    features: np.ndarray,
    targets: np.ndarray,
    n_classes: int,
    config: ForestConfig,
    rng: np.random.Generator,
    sample: Optional[np.ndarray] = None,
    pattern: Optional[sparse.csr_matrix] = None,
) -> DecisionTree:
    """depth-first CART growth over the rows in `sample` (all rows by default).

    a node splits while impure and a valid split exists.
    """
    n_features = features.shape[1]
    per_split = features_per_split(config.max_features, n_features)
    pattern = pattern if pattern is not None else sparse.csr_matrix(features)
    sample = sample if sample is not None else np.arange(len(targets))
    feature: List[int] = []
    threshold: List[float] = []
    left: List[int] = []
    right: List[int] = []
    value: List[np.ndarray] = []

    def new_node(rows: np.ndarray) -> int:
        counts = np.bincount(targets[rows], minlength=n_classes).astype(np.float64)
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(counts / counts.sum())
        return len(feature) - 1

    stack = [(new_node(sample), sample, 0)]
    while stack:
        node, rows, depth = stack.pop()
        if value[node].max() == 1.0 or len(rows) < 2 * config.min_samples_leaf:
            continue
        if config.max_depth is not None and depth >= config.max_depth:
            continue
        varying = varying_columns(features, pattern, rows)
        # constant features in this node never count toward the per-split budget
        order = rng.permutation(n_features)
        candidates = np.sort(order[varying[order]][:per_split])
        if not len(candidates):
            continue
        block = features[np.ix_(rows, candidates)]
        split = _split_over_columns(
            block, targets[rows], n_classes, config.min_samples_leaf
        )
        if split is None:
            continue
        position, cut = split
        goes_left = block[:, position] <= cut
        left_node = new_node(rows[goes_left])
        right_node = new_node(rows[~goes_left])
        feature[node], threshold[node] = int(candidates[position]), cut
        left[node], right[node] = left_node, right_node
        stack.append((right_node, rows[~goes_left], depth + 1))
        stack.append((left_node, rows[goes_left], depth + 1))

    return DecisionTree(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        value=np.vstack(value),
    )


def _fit_tree(
    features: np.ndarray,
    pattern: sparse.csr_matrix,
    targets: np.ndarray,
    n_classes: int,
    config: ForestConfig,
    tree_index: int,
) -> DecisionTree:
    rng = np.random.default_rng([config.seed, tree_index])
    n = len(targets)
    rows = rng.integers(0, n, size=n) if config.bootstrap else np.arange(n)
    return grow_tree(
        features, targets, n_classes, config, rng, sample=rows, pattern=pattern
    )


class RandomForestModel(ProbabilisticClassifier):
    kind = ModelKind.FOREST

    def __init__(
        self,
        classes: Sequence[str],
        n_features: int,
        config: ForestConfig,
        trees: Sequence[DecisionTree],
    ):
        super().__init__(classes, n_features, config.seed)
        if not trees:
            raise ValidationError("a forest needs at least one tree")
        for tree in trees:
            if tree.value.shape[1] != len(self.classes):
                raise ValidationError(
                    f"tree leaves have {tree.value.shape[1]} classes, "
                    f"forest has {len(self.classes)}"
                )
        self.config = config
        self.trees: Tuple[DecisionTree, ...] = tuple(trees)

    def _probabilities(self, features: np.ndarray) -> np.ndarray:
        total = np.zeros((features.shape[0], len(self.classes)))
        for tree in self.trees:
            total += tree.predict_proba(features)
        return total / len(self.trees)

    def parameters(self) -> Dict[str, Any]:
        return {"trees": [tree.to_dict() for tree in self.trees]}

    def config_dict(self) -> Dict[str, Any]:
        return self.config.model_dump(mode="json")

    @classmethod
    def from_parameters(
        cls,
        classes: Sequence[str],
        n_features: int,
        seed: int,
        config: Dict[str, Any],
        parameters: Dict[str, Any],
    ) -> "RandomForestModel":
        trees = [DecisionTree.from_dict(tree) for tree in parameters["trees"]]
        return cls(classes, n_features, ForestConfig(**config), trees)


def train_random_forest(
    features: Any,
    labels: Sequence[str],
    config: Optional[ForestConfig] = None,
    jobs: int = 1,
) -> RandomForestModel:
    """bagged CART trees; probabilities are the mean of the leaf distributions."""
    config = config or ForestConfig()
    matrix = check_features(features)
    if matrix.shape[0] < 2:
        raise TrainingError(
            f"a forest needs at least 2 training rows, got {matrix.shape[0]}"
        )
    classes, targets = encode_labels(labels, matrix)
    logger.info(
        "training %d trees on %d rows x %d features (%d jobs)",
        config.n_trees,
        *matrix.shape,
        jobs,
    )
    pattern = sparse.csr_matrix(matrix)
    trees = Parallel(n_jobs=jobs)(
        delayed(_fit_tree)(matrix, pattern, targets, len(classes), config, index)
        for index in range(config.n_trees)
    )
    return RandomForestModel(classes, matrix.shape[1], config, trees)
