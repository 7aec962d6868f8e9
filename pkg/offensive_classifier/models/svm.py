"""linear SVM trained by mini-batch Pegasos with Platt-calibrated probabilities.

the bias is an extra constant feature, so it shares the L2 penalty. each
one-vs-rest problem is calibrated on out-of-fold decision scores.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from sklearn.model_selection import StratifiedKFold

from ..core.config import ModelKind, SvmConfig
from ..core.errors import TrainingError
from .base import (
    ProbabilisticClassifier,
    check_features,
    encode_labels,
    standardization,
)
from .calibration import fit_platt, platt_probability

logger = logging.getLogger(__name__)

BATCH_SIZE = 16


def with_bias(features: np.ndarray) -> np.ndarray:
    return np.hstack([features, np.ones((features.shape[0], 1))])


def hinge_objective(
    weights: np.ndarray, features: np.ndarray, signs: np.ndarray, regularization: float
) -> float:
    """lambda/2 * |w|^2 + mean hinge loss; `signs` are +1/-1."""
    margins = signs * (features @ weights)
    hinge = np.mean(np.maximum(0.0, 1.0 - margins))
    return float(0.5 * regularization * weights @ weights + hinge)


def hinge_subgradient(
    weights: np.ndarray, features: np.ndarray, signs: np.ndarray, regularization: float
) -> np.ndarray:
    """gradient of hinge_objective away from the kinks (margin exactly 1)."""
    active = signs * (features @ weights) < 1.0
    return regularization * weights - (signs[active] @ features[active]) / len(signs)


def pegasos(
    features: np.ndarray,
    signs: np.ndarray,
    regularization: float,
    epochs: int,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, List[float]]:
    """the iterate averaged over the final epoch, and the objective after each epoch."""
    n, d = features.shape
    weights = np.zeros(d)
    radius = 1.0 / math.sqrt(regularization)
    history = [hinge_objective(weights, features, signs, regularization)]
    step = 0
    average = weights
    for _ in range(epochs):
        total = np.zeros(d)
        updates = 0
        order = rng.permutation(n)
        for start in range(0, n, BATCH_SIZE):
            batch = order[start : start + BATCH_SIZE]
            step += 1
            rate = 1.0 / (regularization * step)
            x, y = features[batch], signs[batch]
            active = y * (x @ weights) < 1.0
            weights = (1.0 - rate * regularization) * weights
            if active.any():
                weights = weights + (rate / len(batch)) * (y[active] @ x[active])
            norm = np.linalg.norm(weights)
            if norm > radius:
                weights = weights * (radius / norm)
            total += weights
            updates += 1
        average = total / updates
        history.append(hinge_objective(average, features, signs, regularization))
    return average, history


def _fit_unit(
    features: np.ndarray,
    signs: np.ndarray,
    config: SvmConfig,
    class_index: int,
    fold: int,
) -> Tuple[np.ndarray, List[float]]:
    rng = np.random.default_rng([config.seed, class_index, fold])
    return pegasos(features, signs, config.regularization, config.epochs, rng)


class LinearSvmModel(ProbabilisticClassifier):
    kind = ModelKind.SVM

    def __init__(
        self,
        classes: Sequence[str],
        n_features: int,
        config: SvmConfig,
        mean: np.ndarray,
        scale: np.ndarray,
        weights: np.ndarray,
        platt: np.ndarray,
    ):
        super().__init__(classes, n_features, config.seed)
        self.config = config
        self.mean = np.asarray(mean, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)
        self.weights = np.asarray(weights, dtype=np.float64).reshape(-1, n_features + 1)
        self.platt = np.asarray(platt, dtype=np.float64).reshape(-1, 2)
        self.objective_history: Dict[str, List[float]] = {}

    def decision_function(self, features: Any) -> np.ndarray:
        """one column per one-vs-rest problem (a single column for two classes)."""
        matrix = check_features(features, self.n_features)
        return with_bias((matrix - self.mean) / self.scale) @ self.weights.T

    def _probabilities(self, features: np.ndarray) -> np.ndarray:
        scores = self.decision_function(features)
        calibrated = np.column_stack(
            [
                platt_probability(scores[:, i], a, b)
                for i, (a, b) in enumerate(self.platt)
            ]
        )
        if len(self.classes) == 2:
            return np.column_stack([1.0 - calibrated[:, 0], calibrated[:, 0]])
        totals = calibrated.sum(axis=1, keepdims=True)
        uniform = np.full_like(calibrated, 1.0 / len(self.classes))
        return np.where(
            totals > 0, calibrated / np.where(totals > 0, totals, 1.0), uniform
        )

    def parameters(self) -> Dict[str, Any]:
        return {
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            "weights": self.weights.tolist(),
            "platt": self.platt.tolist(),
        }

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
    ) -> "LinearSvmModel":
        return cls(
            classes,
            n_features,
            SvmConfig(**config),
            np.asarray(parameters["mean"]),
            np.asarray(parameters["scale"]),
            np.asarray(parameters["weights"]),
            np.asarray(parameters["platt"]),
        )


def _calibration_splits(
    positive: np.ndarray, config: SvmConfig
) -> List[Tuple[np.ndarray, np.ndarray]]:
    smallest = int(min(positive.sum(), len(positive) - positive.sum()))
    folds = min(config.calibration_folds, smallest)
    if folds < 2:
        return []
    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=config.seed)
    return list(splitter.split(np.zeros(len(positive)), positive))


def train_linear_svm(
    features: Any,
    labels: Sequence[str],
    config: Optional[SvmConfig] = None,
    jobs: int = 1,
) -> LinearSvmModel:
    """one-vs-rest Pegasos; binary tasks train a single problem for the second class."""
    config = config or SvmConfig()
    matrix = check_features(features)
    classes, targets = encode_labels(labels, matrix)
    if len(classes) < 2:
        raise TrainingError(f"an SVM needs at least two classes, got {list(classes)}")

    if config.standardize:
        mean, scale = standardization(matrix)
    else:
        mean, scale = np.zeros(matrix.shape[1]), np.ones(matrix.shape[1])
    design = with_bias((matrix - mean) / scale)
    problems = [1] if len(classes) == 2 else list(range(len(classes)))

    units = []
    for index in problems:
        positive = targets == index
        signs = np.where(positive, 1.0, -1.0)
        units.append((index, 0, np.arange(len(targets)), signs))
        for fold, (train_rows, _) in enumerate(
            _calibration_splits(positive, config), start=1
        ):
            units.append((index, fold, train_rows, signs))
    logger.info(
        "training %d SVM fits for %d classes on %d rows (%d jobs)",
        len(units),
        len(classes),
        len(targets),
        jobs,
    )
    fitted = Parallel(n_jobs=jobs)(
        delayed(_fit_unit)(design[rows], signs[rows], config, index, fold)
        for index, fold, rows, signs in units
    )
    results = {(index, fold): fit for (index, fold, _, _), fit in zip(units, fitted)}

    weights, platt, histories = [], [], {}
    for index in problems:
        positive = targets == index
        final, history = results[(index, 0)]
        splits = _calibration_splits(positive, config)
        if splits:
            scores = np.zeros(len(targets))
            for fold, (_, held_out) in enumerate(splits, start=1):
                scores[held_out] = design[held_out] @ results[(index, fold)][0]
        else:
            scores = design @ final
        weights.append(final)
        platt.append(fit_platt(scores, positive))
        histories[classes[index]] = history

    model = LinearSvmModel(
        classes,
        matrix.shape[1],
        config,
        mean,
        scale,
        np.vstack(weights),
        np.asarray(platt),
    )
    model.objective_history = histories
    return model
