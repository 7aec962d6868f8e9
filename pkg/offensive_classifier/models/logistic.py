"""multinomial logistic regression by full-batch gradient descent.

the step is 1/L for the Lipschitz bound L = 0.5 * sigma_max(X)^2 / n + l2,
so the training loss falls every iteration until the gradient vanishes.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import log_softmax, softmax

from ..core.config import LogisticConfig, ModelKind
from ..core.errors import TrainingError
from .base import (
    ProbabilisticClassifier,
    check_features,
    encode_labels,
    standardization,
)
from .svm import with_bias

logger = logging.getLogger(__name__)


def softmax_loss_and_grad(
    weights: np.ndarray, design: np.ndarray, onehot: np.ndarray, l2: float
) -> Tuple[float, np.ndarray]:
    """mean cross-entropy plus l2/2 * |W|^2 over the non-bias rows, and its gradient.

    `weights` is (d + 1) x C with the bias in the last row.
    """
    logits = design @ weights
    penalty = weights.copy()
    penalty[-1] = 0.0
    data_loss = -float(np.sum(onehot * log_softmax(logits, axis=1))) / len(design)
    loss = data_loss + 0.5 * l2 * float(np.sum(penalty**2))
    grad = design.T @ (softmax(logits, axis=1) - onehot) / len(design) + l2 * penalty
    return loss, grad


class LogisticModel(ProbabilisticClassifier):
    kind = ModelKind.LOGREG

    def __init__(
        self,
        classes: Sequence[str],
        n_features: int,
        config: LogisticConfig,
        mean: np.ndarray,
        scale: np.ndarray,
        weights: np.ndarray,
    ):
        super().__init__(classes, n_features, config.seed)
        self.config = config
        self.mean = np.asarray(mean, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)
        self.weights = np.asarray(weights, dtype=np.float64).reshape(
            n_features + 1, len(self.classes)
        )
        self.loss_history: List[float] = []

    def _probabilities(self, features: np.ndarray) -> np.ndarray:
        return softmax(
            with_bias((features - self.mean) / self.scale) @ self.weights, axis=1
        )

    def parameters(self) -> Dict[str, Any]:
        return {
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            "weights": self.weights.tolist(),
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
    ) -> "LogisticModel":
        return cls(
            classes,
            n_features,
            LogisticConfig(**config),
            np.asarray(parameters["mean"]),
            np.asarray(parameters["scale"]),
            np.asarray(parameters["weights"]),
        )


def train_logistic(
    features: Any, labels: Sequence[str], config: Optional[LogisticConfig] = None
) -> LogisticModel:
    """zero-initialized weights; stops after max_iter steps or when |grad| < tol."""
    config = config or LogisticConfig()
    matrix = check_features(features)
    classes, targets = encode_labels(labels, matrix)
    if len(classes) < 2:
        raise TrainingError(
            f"logistic regression needs at least two classes, got {list(classes)}"
        )

    if config.standardize:
        mean, scale = standardization(matrix)
    else:
        mean, scale = np.zeros(matrix.shape[1]), np.ones(matrix.shape[1])
    design = with_bias((matrix - mean) / scale)
    onehot = np.eye(len(classes))[targets]
    lipschitz = 0.5 * np.linalg.norm(design, ord=2) ** 2 / len(design) + config.l2
    weights = np.zeros((design.shape[1], len(classes)))

    history: List[float] = []
    for _ in range(config.max_iter):
        loss, grad = softmax_loss_and_grad(weights, design, onehot, config.l2)
        history.append(loss)
        if np.linalg.norm(grad) < config.tol:
            break
        weights = weights - grad / lipschitz
    logger.info(
        "logistic regression: %d iterations, final loss %s",
        len(history),
        history[-1] if history else "n/a",
    )

    model = LogisticModel(classes, matrix.shape[1], config, mean, scale, weights)
    model.loss_history = history
    return model
