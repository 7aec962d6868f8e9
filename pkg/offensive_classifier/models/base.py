"""the probabilistic classifier contract shared by every model kind."""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import ModelKind
from ..core.errors import TrainingError, ValidationError


def check_features(features: Any, n_features: Optional[int] = None) -> np.ndarray:
    """2-D float64 matrix of finite values."""
    matrix = np.asarray(features, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValidationError(f"feature matrix must be 2-D, got shape {matrix.shape}")
    if n_features is not None and matrix.shape[1] != n_features:
        raise ValidationError(
            f"model expects {n_features} features, got {matrix.shape[1]}"
        )
    if not np.all(np.isfinite(matrix)):
        rows = sorted(set(np.nonzero(~np.isfinite(matrix))[0].tolist()))
        raise TrainingError(f"non-finite feature values in rows {rows[:5]}")
    return matrix


def encode_labels(
    labels: Sequence[str], features: np.ndarray
) -> Tuple[Tuple[str, ...], np.ndarray]:
    """sorted class list and integer targets; rows and labels must line up."""
    if len(labels) != features.shape[0]:
        raise TrainingError(
            f"{features.shape[0]} feature rows for {len(labels)} labels"
        )
    classes = tuple(sorted(set(labels)))
    if not classes:
        raise TrainingError("no training examples")
    lookup = {label: i for i, label in enumerate(classes)}
    return classes, np.asarray([lookup[label] for label in labels], dtype=np.int64)


def standardization(features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """column means and scales; constant columns keep scale 1."""
    mean = features.mean(axis=0)
    scale = features.std(axis=0)
    return mean, np.where(scale > 0, scale, 1.0)


class ProbabilisticClassifier(ABC):
    """trained model mapping feature rows to class probability rows."""

    kind: ModelKind

    def __init__(self, classes: Sequence[str], n_features: int, seed: int):
        self.classes: Tuple[str, ...] = tuple(classes)
        self.n_features = n_features
        self.seed = seed

    @abstractmethod
    def _probabilities(self, features: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        """json-ready trained state."""

    @abstractmethod
    def config_dict(self) -> Dict[str, Any]:
        ...

    @classmethod
    @abstractmethod
    def from_parameters(
        cls,
        classes: Sequence[str],
        n_features: int,
        seed: int,
        config: Dict[str, Any],
        parameters: Dict[str, Any],
    ) -> "ProbabilisticClassifier":
        ...

    def predict_proba(self, features: Any) -> np.ndarray:
        """rows sum to 1; columns follow `classes`."""
        matrix = check_features(features, self.n_features)
        if matrix.shape[0] == 0:
            return np.zeros((0, len(self.classes)))
        return self._probabilities(matrix)

    def predict(self, features: Any) -> List[str]:
        """argmax of each probability row; ties go to the earlier class."""
        return [
            self.classes[i] for i in np.argmax(self.predict_proba(features), axis=1)
        ]
