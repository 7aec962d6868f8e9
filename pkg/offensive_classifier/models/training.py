"""dispatch from a run configuration to the matching trainer."""

from typing import Any, Sequence

from ..core.config import ModelKind, RunConfig
from .base import ProbabilisticClassifier
from .forest import train_random_forest
from .logistic import train_logistic
from .svm import train_linear_svm


def train_model(
    kind: ModelKind, features: Any, labels: Sequence[str], config: RunConfig
) -> ProbabilisticClassifier:
    if kind is ModelKind.FOREST:
        return train_random_forest(
            features, labels, config.forest_config(), jobs=config.jobs
        )
    if kind is ModelKind.SVM:
        return train_linear_svm(features, labels, config.svm_config(), jobs=config.jobs)
    return train_logistic(features, labels, config.logistic_config())
