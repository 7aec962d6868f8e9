"""trained text classifier: a feature pipeline and a model, saved as one bundle."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..data.documents import (
    LabeledDocument,
    Task,
    class_counts,
    labeled_for,
    labels_for,
)
from ..data.sampling import SamplingMode, apply_sampling, make_sampling_plan
from ..models.base import ProbabilisticClassifier
from ..models.io import dumps_json, load_model, save_model
from ..models.training import train_model
from .config import RunConfig, get_config
from .errors import ParseError, TrainingError, ValidationError
from .pipeline import FeaturePipeline, FeatureResources, load_resources

logger = logging.getLogger(__name__)

PIPELINE_FILE = "pipeline.json"
MODEL_FILE = "model.json"
REPORT_FILE = "report.json"
CONFIG_FILE = "effective_config.json"


class TextClassifier:
    """maps raw texts to class probabilities for one task."""

    def __init__(
        self, pipeline: FeaturePipeline, model: ProbabilisticClassifier, task: Task
    ):
        if len(pipeline.names) != model.n_features:
            raise ValidationError(
                f"pipeline emits {len(pipeline.names)} features, "
                f"model expects {model.n_features}"
            )
        self.pipeline = pipeline
        self.model = model
        self.task = task

    @property
    def classes(self) -> Tuple[str, ...]:
        return self.model.classes

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        return self.model.predict_proba(self.pipeline.transform(texts))

    def predict(self, texts: Sequence[str]) -> List[str]:
        return [self.classes[i] for i in np.argmax(self.predict_proba(texts), axis=1)]

    def save(self, directory: Path, report: Optional[Dict[str, Any]] = None) -> None:
        directory.mkdir(parents=True, exist_ok=True)
        pipeline = self.pipeline.to_dict()
        pipeline["task"] = self.task.value
        (directory / PIPELINE_FILE).write_text(dumps_json(pipeline), encoding="utf-8")
        save_model(self.model, directory / MODEL_FILE)
        self.pipeline.save_embedding(directory)
        if report is not None:
            (directory / REPORT_FILE).write_text(dumps_json(report), encoding="utf-8")
        logger.debug("saved classifier bundle to %s", directory)

    @classmethod
    def load(cls, directory: Path) -> "TextClassifier":
        pipeline_path = directory / PIPELINE_FILE
        if not pipeline_path.exists() or not (directory / MODEL_FILE).exists():
            raise ValidationError(
                f"{directory} is not a classifier bundle "
                f"(missing {PIPELINE_FILE} or {MODEL_FILE})"
            )
        try:
            data = json.loads(pipeline_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ParseError(
                f"not valid JSON: {e.msg}", line=e.lineno, source=str(pipeline_path)
            ) from e
        pipeline = FeaturePipeline.from_dict(data, directory)
        return cls(
            pipeline, load_model(directory / MODEL_FILE), Task.parse(data["task"])
        )


def train_text_classifier(
    documents: Sequence[LabeledDocument],
    config: Optional[RunConfig] = None,
    resources: Optional[FeatureResources] = None,
) -> Tuple[TextClassifier, Dict[str, Any]]:
    """sample, fit the pipeline, featurize and train; returns (classifier, report)."""
    config = config or get_config()
    resources = resources or load_resources(config)
    task = config.task

    labeled = labeled_for(documents, task)
    if not labeled:
        raise TrainingError(f"no documents carry a label for task {task.value}")
    counts = class_counts(labeled, task)
    plan = None
    if len(counts) >= 2:
        plan = make_sampling_plan(
            counts, config.max_ratio, config.seed, config.sampling
        )
        sample = (
            labeled
            if plan.mode is SamplingMode.UNBALANCED
            else apply_sampling(labeled, plan, task)
        )
    else:
        logger.warning(
            "only one class (%s) present for task %s", next(iter(counts)), task.value
        )
        sample = list(labeled)

    texts = [doc.raw_text for doc in sample]
    pipeline = FeaturePipeline.from_resources(
        config.feature_config(), resources, normalize=config.normalize
    )
    pipeline.fit(texts)
    features = pipeline.transform(texts)
    labels = labels_for(sample, task)
    logger.info(
        "training %s on %d documents x %d features", config.model.value, *features.shape
    )
    model = train_model(config.model, features, labels, config)

    report = {
        "task": task.value,
        "model": config.model.value,
        "classes": list(model.classes),
        "documents": len(labeled),
        "class_counts": counts,
        "sampling": plan.as_dict() if plan is not None else None,
        "training_rows": len(sample),
        "training_counts": class_counts(sample, task),
        "n_features": int(features.shape[1]),
        "normalize": config.normalize,
        "seed": config.seed,
    }
    return TextClassifier(pipeline, model, task), report
