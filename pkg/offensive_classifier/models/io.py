"""model artifacts: one JSON document per trained model.

keys are sorted and floats use their shortest round-trip form, so the same
model always serializes to the same bytes.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Type

from pydantic import BaseModel, ValidationError as PydanticValidationError

from ..core.config import ModelKind
from ..core.errors import ParseError, ValidationError
from .base import ProbabilisticClassifier
from .forest import RandomForestModel
from .logistic import LogisticModel
from .svm import LinearSvmModel

ARTIFACT_VERSION = 1

MODEL_TYPES: Dict[ModelKind, Type[ProbabilisticClassifier]] = {
    ModelKind.FOREST: RandomForestModel,
    ModelKind.SVM: LinearSvmModel,
    ModelKind.LOGREG: LogisticModel,
}


class ModelArtifact(BaseModel):
    format_version: int = ARTIFACT_VERSION
    kind: ModelKind
    classes: List[str]
    n_features: int
    seed: int
    config: Dict[str, Any]
    parameters: Dict[str, Any]


def dumps_json(data: Any) -> str:
    return json.dumps(
        data, sort_keys=True, ensure_ascii=False, allow_nan=False, separators=(",", ":")
    ) + "\n"


def model_to_dict(model: ProbabilisticClassifier) -> Dict[str, Any]:
    artifact = ModelArtifact(
        kind=model.kind,
        classes=list(model.classes),
        n_features=model.n_features,
        seed=model.seed,
        config=model.config_dict(),
        parameters=model.parameters(),
    )
    return artifact.model_dump(mode="json")


def model_from_dict(
    data: Dict[str, Any], source: str = "model"
) -> ProbabilisticClassifier:
    try:
        artifact = ModelArtifact.model_validate(data)
    except PydanticValidationError as e:
        raise ParseError(
            f"invalid model artifact: {e.errors()[0]['msg']}", source=source
        ) from e
    if artifact.format_version != ARTIFACT_VERSION:
        raise ValidationError(
            f"{source}: unsupported artifact version {artifact.format_version}"
        )
    model_type = MODEL_TYPES[artifact.kind]
    try:
        return model_type.from_parameters(
            artifact.classes,
            artifact.n_features,
            artifact.seed,
            artifact.config,
            artifact.parameters,
        )
    except (KeyError, TypeError) as e:
        raise ParseError(
            f"incomplete {artifact.kind.value} parameters: {e}", source=source
        ) from e


def save_model(model: ProbabilisticClassifier, path: Path) -> None:
    path.write_text(dumps_json(model_to_dict(model)), encoding="utf-8")


def load_model(path: Path) -> ProbabilisticClassifier:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(
            f"not valid JSON: {e.msg}", line=e.lineno, source=str(path)
        ) from e
    return model_from_dict(data, source=str(path))
