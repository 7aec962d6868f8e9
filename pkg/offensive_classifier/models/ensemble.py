"""soft voting: a weighted mean of member probability rows."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Protocol, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError as PydanticValidationError

from ..core.errors import ParseError, ValidationError

logger = logging.getLogger(__name__)


class Voter(Protocol):
    """anything that scores raw texts, e.g. a TextClassifier."""

    @property
    def classes(self) -> Tuple[str, ...]: ...

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray: ...


def normalized_weights(weights: Optional[Sequence[float]], members: int) -> np.ndarray:
    if members == 0:
        raise ValidationError("an ensemble needs at least one member")
    if weights is None:
        return np.full(members, 1.0 / members)
    values = np.asarray(weights, dtype=np.float64)
    if len(values) != members:
        raise ValidationError(f"{len(values)} weights for {members} members")
    if np.any(values < 0) or not np.all(np.isfinite(values)) or values.sum() <= 0:
        raise ValidationError(
            "ensemble weights must be non-negative with a positive sum"
        )
    return values / values.sum()


def soft_vote_rows(
    rows: Sequence[np.ndarray], weights: Optional[Sequence[float]] = None
) -> np.ndarray:
    """weighted arithmetic mean of probability rows (or row matrices)."""
    stacked = np.asarray(rows, dtype=np.float64)
    w = normalized_weights(weights, len(stacked))
    return np.tensordot(w, stacked, axes=1)


@dataclass(frozen=True)
class EnsembleSpec:
    members: Tuple[Voter, ...]
    classes: Tuple[str, ...]
    weights: Tuple[float, ...]
    names: Tuple[str, ...] = ()

    @classmethod
    def build(
        cls,
        members: Sequence[Voter],
        weights: Optional[Sequence[float]] = None,
        classes: Optional[Sequence[str]] = None,
        names: Sequence[str] = (),
    ) -> "EnsembleSpec":
        if not members:
            raise ValidationError("an ensemble needs at least one member")
        shared = tuple(classes) if classes is not None else tuple(members[0].classes)
        for index, member in enumerate(members):
            if tuple(member.classes) != shared:
                label = names[index] if index < len(names) else f"member {index}"
                raise ValidationError(
                    f"{label} predicts {list(member.classes)}, "
                    f"ensemble expects {list(shared)}"
                )
        return cls(
            tuple(members),
            shared,
            tuple(normalized_weights(weights, len(members)).tolist()),
            tuple(names),
        )


def soft_vote_batch(
    spec: EnsembleSpec, texts: Sequence[str]
) -> Tuple[np.ndarray, List[str]]:
    """probability matrix and labels; ties go to the earlier class in spec.classes."""
    probabilities = soft_vote_rows(
        [member.predict_proba(texts) for member in spec.members], spec.weights
    )
    labels = (
        [spec.classes[i] for i in np.argmax(probabilities, axis=1)]
        if len(texts)
        else []
    )
    return probabilities, labels


def soft_vote(spec: EnsembleSpec, document: str) -> Tuple[np.ndarray, str]:
    probabilities, labels = soft_vote_batch(spec, [document])
    return probabilities[0], labels[0]


class EnsembleMemberEntry(BaseModel):
    model: str = Field(
        description="classifier bundle directory, relative to the ensemble file"
    )
    weight: Optional[float] = Field(default=None, ge=0)


class EnsembleFile(BaseModel):
    members: List[EnsembleMemberEntry]
    classes: Optional[List[str]] = None


def read_ensemble_file(path: Path) -> Tuple[EnsembleFile, List[Path]]:
    """parse a JSON ensemble file; returns it with member paths resolved."""
    try:
        data: Any = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(
            f"not valid JSON: {e.msg}", line=e.lineno, source=str(path)
        ) from e
    try:
        spec = EnsembleFile.model_validate(data)
    except PydanticValidationError as e:
        raise ParseError(
            f"invalid ensemble file: {e.errors()[0]['msg']}", source=str(path)
        ) from e
    if not spec.members:
        raise ValidationError(f"{path}: an ensemble needs at least one member")
    given = [member.weight is not None for member in spec.members]
    if any(given) and not all(given):
        raise ValidationError(f"{path}: give a weight for every member or for none")
    return spec, [(path.parent / member.model).resolve() for member in spec.members]
