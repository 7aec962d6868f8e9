"""class rebalancing: downsample the majority, then oversample to balance."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Sequence

import numpy as np

from ..core.errors import ValidationError
from .documents import LabeledDocument, Task, labels_for

logger = logging.getLogger(__name__)


class SamplingMode(str, Enum):
    """how training data is rebalanced.

    `balanced` downsamples then oversamples, `full` only oversamples and
    `unbalanced` leaves the data alone.
    """

    BALANCED = "balanced"
    FULL = "full"
    UNBALANCED = "unbalanced"


@dataclass(frozen=True)
class SamplingPlan:
    targets: Mapping[str, int]
    max_ratio: float
    seed: int
    mode: SamplingMode = SamplingMode.BALANCED
    source_counts: Mapping[str, int] = field(default_factory=dict)

    @property
    def unbalanced(self) -> bool:
        return self.mode is SamplingMode.UNBALANCED

    def as_dict(self) -> Dict[str, object]:
        return {
            "mode": self.mode.value,
            "max_ratio": self.max_ratio,
            "seed": self.seed,
            "source_counts": dict(self.source_counts),
            "targets": dict(self.targets),
        }


def make_sampling_plan(
    class_counts: Mapping[str, int],
    max_ratio: float = 2.0,
    seed: int = 42,
    mode: SamplingMode = SamplingMode.BALANCED,
) -> SamplingPlan:
    """compute per-class targets.

    majority classes are capped at ceil(max_ratio * minority count), then every
    class is oversampled up to the largest remaining count.
    """
    if len(class_counts) < 2:
        raise ValidationError(
            f"sampling needs at least two classes, got {sorted(class_counts)}"
        )
    for label, count in class_counts.items():
        if count <= 0:
            raise ValidationError(f"class {label!r} has no documents")
    if not max_ratio > 0:
        raise ValidationError(f"max_ratio must be positive, got {max_ratio}")

    counts = {label: int(class_counts[label]) for label in sorted(class_counts)}
    if mode is SamplingMode.UNBALANCED:
        targets = dict(counts)
    elif mode is SamplingMode.FULL:
        targets = {label: max(counts.values()) for label in counts}
    else:
        cap = math.ceil(round(max_ratio * min(counts.values()), 9))
        capped = {label: min(count, cap) for label, count in counts.items()}
        targets = {label: max(capped.values()) for label in counts}

    plan = SamplingPlan(
        targets=targets, max_ratio=max_ratio, seed=seed, mode=mode, source_counts=counts
    )
    if not plan.unbalanced and len(set(targets.values())) != 1:
        raise ValidationError(f"sampling plan is not balanced: {targets}")
    return plan


def apply_sampling(
    documents: Sequence[LabeledDocument], plan: SamplingPlan, task: Task
) -> List[LabeledDocument]:
    """resample so each planned class has exactly its target count.

    downsampling draws without replacement; oversampling keeps every original
    and adds duplicates drawn with replacement. classes absent from the plan
    pass through unchanged. the result is shuffled with the plan seed.
    """
    labels = labels_for(documents, task)
    positions: Dict[str, List[int]] = {}
    for index, label in enumerate(labels):
        positions.setdefault(label, []).append(index)

    missing = sorted(set(plan.targets) - set(positions))
    if missing:
        raise ValidationError(
            f"sampling plan references classes missing from the dataset: {missing}"
        )

    rng = np.random.default_rng(plan.seed)
    chosen: List[int] = []
    for label in sorted(positions):
        members = np.asarray(positions[label])
        target = plan.targets.get(label, len(members))
        if target <= len(members):
            picked = np.sort(rng.choice(len(members), size=target, replace=False))
        else:
            extra = rng.choice(len(members), size=target - len(members), replace=True)
            picked = np.concatenate([np.arange(len(members)), extra])
        chosen.extend(members[picked].tolist())
        logger.debug("class %s: %d -> %d documents", label, len(members), target)

    order = rng.permutation(len(chosen))
    return [documents[chosen[i]] for i in order]
