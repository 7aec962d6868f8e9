"""deterministic stratified train/dev/test splitting."""

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..core.errors import ValidationError
from .documents import LabeledDocument, Task, labels_for

DEFAULT_FRACTIONS = (0.8, 0.1, 0.1)


@dataclass(frozen=True)
class DatasetSplit:
    train: List[LabeledDocument]
    dev: List[LabeledDocument]
    test: List[LabeledDocument]
    fractions: Tuple[float, float, float]


def _allocate(count: int, fractions: Sequence[float]) -> List[int]:
    """largest-remainder allocation of `count` items; ties go to the earlier split."""
    raw = [count * fraction for fraction in fractions]
    sizes = [math.floor(value) for value in raw]
    leftover = count - sum(sizes)
    by_remainder = sorted(range(len(raw)), key=lambda i: (-(raw[i] - sizes[i]), i))
    for i in by_remainder[:leftover]:
        sizes[i] += 1
    return sizes


def stratified_split(
    documents: Sequence[LabeledDocument],
    task: Task,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    seed: int = 42,
) -> DatasetSplit:
    """split per class so each split keeps the class proportions (±1 document)."""
    if len(fractions) != 3:
        raise ValidationError(
            f"expected three fractions (train, dev, test), got {list(fractions)}"
        )
    if any(not fraction > 0 for fraction in fractions):
        raise ValidationError(
            f"split fractions must all be positive, got {list(fractions)}"
        )
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValidationError(f"split fractions must sum to 1, got {sum(fractions)}")

    ids = [doc.id for doc in documents]
    if len(set(ids)) != len(ids):
        raise ValidationError("document ids must be unique before splitting")

    labels = labels_for(documents, task)
    members: Dict[str, List[int]] = {}
    for index, label in enumerate(labels):
        members.setdefault(label, []).append(index)

    rng = np.random.default_rng(seed)
    assigned: List[List[int]] = [[], [], []]
    for label in sorted(members):
        indices = members[label]
        sizes = _allocate(len(indices), fractions)
        if min(sizes) < 1:
            raise ValidationError(
                f"class {label!r} has {len(indices)} documents, "
                f"too few for a {list(fractions)} split"
            )
        shuffled = [indices[i] for i in rng.permutation(len(indices))]
        start = 0
        for part, size in zip(assigned, sizes):
            part.extend(shuffled[start : start + size])
            start += size

    train, dev, test = ([documents[i] for i in sorted(part)] for part in assigned)
    shares: Tuple[float, float, float] = tuple(fractions)  # type: ignore[assignment]
    return DatasetSplit(train=train, dev=dev, test=test, fractions=shares)
