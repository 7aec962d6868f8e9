"""labeled documents and the task schemas that pick their target label."""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.errors import ValidationError

LABELS_A = ("NOT", "OFF")
LABELS_B = ("TIN", "UNT")
LABELS_C = ("GRP", "IND", "OTH")
LABELS_HATE = ("HATE", "NOHATE")


class Task(str, Enum):
    """classification task; the value is the competition subtask name."""

    HATE = "5-A"
    OFFENSE = "6-A"
    TARGETING = "6-B"
    TARGET = "6-C"

    @property
    def field(self) -> str:
        return _TASK_FIELDS[self]

    @property
    def classes(self) -> Tuple[str, ...]:
        return _TASK_CLASSES[self]

    def label_of(self, document: "LabeledDocument") -> Optional[str]:
        return getattr(document, self.field)

    @classmethod
    def parse(cls, value: str) -> "Task":
        try:
            return cls(value.upper())
        except ValueError:
            choices = ", ".join(task.value for task in cls)
            raise ValidationError(f"unknown task {value!r} (expected one of {choices})")


_TASK_FIELDS = {
    Task.HATE: "label_hate",
    Task.OFFENSE: "label_a",
    Task.TARGETING: "label_b",
    Task.TARGET: "label_c",
}

_TASK_CLASSES = {
    Task.HATE: LABELS_HATE,
    Task.OFFENSE: LABELS_A,
    Task.TARGETING: LABELS_B,
    Task.TARGET: LABELS_C,
}


@dataclass(frozen=True)
class LabeledDocument:
    """raw text with its (hierarchical) task labels and provenance."""

    id: str
    raw_text: str
    label_a: Optional[str] = None
    label_b: Optional[str] = None
    label_c: Optional[str] = None
    label_hate: Optional[str] = None
    source: str = ""

    def __post_init__(self) -> None:
        if not self.raw_text.strip():
            raise ValidationError(f"document {self.id}: empty text")
        for name, allowed in (
            ("label_a", LABELS_A),
            ("label_b", LABELS_B),
            ("label_c", LABELS_C),
            ("label_hate", LABELS_HATE),
        ):
            value = getattr(self, name)
            if value is not None and value not in allowed:
                raise ValidationError(
                    f"document {self.id}: {name}={value!r} not in {allowed}"
                )
        if self.label_b is not None and self.label_a != "OFF":
            raise ValidationError(
                f"document {self.id}: subtask_b={self.label_b} requires "
                f"subtask_a=OFF, got {self.label_a}"
            )
        if self.label_c is not None and self.label_b != "TIN":
            raise ValidationError(
                f"document {self.id}: subtask_c={self.label_c} requires "
                f"subtask_b=TIN, got {self.label_b}"
            )


def labeled_for(
    documents: Iterable[LabeledDocument], task: Task
) -> List[LabeledDocument]:
    """keep only the documents that carry a label for the task."""
    return [doc for doc in documents if task.label_of(doc) is not None]


def labels_for(documents: Sequence[LabeledDocument], task: Task) -> List[str]:
    labels = []
    for doc in documents:
        label = task.label_of(doc)
        if label is None:
            raise ValidationError(
                f"document {doc.id} has no label for task {task.value}"
            )
        labels.append(label)
    return labels


def class_counts(documents: Sequence[LabeledDocument], task: Task) -> Dict[str, int]:
    """per-class document counts, keys in sorted order."""
    counts = Counter(labels_for(documents, task))
    return {label: counts[label] for label in sorted(counts)}


def implied_labels(label: str) -> Dict[str, str]:
    """a single label value together with the hierarchy levels it implies."""
    if label in LABELS_A:
        return {"label_a": label}
    if label in LABELS_B:
        return {"label_a": "OFF", "label_b": label}
    if label in LABELS_C:
        return {"label_a": "OFF", "label_b": "TIN", "label_c": label}
    if label in LABELS_HATE:
        return {"label_hate": label}
    raise ValidationError(f"unknown label {label!r}")
