"""precision, recall, F1 and confusion matrices over a declared class list."""

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support

from ..core.errors import ValidationError


@dataclass(frozen=True)
class EvalReport:
    """per-class scores in `classes` order; confusion rows are gold labels."""

    classes: Tuple[str, ...]
    precision: Tuple[float, ...]
    recall: Tuple[float, ...]
    f1: Tuple[float, ...]
    support: Tuple[int, ...]
    confusion: Tuple[Tuple[int, ...], ...]

    @property
    def macro_f1(self) -> float:
        return float(np.mean(self.f1)) if self.f1 else 0.0

    @property
    def accuracy(self) -> float:
        total = sum(self.support)
        return (
            sum(self.confusion[i][i] for i in range(len(self.classes))) / total
            if total
            else 0.0
        )

    def as_dict(self) -> Dict[str, Any]:
        return {
            "classes": list(self.classes),
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
            "per_class": {
                label: {"precision": p, "recall": r, "f1": f, "support": s}
                for label, p, r, f, s in zip(
                    self.classes, self.precision, self.recall, self.f1, self.support
                )
            },
            "confusion": [list(row) for row in self.confusion],
        }


def macro_f1(
    truth: Sequence[str], predicted: Sequence[str], classes: Sequence[str]
) -> EvalReport:
    """per-class scores with 0/0 read as 0; the macro mean covers every class."""
    if len(truth) != len(predicted):
        raise ValidationError(
            f"{len(truth)} gold labels for {len(predicted)} predictions"
        )
    classes = tuple(classes)
    if not classes:
        raise ValidationError("no classes declared")
    unknown = sorted((set(truth) | set(predicted)) - set(classes))
    if unknown:
        raise ValidationError(
            f"labels outside the class list {list(classes)}: {unknown}"
        )

    if not truth:
        zeros = tuple(0.0 for _ in classes)
        empty = tuple(tuple(0 for _ in classes) for _ in classes)
        return EvalReport(
            classes, zeros, zeros, zeros, tuple(0 for _ in classes), empty
        )

    labels: List[str] = list(classes)
    precision, recall, f1, support = precision_recall_fscore_support(
        list(truth), list(predicted), labels=labels, average=None, zero_division=0
    )
    matrix = confusion_matrix(list(truth), list(predicted), labels=labels)
    return EvalReport(
        classes=classes,
        precision=tuple(float(v) for v in precision),
        recall=tuple(float(v) for v in recall),
        f1=tuple(float(v) for v in f1),
        support=tuple(int(v) for v in support),
        confusion=tuple(tuple(int(v) for v in row) for row in matrix),
    )


def report_tsv(report: EvalReport) -> str:
    """per-class table followed by the confusion matrix."""
    lines = ["class\tprecision\trecall\tf1\tsupport"]
    for label, p, r, f, s in zip(
        report.classes, report.precision, report.recall, report.f1, report.support
    ):
        lines.append(f"{label}\t{p:.6f}\t{r:.6f}\t{f:.6f}\t{s}")
    lines.append(f"macro\t\t\t{report.macro_f1:.6f}\t{sum(report.support)}")
    lines.append("")
    lines.append("truth\\predicted\t" + "\t".join(report.classes))
    for label, row in zip(report.classes, report.confusion):
        lines.append(label + "\t" + "\t".join(str(v) for v in row))
    return "\n".join(lines) + "\n"
