"""chance-corrected inter-annotator agreement: Fleiss' and Cohen's kappa."""

from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np

from ..core.errors import ValidationError


@dataclass(frozen=True)
class AgreementReport:
    kappa: float
    observed: float
    expected: float
    raters: int
    items: int

    def as_dict(self) -> Dict[str, Any]:
        return {
            "kappa": self.kappa,
            "observed": self.observed,
            "expected": self.expected,
            "raters": self.raters,
            "items": self.items,
        }


def _kappa(observed: float, expected: float) -> float:
    # every rating in one category: chance agreement is total, so is observed
    if expected >= 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


def fleiss_kappa(ratings: Any) -> AgreementReport:
    """`ratings[i, j]` counts the raters who put item i in category j."""
    table = np.asarray(ratings, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] == 0 or table.shape[1] == 0:
        raise ValidationError(
            "ratings must be a non-empty items x categories table, "
            f"got shape {table.shape}"
        )
    if np.any(table < 0) or np.any(table != np.round(table)):
        raise ValidationError("rating counts must be non-negative integers")
    per_item = table.sum(axis=1)
    raters = per_item[0]
    if np.any(per_item != raters):
        uneven = int(np.nonzero(per_item != raters)[0][0])
        raise ValidationError(
            f"item {uneven + 1} has {int(per_item[uneven])} ratings, "
            f"item 1 has {int(raters)}"
        )
    if raters < 2:
        raise ValidationError(
            f"at least 2 raters per item are needed, got {int(raters)}"
        )

    items = table.shape[0]
    proportions = table.sum(axis=0) / (items * raters)
    agreement = ((table**2).sum(axis=1) - raters) / (raters * (raters - 1))
    observed = float(agreement.mean())
    expected = float((proportions**2).sum())
    return AgreementReport(
        _kappa(observed, expected), observed, expected, int(raters), items
    )


def cohen_kappa(first: Sequence[str], second: Sequence[str]) -> AgreementReport:
    """two raters over the same items; expected agreement from the marginals."""
    if len(first) != len(second):
        raise ValidationError(
            f"rater label lists differ in length: {len(first)} vs {len(second)}"
        )
    if not first:
        raise ValidationError("no items rated")
    categories = sorted(set(first) | set(second))
    a = np.asarray([categories.index(label) for label in first])
    b = np.asarray([categories.index(label) for label in second])
    observed = float(np.mean(a == b))
    first_share = np.bincount(a, minlength=len(categories)) / len(a)
    second_share = np.bincount(b, minlength=len(categories)) / len(b)
    expected = float(first_share @ second_share)
    return AgreementReport(_kappa(observed, expected), observed, expected, 2, len(a))
