"""surface statistics of the raw text, computed before normalization.

mention spans are removed before character statistics. token statistics use
the normalized word tokens (a letter or digit, or the user placeholder).
"""

import re
import unicodedata
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..core.errors import ValidationError
from ..text.normalizer import MENTION_PATTERN, USER_TOKEN, NormalizedDocument

GRAPHEMIC_NAMES: Tuple[str, ...] = (
    "char_count",
    "token_count",
    "uppercase_count",
    "uppercase_ratio",
    "special_char_count",
    "punctuation_count",
    "exclamation_count",
    "question_count",
    "digit_count",
    "mean_token_length",
    "has_elongation",
)

_ELONGATION = re.compile(r"(\S)\1\1")


@dataclass(frozen=True)
class FeatureVector:
    """named values in a fixed order; the names are the schema."""

    names: Tuple[str, ...]
    values: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.values):
            raise ValidationError(
                f"{len(self.names)} feature names for {len(self.values)} values"
            )
        if len(set(self.names)) != len(self.names):
            raise ValidationError("feature names must be unique")
        if self.values and not np.all(np.isfinite(self.values)):
            bad = [
                name
                for name, value in zip(self.names, self.values)
                if not np.isfinite(value)
            ]
            raise ValidationError(f"non-finite feature values: {', '.join(bad[:5])}")

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    @classmethod
    def from_array(cls, values: np.ndarray, prefix: str) -> "FeatureVector":
        """dense block named `prefix_0 .. prefix_{n-1}`."""
        flat = np.asarray(values, dtype=np.float64).ravel()
        return cls(
            tuple(f"{prefix}_{i}" for i in range(len(flat))),
            tuple(float(v) for v in flat),
        )

    def concat(self, other: "FeatureVector") -> "FeatureVector":
        return FeatureVector(self.names + other.names, self.values + other.values)


EMPTY_VECTOR = FeatureVector((), ())


def is_word_token(token: str) -> bool:
    return token == USER_TOKEN or any(char.isalnum() for char in token)


def is_punctuation(char: str) -> bool:
    return unicodedata.category(char).startswith("P")


def graphemic_features(raw: str, document: NormalizedDocument) -> FeatureVector:
    """the eleven surface features of one document, in GRAPHEMIC_NAMES order."""
    text = MENTION_PATTERN.sub("", raw)
    visible = [char for char in text if not char.isspace()]
    letters = [char for char in visible if char.isalpha()]
    uppercase = sum(1 for char in letters if char.isupper())
    words = [token for token in document.tokens if is_word_token(token)]

    values = (
        float(len(text)),
        float(len(words)),
        float(uppercase),
        uppercase / len(letters) if letters else 0.0,
        float(sum(1 for char in visible if not char.isalnum())),
        float(sum(1 for char in visible if is_punctuation(char))),
        float(text.count("!")),
        float(text.count("?")),
        float(sum(1 for char in visible if char.isdigit())),
        sum(len(token) for token in words) / len(words) if words else 0.0,
        1.0 if _ELONGATION.search(raw) else 0.0,
    )
    return FeatureVector(GRAPHEMIC_NAMES, values)
