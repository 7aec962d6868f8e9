"""character n-gram language models with additive smoothing.

two models are trained, one on offensive dictionary words and one on clean
words; the per-word perplexity difference is a feature.
"""

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

from ..core.errors import TrainingError, ValidationError

BOS = "\x02"
EOS = "\x03"
UNK = "\x00"
_SENTINELS = frozenset((BOS, EOS, UNK))
FORMAT = "charlm/1"


class CharGramLM:
    """order-n character model; immutable once built.

    the alphabet is the set of training characters plus the end sentinel. a
    character outside the alphabet is read as UNK and receives the smoothed
    mass of a zero-count symbol.
    """

    def __init__(
        self,
        order: int,
        alpha: float,
        alphabet: Sequence[str],
        counts: Mapping[str, Mapping[str, int]],
    ):
        self.order = order
        self.alpha = alpha
        self.alphabet: Tuple[str, ...] = tuple(alphabet)
        self._symbols = frozenset(self.alphabet)
        self.counts: Dict[str, Dict[str, int]] = {
            context: dict(nexts) for context, nexts in counts.items()
        }
        self._totals = {
            context: sum(nexts.values()) for context, nexts in self.counts.items()
        }

    def probability(self, context: str, char: str) -> float:
        """P(char | context) with additive smoothing over the alphabet."""
        nexts = self.counts.get(context)
        seen = nexts.get(char, 0) if nexts else 0
        total = self._totals.get(context, 0)
        return (seen + self.alpha) / (total + self.alpha * len(self.alphabet))

    def transitions(self, word: str) -> List[Tuple[str, str]]:
        """(context, next symbol) pairs, end sentinel included."""
        context = BOS * (self.order - 1)
        pairs = []
        for char in list(word) + [EOS]:
            symbol = char if char in self._symbols else UNK
            pairs.append((context, symbol))
            context = (context + symbol)[1:]
        return pairs

    def log_probability(self, word: str) -> float:
        return math.fsum(
            math.log(self.probability(context, symbol))
            for context, symbol in self.transitions(word)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": FORMAT,
            "order": self.order,
            "alpha": self.alpha,
            "alphabet": list(self.alphabet),
            "counts": {
                context: dict(sorted(nexts.items()))
                for context, nexts in sorted(self.counts.items())
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CharGramLM":
        if data.get("format") != FORMAT:
            raise ValidationError(f"unsupported char LM format {data.get('format')!r}")
        return cls(
            int(data["order"]), float(data["alpha"]), data["alphabet"], data["counts"]
        )


@dataclass(frozen=True)
class PerplexityGap:
    per_token: Tuple[float, ...]
    mean: float
    max: float


def train_char_lm(
    words: Iterable[str], order: int = 3, alpha: float = 0.1
) -> CharGramLM:
    """count n-gram transitions over distinct words.

    each word is padded with n-1 start sentinels and one end sentinel.
    """
    words = list(words)
    if not words:
        raise TrainingError("cannot train a character model on an empty word list")
    if order < 2:
        raise ValidationError(f"order must be at least 2, got {order}")
    if not alpha > 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")

    characters = set()
    for word in words:
        if not word:
            raise ValidationError("empty word in training list")
        reserved = _SENTINELS.intersection(word)
        if reserved:
            raise ValidationError(
                f"word {word!r} contains reserved sentinel characters"
            )
        characters.update(word)

    counts: Dict[str, Dict[str, int]] = defaultdict(lambda: defaultdict(int))
    model = CharGramLM(order, alpha, sorted(characters) + [EOS], {})
    # word types, not tokens: repeating the list leaves the model unchanged
    for word in sorted(set(words)):
        for context, symbol in model.transitions(word):
            counts[context][symbol] += 1
    return CharGramLM(order, alpha, model.alphabet, counts)


def perplexity(lm: CharGramLM, word: str) -> float:
    """exp of the mean negative log-probability over len(word)+1 transitions."""
    transitions = len(word) + 1
    return math.exp(-lm.log_probability(word) / transitions)


def perplexity_gap(
    lm_off: CharGramLM, lm_clean: CharGramLM, tokens: Sequence[str]
) -> PerplexityGap:
    """clean minus offensive perplexity per token; positive reads as offensive."""
    if lm_off.order != lm_clean.order:
        raise ValidationError(
            f"language models differ in order: {lm_off.order} vs {lm_clean.order}"
        )
    if not tokens:
        return PerplexityGap(per_token=(), mean=0.0, max=0.0)
    gaps = tuple(
        perplexity(lm_clean, token) - perplexity(lm_off, token) for token in tokens
    )
    return PerplexityGap(
        per_token=gaps, mean=math.fsum(gaps) / len(gaps), max=max(gaps)
    )
