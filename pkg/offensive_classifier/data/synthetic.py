"""generated corpora whose labels depend noisily on blacklist hits.

offensive documents carry one or two words from a generated offensive
vocabulary, often disguised with leetspeak digits, diacritics, elongation
or uppercase. clean documents carry decoys (elongated, uppercase or
digit-bearing clean words) so surface statistics alone do not give the
label away. the matching lexicon is returned with the corpus.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..parsers.resource_parser import open_resource, read_word_list
from .documents import LabeledDocument

logger = logging.getLogger(__name__)

_CONSONANTS = "bdfgklmnprtvz"
_VOWELS = "aeiou"
_LEET = {"a": "4", "e": "3", "i": "1", "o": "0", "s": "5"}
_ACCENTS = {"a": "á", "e": "é", "i": "í", "o": "ö", "u": "ü"}
_DECOYS = ("2day", "gr8", "2morrow", "b4", "l8r")
_TARGETS = {
    "IND": ("you", "@{user}", "your"),
    "GRP": ("they", "those people", "them"),
    "OTH": ("this company", "the government", "that show"),
}


class SyntheticConfig(BaseModel):
    documents: int = Field(default=5000, ge=2)
    offensive_vocabulary: int = Field(default=800, ge=1)
    contextual_vocabulary: int = Field(default=40, ge=0)
    offensive_rate: float = Field(default=0.5, gt=0, lt=1)
    obfuscation_rate: float = Field(default=0.8, ge=0, le=1)
    decoy_rate: float = Field(default=0.3, ge=0, le=1)
    label_noise: float = Field(default=0.05, ge=0, lt=0.5)
    min_words: int = Field(default=6, ge=1)
    max_words: int = Field(default=14, ge=1)
    seed: int = 42

    @model_validator(mode="after")
    def _check_lengths(self) -> "SyntheticConfig":
        if self.max_words < self.min_words:
            raise ValueError(
                f"max_words {self.max_words} is below min_words {self.min_words}"
            )
        return self


@dataclass(frozen=True)
class SyntheticCorpus:
    documents: List[LabeledDocument]
    offensive_words: Tuple[str, ...]
    contextual_words: Tuple[str, ...]
    clean_words: Tuple[str, ...]

    def lexicon_tsv(self) -> str:
        lines = ["# generated lexicon"]
        lines += [f"OFFENSIVE\t{word}" for word in self.offensive_words]
        lines += [f"CONTEXTUAL\t{word}" for word in self.contextual_words]
        return "\n".join(lines) + "\n"


def _pseudo_words(count: int, rng: np.random.Generator, taken: Set[str]) -> List[str]:
    """consonant-vowel words with one doubled consonant, so elongation is reversible."""
    words: List[str] = []
    while len(words) < count:
        syllables = [
            _CONSONANTS[rng.integers(len(_CONSONANTS))]
            + _VOWELS[rng.integers(len(_VOWELS))]
            for _ in range(int(rng.integers(2, 4)))
        ]
        word = "".join(syllables)
        position = 2 * int(rng.integers(1, len(syllables)))
        word = word[:position] + word[position] + word[position:]
        if word not in taken:
            taken.add(word)
            words.append(word)
    return words


def obfuscate(word: str, rng: np.random.Generator) -> str:
    """one or two disguises that normalization undoes."""
    styles = rng.choice(4, size=int(rng.integers(1, 3)), replace=False)
    out = word
    for style in sorted(int(s) for s in styles):
        if style == 0:
            out = "".join(
                _LEET[c] if c in _LEET and rng.random() < 0.6 else c for c in out
            )
        elif style == 1:
            out = "".join(
                _ACCENTS[c] if c in _ACCENTS and rng.random() < 0.6 else c for c in out
            )
        elif style == 2:
            for index in range(len(out) - 1):
                if out[index] == out[index + 1] and out[index].isalpha():
                    stretched = out[index] * int(rng.integers(3, 7))
                    out = out[:index] + stretched + out[index + 2 :]
                    break
        else:
            out = out.upper()
    if out == word:
        out = word.upper()
    return out


def _decoy(word: str, rng: np.random.Generator) -> str:
    kind = int(rng.integers(3))
    if kind == 0:
        return word + word[-1] * int(rng.integers(2, 5))
    if kind == 1:
        return word.upper()
    return _DECOYS[int(rng.integers(len(_DECOYS)))]


def generate_corpus(
    config: Optional[SyntheticConfig] = None, clean_words: Sequence[str] = ()
) -> SyntheticCorpus:
    """documents labeled for subtasks A, B and C (B and C on offensive ones only)."""
    config = config or SyntheticConfig()
    rng = np.random.default_rng(config.seed)
    if not clean_words:
        with open_resource("clean_words.txt") as stream:
            clean_words = read_word_list(stream)
    clean = sorted(
        {
            word
            for word in clean_words
            if word.isalpha() and word.islower() and len(word) > 1
        }
    )
    taken = set(clean)
    offensive = _pseudo_words(config.offensive_vocabulary, rng, taken)
    contextual = _pseudo_words(config.contextual_vocabulary, rng, taken)

    documents = []
    for index in range(config.documents):
        is_offensive = rng.random() < config.offensive_rate
        length = int(rng.integers(config.min_words, config.max_words + 1))
        words = [clean[int(i)] for i in rng.integers(len(clean), size=length)]
        if rng.random() < config.decoy_rate:
            slot = int(rng.integers(len(words)))
            words[slot] = _decoy(words[slot], rng)
        if contextual and rng.random() < 0.3:
            words.insert(
                int(rng.integers(len(words) + 1)),
                contextual[int(rng.integers(len(contextual)))],
            )

        label_b = label_c = None
        if is_offensive:
            for _ in range(int(rng.integers(1, 3))):
                word = offensive[int(rng.integers(len(offensive)))]
                if rng.random() < config.obfuscation_rate:
                    word = obfuscate(word, rng)
                words.insert(int(rng.integers(len(words) + 1)), word)
            if rng.random() < 0.7:
                label_b = "TIN"
                label_c = ("IND", "GRP", "OTH")[int(rng.integers(3))]
                cue = _TARGETS[label_c][int(rng.integers(3))].format(
                    user=f"user{index}"
                )
                words.insert(0, cue)
            else:
                label_b = "UNT"
        if rng.random() < 0.2:
            words.insert(0, f"@friend{int(rng.integers(1000))}")
        if rng.random() < 0.1:
            words.append(f"https://example.com/{index}")

        label_a = "OFF" if is_offensive else "NOT"
        if rng.random() < config.label_noise:
            label_a, label_b, label_c = (
                ("NOT", None, None) if is_offensive else ("OFF", "UNT", None)
            )
        documents.append(
            LabeledDocument(
                id=f"syn{index:05d}",
                raw_text=" ".join(words),
                label_a=label_a,
                label_b=label_b,
                label_c=label_c,
                source="synthetic",
            )
        )
    logger.debug("generated %d synthetic documents", len(documents))
    return SyntheticCorpus(documents, tuple(offensive), tuple(contextual), tuple(clean))
