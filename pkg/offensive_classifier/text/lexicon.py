"""two-tier blacklist with leftmost-longest phrase matching over normalized tokens."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, IO, Iterable, List, Optional, Sequence, Tuple

from ..core.errors import ParseError, ValidationError
from ..parsers.resource_parser import open_resource, read_two_column
from .normalizer import VariantDictionary, normalize_text

logger = logging.getLogger(__name__)

_TERMINAL = "\x00tier"


class Tier(str, Enum):
    OFFENSIVE = "OFFENSIVE"
    CONTEXTUAL = "CONTEXTUAL"


@dataclass(frozen=True)
class LexiconEntry:
    phrase: Tuple[str, ...]
    tier: Tier


@dataclass(frozen=True)
class TierMatch:
    span: Tuple[int, int]
    tier: Tier


@dataclass(frozen=True)
class TierCounts:
    offensive_count: int
    contextual_count: int
    matches: Tuple[TierMatch, ...]

    @property
    def total(self) -> int:
        return self.offensive_count + self.contextual_count


class Lexicon:
    """immutable phrase index; each phrase belongs to exactly one tier."""

    def __init__(self, entries: Iterable[LexiconEntry]):
        tiers: Dict[Tuple[str, ...], Tier] = {}
        for entry in entries:
            if not entry.phrase:
                raise ValidationError("lexicon phrases need at least one token")
            known = tiers.get(entry.phrase)
            if known is not None and known is not entry.tier:
                raise ValidationError(
                    f"phrase {' '.join(entry.phrase)!r} listed as both "
                    f"{known.value} and {entry.tier.value}"
                )
            if known is not None:
                logger.debug(
                    "duplicate lexicon entry %r ignored", " ".join(entry.phrase)
                )
            tiers[entry.phrase] = entry.tier

        self.entries: Tuple[LexiconEntry, ...] = tuple(
            LexiconEntry(phrase, tier) for phrase, tier in sorted(tiers.items())
        )
        self._trie: dict = {}
        for entry in self.entries:
            node = self._trie
            for token in entry.phrase:
                node = node.setdefault(token, {})
            node[_TERMINAL] = entry.tier

    def __len__(self) -> int:
        return len(self.entries)

    def words(self, tier: Optional[Tier] = None) -> List[str]:
        """single-token entries, optionally restricted to one tier."""
        return [
            entry.phrase[0]
            for entry in self.entries
            if len(entry.phrase) == 1 and (tier is None or entry.tier is tier)
        ]

    def longest_at(
        self, tokens: Sequence[str], start: int
    ) -> Optional[Tuple[int, Tier]]:
        node = self._trie
        best = None
        for index in range(start, len(tokens)):
            node = node.get(tokens[index])
            if node is None:
                break
            if _TERMINAL in node:
                best = (index + 1, node[_TERMINAL])
        return best


def load_lexicon(
    stream: IO[str],
    dictionary: Optional[VariantDictionary] = None,
    source: str = "lexicon",
) -> Lexicon:
    """read `tier<TAB>phrase` lines; phrases are normalized before indexing."""
    entries = []
    for number, tier_name, phrase in read_two_column(stream, source=source):
        try:
            tier = Tier(tier_name.upper())
        except ValueError:
            raise ParseError(
                f"unknown tier {tier_name!r} (expected OFFENSIVE or CONTEXTUAL)",
                line=number,
                source=source,
            )
        tokens = normalize_text(phrase, dictionary).tokens
        if not tokens:
            raise ParseError(
                f"phrase {phrase!r} is empty after normalization",
                line=number,
                source=source,
            )
        entries.append(LexiconEntry(tokens, tier))
    return Lexicon(entries)


def default_lexicon(dictionary: Optional[VariantDictionary] = None) -> Lexicon:
    with open_resource("lexicon.tsv") as stream:
        return load_lexicon(stream, dictionary, source="lexicon.tsv")


def match_counts(tokens: Sequence[str], lexicon: Lexicon) -> TierCounts:
    """leftmost-longest, non-overlapping matches; a phrase counts once."""
    matches = []
    start = 0
    while start < len(tokens):
        hit = lexicon.longest_at(tokens, start)
        if hit is None:
            start += 1
            continue
        end, tier = hit
        matches.append(TierMatch((start, end), tier))
        start = end
    offensive = sum(1 for match in matches if match.tier is Tier.OFFENSIVE)
    return TierCounts(
        offensive_count=offensive,
        contextual_count=len(matches) - offensive,
        matches=tuple(matches),
    )


def lexicon_records(lexicon: Lexicon) -> List[List[str]]:
    """[tier, phrase] pairs for embedding a lexicon in a saved pipeline."""
    return [[entry.tier.value, " ".join(entry.phrase)] for entry in lexicon.entries]


def lexicon_from_records(records: Iterable[Sequence[str]]) -> Lexicon:
    return Lexicon(
        LexiconEntry(tuple(phrase.split(" ")), Tier(tier)) for tier, phrase in records
    )
