"""canonicalization of obfuscated social-media text.

the pipeline runs in a fixed order: mentions -> links -> diacritics and
confusables -> leetspeak -> elongation -> variant dictionary -> lowercase ->
spacing. every edit is recorded in the document trace.
"""

import re
import unicodedata
from dataclasses import dataclass
from typing import Callable, Dict, IO, Iterable, List, Mapping, Optional, Tuple

from ..core.errors import ValidationError
from ..parsers.resource_parser import open_resource, read_two_column

USER_TOKEN = "<USER>"

MENTION_PATTERN = re.compile(r"(?<![\w@])@\w+")
_URL = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_WHITESPACE = re.compile(r"\s+")
_TOKEN = re.compile(r"\S+")

# homoglyphs that survive NFKD; letters only
_CONFUSABLES = str.maketrans(
    {
        # greek
        "α": "a", "β": "b", "γ": "y", "ε": "e", "η": "n", "ι": "i", "κ": "k",
        "μ": "u", "ν": "v", "ο": "o", "ρ": "p", "σ": "o", "ς": "s", "τ": "t",
        "υ": "u", "χ": "x", "ω": "w",
        "Α": "A", "Β": "B", "Ε": "E", "Η": "H", "Ι": "I", "Κ": "K", "Μ": "M",
        "Ν": "N", "Ο": "O", "Ρ": "P", "Τ": "T", "Υ": "Y", "Χ": "X", "Ζ": "Z",
        # cyrillic
        "а": "a", "в": "b", "е": "e", "к": "k", "м": "m", "н": "h", "о": "o",
        "р": "p", "с": "c", "т": "t", "у": "y", "х": "x", "ѕ": "s", "і": "i",
        "ј": "j", "ԁ": "d", "ԛ": "q", "ԝ": "w",
        "А": "A", "В": "B", "Е": "E", "К": "K", "М": "M", "Н": "H", "О": "O",
        "Р": "P", "С": "C", "Т": "T", "У": "Y", "Х": "X", "Ѕ": "S", "І": "I",
        "Ј": "J",
        # latin letters without a decomposition
        "ı": "i", "ł": "l", "Ł": "L", "ø": "o", "Ø": "O", "đ": "d", "Đ": "D",
        "ħ": "h", "ŧ": "t", "ð": "d", "ƒ": "f", "ɑ": "a", "ɡ": "g",
    }
)


@dataclass(frozen=True)
class TraceEdit:
    """one rewrite; `span` indexes the text the rule was applied to."""

    rule: str
    span: Tuple[int, int]
    before: str
    after: str


@dataclass(frozen=True)
class NormalizedDocument:
    original: str
    normalized: str
    tokens: Tuple[str, ...]
    trace: Tuple[TraceEdit, ...] = ()


class LeetMap:
    """single-character leetspeak substitutions (`1` -> `i`, `$` -> `s`, ...)."""

    def __init__(self, mapping: Mapping[str, str]):
        for source, target in mapping.items():
            if len(source) != 1:
                raise ValidationError(
                    f"leet entries map single characters, got {source!r}"
                )
            if not target.isalpha():
                raise ValidationError(
                    f"leet entry {source!r} must map to letters, got {target!r}"
                )
        self.mapping: Dict[str, str] = dict(mapping)

    @classmethod
    def load(cls, stream: IO[str], source: str = "leet map") -> "LeetMap":
        return cls(
            {left: right for _, left, right in read_two_column(stream, source=source)}
        )

    def __contains__(self, char: str) -> bool:
        return char in self.mapping

    def __getitem__(self, char: str) -> str:
        return self.mapping[char]


def _split_edges(token: str) -> Tuple[str, str, str]:
    """(leading punctuation, core, trailing punctuation).

    the core runs from the first to the last alphanumeric character.
    """
    start = 0
    while start < len(token) and not token[start].isalnum():
        start += 1
    if start == len(token):
        return "", token, ""
    end = len(token)
    while not token[end - 1].isalnum():
        end -= 1
    return token[:start], token[start:end], token[end:]


def strip_diacritics(token: str) -> str:
    decomposed = unicodedata.normalize("NFKD", token)
    stripped = "".join(char for char in decomposed if not unicodedata.combining(char))
    return stripped.translate(_CONFUSABLES)


def map_leetspeak(token: str, leet: LeetMap) -> str:
    """substitute leet characters in tokens that contain a letter.

    characters in the trailing run of non-alphanumerics are punctuation and
    stay as they are.
    """
    if not any(char.isalpha() for char in token):
        return token
    end = len(token)
    while end > 0 and not token[end - 1].isalnum():
        end -= 1
    body = "".join(leet[char] if char in leet else char for char in token[:end])
    return body + token[end:]


def squeeze_elongation(token: str) -> str:
    """cut runs of more than two equal characters (case-insensitive) to two."""
    out: List[str] = []
    run = 0
    for char in token:
        if out and char.lower() == out[-1].lower():
            run += 1
        else:
            run = 1
        if run <= 2:
            out.append(char)
    return "".join(out)


def fold_obfuscation(token: str, leet: Optional[LeetMap] = None) -> str:
    """diacritics/confusables, leetspeak and elongation only; idempotent."""
    leet = leet or default_leet_map()
    return squeeze_elongation(map_leetspeak(strip_diacritics(token), leet))


class VariantDictionary:
    """spelling variants keyed by their folded, lowercased form.

    keys may span several tokens ("mutha fukker"). a key that folds to its own
    canonical form is redundant and dropped; a key that folds to another
    entry's canonical form would chain and is rejected.
    """

    def __init__(
        self, pairs: Iterable[Tuple[str, str]], leet: Optional[LeetMap] = None
    ):
        self.leet = leet or default_leet_map()
        raw = [(variant, canonical.lower()) for variant, canonical in pairs]
        canonicals = {canonical for _, canonical in raw}
        self.entries: Dict[Tuple[str, ...], str] = {}
        for variant, canonical in raw:
            key = tuple(
                fold_obfuscation(part, self.leet).lower() for part in variant.split()
            )
            if not key:
                continue
            folded = " ".join(key)
            if folded == canonical:
                continue
            if folded in canonicals:
                raise ValidationError(
                    f"variant {variant!r} folds to canonical form {folded!r}; "
                    "chains are not allowed"
                )
            previous = self.entries.get(key)
            if previous is not None and previous != canonical:
                raise ValidationError(
                    f"variant {variant!r} maps to both {previous!r} and {canonical!r}"
                )
            self.entries[key] = canonical
        self.max_key_length = max((len(key) for key in self.entries), default=0)

    @classmethod
    def load(
        cls,
        stream: IO[str],
        leet: Optional[LeetMap] = None,
        source: str = "variant dictionary",
    ) -> "VariantDictionary":
        return cls(
            (
                (left, right)
                for _, left, right in read_two_column(stream, source=source)
            ),
            leet=leet,
        )

    def __len__(self) -> int:
        return len(self.entries)

    def records(self) -> List[List[str]]:
        """[variant, canonical] pairs in key order, as stored in a saved pipeline."""
        return [
            [" ".join(key), canonical]
            for key, canonical in sorted(self.entries.items())
        ]

    def lookup(self, cores: List[str], start: int) -> Optional[Tuple[int, str]]:
        """longest key starting at `start`: (number of tokens, canonical)."""
        longest = min(self.max_key_length, len(cores) - start)
        for length in range(longest, 0, -1):
            canonical = self.entries.get(
                tuple(core.lower() for core in cores[start : start + length])
            )
            if canonical is not None:
                return length, canonical
        return None


_DEFAULTS: Dict[str, object] = {}


def default_leet_map() -> LeetMap:
    if "leet" not in _DEFAULTS:
        with open_resource("leet.tsv") as stream:
            _DEFAULTS["leet"] = LeetMap.load(stream, source="leet.tsv")
    return _DEFAULTS["leet"]  # type: ignore[return-value]


def default_variant_dictionary() -> VariantDictionary:
    if "variants" not in _DEFAULTS:
        with open_resource("variants.tsv") as stream:
            _DEFAULTS["variants"] = VariantDictionary.load(
                stream, source="variants.tsv"
            )
    return _DEFAULTS["variants"]  # type: ignore[return-value]


def _rewrite_tokens(
    text: str, rule: str, rewrite: Callable[[str], str], trace: List[TraceEdit]
) -> str:
    pieces = []
    last = 0
    for match in _TOKEN.finditer(text):
        token = match.group()
        new = rewrite(token)
        if new != token:
            trace.append(TraceEdit(rule, match.span(), token, new))
        pieces.append(text[last : match.start()])
        pieces.append(new)
        last = match.end()
    pieces.append(text[last:])
    return "".join(pieces)


def _rewrite_pattern(
    text: str,
    rule: str,
    pattern: "re.Pattern[str]",
    replacement: str,
    trace: List[TraceEdit],
) -> str:
    def substitute(match: "re.Match[str]") -> str:
        trace.append(TraceEdit(rule, match.span(), match.group(), replacement))
        return replacement

    return pattern.sub(substitute, text)


def _phrase_end(parts: List[Tuple[str, str, str]], start: int) -> int:
    """end of the run of tokens from `start` with no punctuation between them."""
    end = start + 1
    while end < len(parts) and not parts[end - 1][2] and not parts[end][0]:
        end += 1
    return end


def _apply_dictionary(
    text: str, dictionary: VariantDictionary, trace: List[TraceEdit]
) -> str:
    """replace dictionary variants; a multi-token variant never spans punctuation."""
    matches = list(_TOKEN.finditer(text))
    parts = [_split_edges(match.group()) for match in matches]
    cores = [core for _, core, _ in parts]
    pieces = []
    last = 0
    i = 0
    while i < len(matches):
        hit = (
            dictionary.lookup(cores[: _phrase_end(parts, i)], i)
            if dictionary.max_key_length
            else None
        )
        if hit is None:
            i += 1
            continue
        length, canonical = hit
        first, final = matches[i], matches[i + length - 1]
        before = text[first.start() : final.end()]
        after = parts[i][0] + canonical + parts[i + length - 1][2]
        trace.append(TraceEdit("variant", (first.start(), final.end()), before, after))
        pieces.append(text[last : first.start()])
        pieces.append(after)
        last = final.end()
        i += length
    pieces.append(text[last:])
    return "".join(pieces)


def _lowercase(token: str) -> str:
    return USER_TOKEN.join(part.lower() for part in token.split(USER_TOKEN))


def _split_punctuation(token: str) -> List[str]:
    out: List[str] = []
    pieces = token.split(USER_TOKEN)
    for index, piece in enumerate(pieces):
        if index:
            out.append(USER_TOKEN)
        if piece:
            out.extend(part for part in _split_edges(piece) if part)
    return out


def tokenize(normalized: str) -> List[str]:
    """split on single spaces, dropping empty tokens."""
    return [token for token in normalized.split(" ") if token]


def normalize_text(
    raw: str, dictionary: Optional[VariantDictionary] = None
) -> NormalizedDocument:
    """run the full canonicalization pipeline on one text (never fails)."""
    dictionary = dictionary if dictionary is not None else default_variant_dictionary()
    leet = dictionary.leet
    trace: List[TraceEdit] = []

    text = _rewrite_pattern(raw, "mention", MENTION_PATTERN, USER_TOKEN, trace)
    text = _rewrite_pattern(text, "url", _URL, " ", trace)
    text = _rewrite_tokens(text, "diacritics", strip_diacritics, trace)
    text = _rewrite_tokens(
        text, "leetspeak", lambda token: map_leetspeak(token, leet), trace
    )
    text = _rewrite_tokens(text, "elongation", squeeze_elongation, trace)
    text = _apply_dictionary(text, dictionary, trace)
    text = _rewrite_tokens(text, "lowercase", _lowercase, trace)

    spaced = " ".join(
        part
        for token in _WHITESPACE.split(text)
        if token
        for part in _split_punctuation(token)
    )
    if spaced != text:
        trace.append(TraceEdit("spacing", (0, len(text)), text, spaced))
    return NormalizedDocument(
        original=raw,
        normalized=spaced,
        tokens=tuple(tokenize(spaced)),
        trace=tuple(trace),
    )


def unnormalized_document(raw: str) -> NormalizedDocument:
    """whitespace splitting only; the baseline for normalization ablations."""
    collapsed = " ".join(raw.split())
    return NormalizedDocument(
        original=raw, normalized=collapsed, tokens=tuple(tokenize(collapsed))
    )
