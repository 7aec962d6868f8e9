"""word-vector matrices: subword composition, pooling, coverage and text I/O."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ParseError, TrainingError, ValidationError

logger = logging.getLogger(__name__)


def subword_hash(ngram: str) -> int:
    """32-bit FNV-1a over utf-8 bytes read as signed chars, as fastText does."""
    value = 2166136261
    for byte in ngram.encode("utf-8"):
        value ^= (byte - 256 if byte > 127 else byte) & 0xFFFFFFFF
        value = (value * 16777619) & 0xFFFFFFFF
    return value


def character_ngrams(word: str, min_n: int, max_n: int) -> List[str]:
    """n-grams of `<word>` with boundary markers, shortest first."""
    marked = f"<{word}>"
    return [
        marked[i : i + n]
        for n in range(min_n, max_n + 1)
        for i in range(len(marked) - n + 1)
    ]


@dataclass(frozen=True)
class SubwordTable:
    """hashed character n-gram vectors."""

    vectors: np.ndarray
    min_n: int
    max_n: int

    @property
    def buckets(self) -> int:
        return int(self.vectors.shape[0])

    def bucket_ids(self, word: str) -> np.ndarray:
        return np.asarray(
            [
                subword_hash(ngram) % self.buckets
                for ngram in character_ngrams(word, self.min_n, self.max_n)
            ],
            dtype=np.int64,
        )


class EmbeddingMatrix:
    """|V| x d word vectors with an optional subword table for unseen words."""

    def __init__(
        self,
        words: Sequence[str],
        vectors: np.ndarray,
        subwords: Optional[SubwordTable] = None,
    ):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(words):
            raise ValidationError(
                f"{len(words)} words for a vector matrix of shape {vectors.shape}"
            )
        if vectors.shape[1] == 0:
            raise ValidationError("embedding dimension must be positive")
        if not np.all(np.isfinite(vectors)):
            raise ValidationError("embedding contains non-finite values")
        if subwords is not None and subwords.vectors.shape[1] != vectors.shape[1]:
            raise ValidationError(
                "subword vectors and word vectors differ in dimension"
            )
        self.words: Tuple[str, ...] = tuple(words)
        self.index: Dict[str, int] = {word: row for row, word in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ValidationError("embedding vocabulary contains duplicate words")
        self.vectors = vectors
        self.subwords = subwords

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self.index

    def vector(self, word: str) -> Optional[np.ndarray]:
        """row for a known word, subword composition for an unknown one, else None."""
        row = self.index.get(word)
        if row is not None:
            return self.vectors[row]
        if self.subwords is not None and word:
            return compose_oov(self, word)
        return None


def compose_oov(embedding: EmbeddingMatrix, word: str) -> np.ndarray:
    """mean bucket vector of `<word>`'s n-grams; a known word returns its row."""
    if not word:
        raise ValidationError("cannot compose a vector for an empty word")
    row = embedding.index.get(word)
    if row is not None:
        return embedding.vectors[row].copy()
    if embedding.subwords is None:
        raise ValidationError("embedding has no subword table")
    ids = embedding.subwords.bucket_ids(word)
    if not len(ids):
        return np.zeros(embedding.dim)
    return embedding.subwords.vectors[ids].mean(axis=0)


def pool_embedding(tokens: Sequence[str], embedding: EmbeddingMatrix) -> np.ndarray:
    """mean of the resolvable token vectors; zeros when none resolve."""
    vectors = [
        vector
        for vector in (embedding.vector(token) for token in tokens)
        if vector is not None
    ]
    if not vectors:
        return np.zeros(embedding.dim)
    return np.mean(vectors, axis=0)


def coverage(embedding: EmbeddingMatrix, corpus: Iterable[Sequence[str]]) -> float:
    """out-of-vocabulary rate by type: |types not in vocabulary| / |types|."""
    types = {token for tokens in corpus for token in tokens}
    if not types:
        raise ValidationError("coverage of an empty corpus is undefined")
    return sum(1 for token in types if token not in embedding.index) / len(types)


def write_embedding(embedding: EmbeddingMatrix, path: Path) -> None:
    """`|V| d` header, then `word v1 .. vd`; the subword table goes to sidecar files."""
    lines = [f"{len(embedding)} {embedding.dim}"]
    for word, row in zip(embedding.words, embedding.vectors):
        if not word or any(char.isspace() for char in word):
            raise ValidationError(f"word {word!r} cannot be written in the text format")
        lines.append(" ".join([word] + [repr(float(value)) for value in row]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    if embedding.subwords is not None:
        table = embedding.subwords
        np.save(_subword_array(path), table.vectors, allow_pickle=False)
        _subword_meta(path).write_text(
            json.dumps(
                {"buckets": table.buckets, "min_n": table.min_n, "max_n": table.max_n},
                sort_keys=True,
            ),
            encoding="utf-8",
        )


def read_embedding(path: Path) -> EmbeddingMatrix:
    """read the text format; sidecar subword files are picked up when present."""
    source = str(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except UnicodeDecodeError as e:
        raise ParseError(f"not valid UTF-8: {e}", source=source) from e
    if not lines:
        raise ParseError("empty embedding file", line=1, source=source)
    header = lines[0].split()
    if len(header) != 2 or not all(part.isdigit() for part in header):
        raise ParseError(
            "header must be `<vocabulary size> <dimension>`", line=1, source=source
        )
    size, dim = int(header[0]), int(header[1])

    words: List[str] = []
    rows: List[List[float]] = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.rstrip().split(" ")
        if len(parts) != dim + 1:
            raise ParseError(
                f"expected a word and {dim} values, got {len(parts)} fields",
                line=number,
                source=source,
            )
        try:
            rows.append([float(value) for value in parts[1:]])
        except ValueError as e:
            raise ParseError(
                f"bad vector value: {e}", line=number, source=source
            ) from e
        words.append(parts[0])
    if len(words) != size:
        raise ParseError(
            f"header announces {size} words, file has {len(words)}",
            line=1,
            source=source,
        )
    if not words:
        raise TrainingError(f"{source}: embedding has no words")

    subwords = None
    if _subword_meta(path).exists():
        meta = json.loads(_subword_meta(path).read_text(encoding="utf-8"))
        subwords = SubwordTable(
            np.load(_subword_array(path), allow_pickle=False),
            int(meta["min_n"]),
            int(meta["max_n"]),
        )
    logger.debug("read %d x %d embedding from %s", len(words), dim, source)
    return EmbeddingMatrix(words, np.asarray(rows, dtype=np.float64), subwords)


def _subword_array(path: Path) -> Path:
    return path.with_name(path.name + ".subwords.npy")


def _subword_meta(path: Path) -> Path:
    return path.with_name(path.name + ".subwords.json")
