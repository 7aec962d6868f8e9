"""combine two embedding spaces: align rows on the union vocabulary,
concatenate columns, keep the top-k singular directions."""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from ..core.errors import ValidationError
from .embeddings import EmbeddingMatrix, compose_oov

logger = logging.getLogger(__name__)


def truncated_svd(
    matrix: np.ndarray, k: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """rank-k dense SVD; each right singular vector's largest entry is positive."""
    u, s, vt = linalg.svd(np.asarray(matrix, dtype=np.float64), full_matrices=False)
    u, s, vt = u[:, :k], s[:k], vt[:k]
    pivots = np.argmax(np.abs(vt), axis=1)
    signs = np.where(vt[np.arange(len(vt)), pivots] < 0, -1.0, 1.0)
    return u * signs, s, vt * signs[:, None]


def _aligned_block(space: EmbeddingMatrix, words: List[str]) -> np.ndarray:
    block = np.zeros((len(words), space.dim))
    for row, word in enumerate(words):
        column = space.index.get(word)
        if column is not None:
            block[row] = space.vectors[column]
        elif space.subwords is not None:
            block[row] = compose_oov(space, word)
    return block


def _standardize_block(block: np.ndarray) -> np.ndarray:
    """mean-center columns, then scale so the root-mean-square column norm is 1."""
    centered = block - block.mean(axis=0)
    scale = np.linalg.norm(centered) / np.sqrt(block.shape[1])
    return centered / scale if scale > 0 else centered


def combine_embeddings(
    first: EmbeddingMatrix, second: EmbeddingMatrix, k: Optional[int] = None
) -> EmbeddingMatrix:
    """U_k S_k of [A' | B'] over the union vocabulary.

    words keep first's order, then second's new words follow.

    a word missing from one space takes that space's subword composition when
    it has one, otherwise a zero block. the result has no subword table.
    """
    k = max(first.dim, second.dim) if k is None else k
    if k <= 0 or k > first.dim + second.dim:
        raise ValidationError(f"k must be in 1..{first.dim + second.dim}, got {k}")
    words = list(first.words) + [
        word for word in second.words if word not in first.index
    ]
    if not words:
        raise ValidationError("both embeddings are empty")

    matrix = np.hstack(
        [
            _standardize_block(_aligned_block(first, words)),
            _standardize_block(_aligned_block(second, words)),
        ]
    )
    u, s, _ = truncated_svd(matrix, k)
    combined = u * s
    if combined.shape[1] < k:
        # fewer rows than requested components
        combined = np.hstack([combined, np.zeros((len(words), k - combined.shape[1]))])
    logger.info(
        "combined %d + %d words (%d + %d dims) into %d words x %d dims",
        len(first), len(second), first.dim, second.dim, len(words), k,
    )
    return EmbeddingMatrix(words, combined)
