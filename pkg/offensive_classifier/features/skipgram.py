"""subword skip-gram with negative sampling, trained with plain numpy SGD.

a word's input vector is its own row plus the sum of its hashed character
n-gram rows. negatives are drawn from the unigram distribution raised to
0.75 and the learning rate decays linearly over all center positions.
"""

import logging
from collections import Counter
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit

from ..core.config import SkipgramConfig
from ..core.errors import TrainingError
from .embeddings import EmbeddingMatrix, SubwordTable

logger = logging.getLogger(__name__)

NEGATIVE_POWER = 0.75


def negative_sampling_loss(
    hidden: np.ndarray, outputs: np.ndarray, labels: np.ndarray
) -> Tuple[float, np.ndarray, np.ndarray]:
    """loss and gradients for one center word.

    `outputs` holds the output vectors of the targets, `labels` is 1 for
    observed context words and 0 for negatives. returns (loss, d/d hidden,
    d/d outputs).
    """
    scores = outputs @ hidden
    signs = np.where(labels > 0, -1.0, 1.0)
    loss = float(np.sum(np.logaddexp(0.0, signs * scores)))
    delta = expit(scores) - labels
    return loss, delta @ outputs, np.outer(delta, hidden)


def skipgram_loss(
    word_vector: np.ndarray,
    bucket_vectors: np.ndarray,
    outputs: np.ndarray,
    labels: np.ndarray,
) -> Tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """loss with the hidden vector built from a word row and its bucket rows.

    every bucket row receives the same gradient as the word row.
    """
    hidden = word_vector + bucket_vectors.sum(axis=0)
    loss, grad_hidden, grad_outputs = negative_sampling_loss(hidden, outputs, labels)
    grad_buckets = np.broadcast_to(grad_hidden, bucket_vectors.shape).copy()
    return loss, grad_hidden, grad_buckets, grad_outputs


class SkipgramTrainer:
    """trains an EmbeddingMatrix; per-epoch mean losses are kept in `epoch_losses`."""

    def __init__(self, config: Optional[SkipgramConfig] = None):
        self.config = config or SkipgramConfig()
        self.epoch_losses: List[float] = []

    def _vocabulary(
        self, corpus: Sequence[Sequence[str]]
    ) -> Tuple[List[str], np.ndarray]:
        counts = Counter(token for tokens in corpus for token in tokens)
        kept = sorted(
            (
                (word, count)
                for word, count in counts.items()
                if count >= self.config.min_count
            ),
            key=lambda item: (-item[1], item[0]),
        )
        if not kept:
            raise TrainingError(
                f"no word occurs at least {self.config.min_count} times"
            )
        return [word for word, _ in kept], np.asarray(
            [count for _, count in kept], dtype=np.float64
        )

    def fit(self, corpus: Sequence[Sequence[str]]) -> EmbeddingMatrix:
        config = self.config
        if not corpus:
            raise TrainingError("cannot train embeddings on an empty corpus")
        if config.subwords and config.min_n > config.max_n:
            raise TrainingError(f"min_n {config.min_n} exceeds max_n {config.max_n}")
        words, counts = self._vocabulary(corpus)
        index = {word: i for i, word in enumerate(words)}
        rng = np.random.default_rng(config.seed)
        dim = config.dim

        word_in = rng.uniform(-0.5 / dim, 0.5 / dim, size=(len(words), dim))
        word_out = np.zeros((len(words), dim))
        table: Optional[SubwordTable] = None
        subword_ids: List[np.ndarray] = [np.zeros(0, dtype=np.int64)] * len(words)
        if config.subwords:
            table = SubwordTable(
                rng.uniform(-0.5 / dim, 0.5 / dim, size=(config.buckets, dim)),
                config.min_n,
                config.max_n,
            )
            subword_ids = [table.bucket_ids(word) for word in words]

        noise = counts**NEGATIVE_POWER
        noise /= noise.sum()
        sentences = [
            np.asarray([index[t] for t in tokens if t in index], dtype=np.int64)
            for tokens in corpus
        ]
        sentences = [ids for ids in sentences if len(ids) > 1]
        total = max(1, config.epochs * sum(len(ids) for ids in sentences))

        self.epoch_losses = []
        processed = 0
        for epoch in range(config.epochs):
            loss_sum, pairs = 0.0, 0
            for sentence in (sentences[i] for i in rng.permutation(len(sentences))):
                for position, center in enumerate(sentence):
                    progress = processed / total
                    processed += 1
                    lr = config.learning_rate - (
                        config.learning_rate - config.min_learning_rate
                    ) * progress
                    reach = int(rng.integers(1, config.window + 1))
                    lo = max(0, position - reach)
                    hi = min(len(sentence), position + reach + 1)
                    context = np.concatenate(
                        [sentence[lo:position], sentence[position + 1 : hi]]
                    )
                    if not len(context):
                        continue
                    negatives = rng.choice(
                        len(words), size=len(context) * config.negative, p=noise
                    )
                    targets = np.concatenate([context, negatives])
                    labels = np.concatenate(
                        [np.ones(len(context)), np.zeros(len(negatives))]
                    )

                    buckets = subword_ids[center]
                    hidden = word_in[center] + (
                        table.vectors[buckets].sum(axis=0) if table is not None else 0.0
                    )
                    loss, grad_hidden, grad_outputs = negative_sampling_loss(
                        hidden, word_out[targets], labels
                    )
                    np.add.at(word_out, targets, -lr * grad_outputs)
                    word_in[center] -= lr * grad_hidden
                    if table is not None and len(buckets):
                        np.add.at(table.vectors, buckets, -lr * grad_hidden)
                    loss_sum += loss
                    pairs += len(context)
            self.epoch_losses.append(loss_sum / pairs if pairs else 0.0)
            logger.debug(
                "skip-gram epoch %d: mean loss %.6f", epoch + 1, self.epoch_losses[-1]
            )

        vectors = word_in.copy()
        if table is not None:
            for row, buckets in enumerate(subword_ids):
                vectors[row] += table.vectors[buckets].sum(axis=0)
        logger.info(
            "trained %d x %d embedding over %d sentences",
            len(words),
            dim,
            len(sentences),
        )
        return EmbeddingMatrix(words, vectors, table)


def train_skipgram(
    corpus: Sequence[Sequence[str]], config: Optional[SkipgramConfig] = None
) -> EmbeddingMatrix:
    return SkipgramTrainer(config).fit(corpus)
