"""ablation grid: model kinds x feature variants x sampling modes x normalization.

every cell trains on the same training split and is scored on the same test
split. a failing cell is recorded with its error and the grid carries on.
"""

import itertools
import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed
from pydantic import BaseModel, Field, field_validator

from ..core.classifier import train_text_classifier
from ..core.config import BaseVectorization, ModelKind, RunConfig, SkipgramConfig
from ..core.pipeline import FeatureResources
from ..data.documents import labeled_for, labels_for
from ..data.sampling import SamplingMode
from ..data.splitting import DatasetSplit
from ..features.embeddings import EmbeddingMatrix
from ..features.skipgram import train_skipgram
from ..text.normalizer import normalize_text, unnormalized_document
from .metrics import macro_f1

logger = logging.getLogger(__name__)

MODEL_LABELS = {ModelKind.FOREST: "RF", ModelKind.SVM: "SVM", ModelKind.LOGREG: "LR"}
# "" is plain tf-idf, F adds the feature blocks, U swaps tf-idf for pooled embeddings
VARIANTS = ("", "+F", "+U", "+U+F")
REGIME_SUFFIX = {
    SamplingMode.BALANCED: "",
    SamplingMode.FULL: " FULL",
    SamplingMode.UNBALANCED: " UNB",
}


class AblationGrid(BaseModel):
    models: List[ModelKind] = Field(default_factory=lambda: [ModelKind.FOREST])
    variants: List[str] = Field(default_factory=lambda: list(VARIANTS))
    sampling: List[SamplingMode] = Field(
        default_factory=lambda: [SamplingMode.BALANCED]
    )
    normalize: List[bool] = Field(default_factory=lambda: [True, False])
    seeds: List[int] = Field(default_factory=lambda: [42])

    @field_validator("variants")
    @classmethod
    def _check_variants(cls, values: List[str]) -> List[str]:
        unknown = [value for value in values if value not in VARIANTS]
        if unknown:
            raise ValueError(
                f"unknown variants {unknown}; choose from {list(VARIANTS)}"
            )
        return values


@dataclass(frozen=True)
class AblationCell:
    model: ModelKind
    variant: str
    sampling: SamplingMode
    normalize: bool
    seed: int
    macro_f1: Optional[float] = None
    error: Optional[str] = None

    @property
    def label(self) -> str:
        return MODEL_LABELS[self.model] + self.variant

    @property
    def uses_embedding(self) -> bool:
        return "+U" in self.variant

    @property
    def uses_features(self) -> bool:
        return "+F" in self.variant

    @property
    def base(self) -> BaseVectorization:
        if self.uses_embedding:
            return BaseVectorization.EMBEDDING
        return BaseVectorization.TFIDF

    def regime(self, task: str) -> str:
        return task + REGIME_SUFFIX[self.sampling] + ("" if self.normalize else " RAW")

    def run_config(self, base: RunConfig) -> RunConfig:
        """the exact configuration this cell trains with."""
        return base.model_copy(
            update={
                "model": self.model,
                "sampling": self.sampling,
                "normalize": self.normalize,
                "seed": self.seed,
                "jobs": 1,
                "base": self.base,
                "use_graphemic": self.uses_features,
                "use_lexicon": self.uses_features,
                "use_charlm": self.uses_features,
            }
        )

    def as_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "model": self.model.value,
            "variant": self.variant,
            "base": self.base.value,
            "sampling": self.sampling.value,
            "normalize": self.normalize,
            "seed": self.seed,
            "macro_f1": self.macro_f1,
            "error": self.error,
        }


@dataclass(frozen=True)
class AblationReport:
    task: str
    cells: Tuple[AblationCell, ...]
    # where the +U cells got their vectors; None when the grid has no +U cell
    embedding: Optional[Dict[str, Any]] = None

    @property
    def partial(self) -> bool:
        return any(cell.error is not None for cell in self.cells)

    def normalization_deltas(self) -> List[Dict[str, Any]]:
        """macro F1 with normalization minus without, for cells run both ways."""
        scores = {
            (cell.model, cell.variant, cell.sampling, cell.seed): cell.macro_f1
            for cell in self.cells
            if not cell.normalize
        }
        deltas = []
        for cell in self.cells:
            if not cell.normalize:
                continue
            raw = scores.get((cell.model, cell.variant, cell.sampling, cell.seed))
            if cell.macro_f1 is None or raw is None:
                continue
            deltas.append(
                {
                    "label": cell.label,
                    "sampling": cell.sampling.value,
                    "seed": cell.seed,
                    "delta": cell.macro_f1 - raw,
                }
            )
        return deltas

    def as_dict(self) -> Dict[str, Any]:
        return {
            "task": self.task,
            "partial": self.partial,
            "embedding": self.embedding,
            "cells": [cell.as_dict() for cell in self.cells],
            "normalization_deltas": self.normalization_deltas(),
        }


def grid_cells(grid: AblationGrid) -> List[AblationCell]:
    return [
        AblationCell(model, variant, sampling, normalize, seed)
        for model, variant, sampling, normalize, seed in itertools.product(
            grid.models, grid.variants, grid.sampling, grid.normalize, grid.seeds
        )
    ]


def _run_cell(
    cell: AblationCell,
    split: DatasetSplit,
    base: RunConfig,
    resources: FeatureResources,
    embedding: Optional[EmbeddingMatrix],
) -> AblationCell:
    config = cell.run_config(base)
    try:
        classifier, _ = train_text_classifier(
            split.train, config, replace(resources, embedding=embedding)
        )
        test = labeled_for(split.test, config.task)
        predicted = classifier.predict([doc.raw_text for doc in test])
        report = macro_f1(labels_for(test, config.task), predicted, config.task.classes)
    except Exception as e:  # recorded in the report; the grid goes on
        logger.warning(
            "cell %s (%s) failed: %s", cell.label, cell.regime(config.task.value), e
        )
        return replace(cell, error=f"{type(e).__name__}: {e}")
    logger.info(
        "cell %s %s: macro F1 %.4f",
        cell.label,
        cell.regime(config.task.value),
        report.macro_f1,
    )
    return replace(cell, macro_f1=report.macro_f1)


def embedding_provenance(
    base: RunConfig, resources: FeatureResources
) -> Dict[str, Any]:
    """how the +U cells get their vectors, in enough detail to rebuild them."""
    if resources.embedding is not None:
        path = base.embedding_path
        source = str(path) if path is not None else "preloaded"
        return {
            "source": source,
            "dim": resources.embedding.dim,
            "words": len(resources.embedding),
        }
    return {
        "source": "corpus skip-gram",
        "skipgram": base.skipgram_config().model_dump(mode="json"),
    }


def run_ablation(
    grid: AblationGrid,
    split: DatasetSplit,
    base: RunConfig,
    resources: FeatureResources,
    jobs: int = 1,
) -> AblationReport:
    """train and score every grid cell; cells run in parallel when jobs > 1."""
    cells = grid_cells(grid)
    embeddings: Dict[bool, Optional[EmbeddingMatrix]] = {}
    provenance = None
    if any(cell.uses_embedding for cell in cells):
        provenance = embedding_provenance(base, resources)
        skipgram = base.skipgram_config()
        for normalize in sorted(
            {cell.normalize for cell in cells if cell.uses_embedding}
        ):
            embeddings[normalize] = resources.embedding or _corpus_embedding(
                split, normalize, resources, skipgram
            )

    logger.info(
        "running %d ablation cells on %d training / %d test documents",
        len(cells),
        len(split.train),
        len(split.test),
    )
    finished = Parallel(n_jobs=jobs)(
        delayed(_run_cell)(cell, split, base, resources, embeddings.get(cell.normalize))
        for cell in cells
    )
    return AblationReport(base.task.value, tuple(finished), provenance)


def _corpus_embedding(
    split: DatasetSplit,
    normalize: bool,
    resources: FeatureResources,
    config: SkipgramConfig,
) -> Optional[EmbeddingMatrix]:
    """skip-gram vectors from the training texts, tokenized as the cell tokenizes."""
    documents = [
        (
            normalize_text(doc.raw_text, resources.dictionary)
            if normalize
            else unnormalized_document(doc.raw_text)
        )
        for doc in split.train
    ]
    try:
        return train_skipgram([doc.tokens for doc in documents], config)
    except Exception as e:
        logger.warning("could not train a corpus embedding: %s", e)
        return None


def matrix_tsv(
    report: AblationReport, cells: Optional[Sequence[AblationCell]] = None
) -> str:
    """rows are model variants, columns are sampling / normalization regimes."""
    cells = list(cells if cells is not None else report.cells)
    multi_seed = len({cell.seed for cell in cells}) > 1
    rows: List[str] = []
    columns: List[str] = []
    values: Dict[Tuple[str, str], str] = {}
    for cell in cells:
        row = cell.label + (f" seed={cell.seed}" if multi_seed else "")
        column = cell.regime(report.task)
        if row not in rows:
            rows.append(row)
        if column not in columns:
            columns.append(column)
        score = "ERR" if cell.macro_f1 is None else f"{cell.macro_f1:.4f}"
        values[(row, column)] = score
    lines = ["\t".join(["model", *columns])]
    for row in rows:
        lines.append(
            "\t".join([row, *(values.get((row, column), "") for column in columns)])
        )
    return "\n".join(lines) + "\n"
