"""the feature pipeline: raw text -> normalized document -> feature row.

a pipeline owns every resource the features need (variant dictionary,
lexicon, character models, tf-idf, embedding) and serializes to one JSON
document plus an optional embedding file.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..features.assemble import FeatureAssembler, feature_names
from ..features.embeddings import (
    EmbeddingMatrix,
    pool_embedding,
    read_embedding,
    write_embedding,
)
from ..features.graphemic import FeatureVector
from ..features.tfidf import TfidfModel, fit_tfidf
from ..parsers.resource_parser import open_resource, read_word_list
from ..text.charlm import CharGramLM, train_char_lm
from ..text.lexicon import (
    Lexicon,
    Tier,
    lexicon_from_records,
    lexicon_records,
    load_lexicon,
)
from ..text.normalizer import (
    LeetMap,
    NormalizedDocument,
    VariantDictionary,
    normalize_text,
    unnormalized_document,
)
from .config import BaseVectorization, FeatureConfig, RunConfig
from .errors import ConfigError, ValidationError

logger = logging.getLogger(__name__)

PIPELINE_FORMAT = "pipeline/1"
EMBEDDING_FILE = "embedding.vec"


@dataclass
class FeatureResources:
    """everything loaded from resource files before any training data is seen."""

    dictionary: VariantDictionary
    lexicon: Lexicon
    lm_off: CharGramLM
    lm_clean: CharGramLM
    embedding: Optional[EmbeddingMatrix] = None


def _model_words(words: Sequence[str], dictionary: VariantDictionary) -> List[str]:
    """normalized alphabetic word forms, as the char models see them when scoring."""
    out = []
    for word in words:
        out.extend(
            token
            for token in normalize_text(word, dictionary).tokens
            if token.isalpha()
        )
    return out


def load_resources(config: RunConfig) -> FeatureResources:
    """read the configured resource files, falling back to the packaged seeds."""
    with open_resource("leet.tsv", config.leet_path) as stream:
        leet = LeetMap.load(stream, source=str(config.leet_path or "leet.tsv"))
    with open_resource("variants.tsv", config.variants_path) as stream:
        dictionary = VariantDictionary.load(
            stream, leet=leet, source=str(config.variants_path or "variants.tsv")
        )
    with open_resource("lexicon.tsv", config.lexicon_path) as stream:
        lexicon = load_lexicon(
            stream, dictionary, source=str(config.lexicon_path or "lexicon.tsv")
        )
    with open_resource("clean_words.txt", config.clean_words_path) as stream:
        clean_words = read_word_list(stream)
    if config.offensive_words_path is not None:
        with open(config.offensive_words_path, encoding="utf-8") as stream:
            offensive_words = read_word_list(stream)
    else:
        offensive_words = lexicon.words(Tier.OFFENSIVE)

    lm_off = train_char_lm(
        _model_words(offensive_words, dictionary),
        config.charlm_order,
        config.charlm_alpha,
    )
    lm_clean = train_char_lm(
        _model_words(clean_words, dictionary), config.charlm_order, config.charlm_alpha
    )
    embedding = (
        read_embedding(config.embedding_path)
        if config.embedding_path is not None
        else None
    )
    logger.debug(
        "resources: %d variants, %d lexicon entries, %d offensive / %d clean LM words",
        len(dictionary), len(lexicon), len(offensive_words), len(clean_words),
    )
    return FeatureResources(dictionary, lexicon, lm_off, lm_clean, embedding)


class FeaturePipeline:
    """normalization plus feature assembly under one FeatureConfig."""

    def __init__(
        self,
        config: FeatureConfig,
        dictionary: VariantDictionary,
        lexicon: Optional[Lexicon] = None,
        lm_off: Optional[CharGramLM] = None,
        lm_clean: Optional[CharGramLM] = None,
        embedding: Optional[EmbeddingMatrix] = None,
        normalize: bool = True,
        tfidf: Optional[TfidfModel] = None,
    ):
        if config.base is BaseVectorization.NONE and not config.uses_features:
            raise ConfigError("the pipeline has no feature block enabled")
        if config.uses_embedding and embedding is None:
            raise ConfigError(f"base={config.base.value} needs an embedding")
        self.config = config
        self.dictionary = dictionary
        self.lexicon = lexicon
        self.lm_off = lm_off
        self.lm_clean = lm_clean
        self.embedding = embedding
        self.normalize = normalize
        self.tfidf = tfidf
        self._assembler = FeatureAssembler(lexicon, lm_off, lm_clean, config)

    @classmethod
    def from_resources(
        cls, config: FeatureConfig, resources: FeatureResources, normalize: bool = True
    ) -> "FeaturePipeline":
        return cls(
            config,
            resources.dictionary,
            lexicon=resources.lexicon,
            lm_off=resources.lm_off,
            lm_clean=resources.lm_clean,
            embedding=resources.embedding if config.uses_embedding else None,
            normalize=normalize,
        )

    @property
    def fitted(self) -> bool:
        return self.tfidf is not None or not self.config.uses_tfidf

    def document(self, raw: str) -> NormalizedDocument:
        return (
            normalize_text(raw, self.dictionary)
            if self.normalize
            else unnormalized_document(raw)
        )

    def fit(self, texts: Sequence[str]) -> "FeaturePipeline":
        """fit the text-dependent parts (tf-idf) on training texts."""
        if self.config.uses_tfidf:
            self.tfidf = fit_tfidf(
                [self.document(text).tokens for text in texts],
                min_df=self.config.tfidf_min_df,
                sublinear_tf=self.config.tfidf_sublinear,
                normalize=self.config.tfidf_norm,
            )
        return self

    def base_names(self) -> Tuple[str, ...]:
        self._require_fitted()
        names: Tuple[str, ...] = ()
        if self.config.uses_tfidf and self.tfidf is not None:
            names += tuple(f"tfidf:{term}" for term in self.tfidf.terms)
        if self.config.uses_embedding and self.embedding is not None:
            names += tuple(f"embedding_{i}" for i in range(self.embedding.dim))
        return names

    @property
    def names(self) -> Tuple[str, ...]:
        return feature_names(self.config, self.base_names())

    def _base_matrix(self, documents: Sequence[NormalizedDocument]) -> np.ndarray:
        blocks = []
        if self.config.uses_tfidf and self.tfidf is not None:
            blocks.append(
                self.tfidf.transform([doc.tokens for doc in documents]).toarray()
            )
        if self.config.uses_embedding and self.embedding is not None:
            embedding = self.embedding
            pooled = [pool_embedding(doc.tokens, embedding) for doc in documents]
            blocks.append(np.vstack(pooled) if pooled else np.zeros((0, embedding.dim)))
        return np.hstack(blocks) if blocks else np.zeros((len(documents), 0))

    def featurize(self, raw: str) -> FeatureVector:
        """one named feature vector."""
        self._require_fitted()
        document = self.document(raw)
        base = FeatureVector(
            self.base_names(), tuple(float(v) for v in self._base_matrix([document])[0])
        )
        return self._assembler(document, base)

    def transform(self, texts: Sequence[str]) -> np.ndarray:
        """feature matrix with columns in `names` order."""
        self._require_fitted()
        documents = [self.document(text) for text in texts]
        base = self._base_matrix(documents)
        extra = [self._assembler(document).values for document in documents]
        width = len(self.names) - base.shape[1]
        features = np.asarray(extra, dtype=np.float64).reshape(len(documents), width)
        return np.hstack([base, features])

    def _require_fitted(self) -> None:
        if not self.fitted:
            raise ValidationError("the pipeline must be fitted before featurizing")

    def to_dict(self) -> Dict[str, Any]:
        self._require_fitted()
        return {
            "format": PIPELINE_FORMAT,
            "config": self.config.model_dump(mode="json"),
            "normalize": self.normalize,
            "leet": dict(sorted(self.dictionary.leet.mapping.items())),
            "variants": self.dictionary.records(),
            "lexicon": (
                lexicon_records(self.lexicon) if self.lexicon is not None else None
            ),
            "lm_off": (
                self.lm_off.to_dict()
                if self.lm_off is not None and self.config.use_charlm
                else None
            ),
            "lm_clean": (
                self.lm_clean.to_dict()
                if self.lm_clean is not None and self.config.use_charlm
                else None
            ),
            "tfidf": self.tfidf.to_dict() if self.tfidf is not None else None,
            "embedding": EMBEDDING_FILE if self.embedding is not None else None,
            "names": list(self.names),
        }

    @classmethod
    def from_dict(
        cls, data: Mapping[str, Any], directory: Optional[Path] = None
    ) -> "FeaturePipeline":
        if data.get("format") != PIPELINE_FORMAT:
            raise ValidationError(f"unsupported pipeline format {data.get('format')!r}")
        leet = LeetMap(data["leet"])
        embedding = None
        if data.get("embedding"):
            if directory is None:
                raise ValidationError(
                    "the pipeline references an embedding file "
                    "but no directory was given"
                )
            embedding = read_embedding(directory / data["embedding"])
        pipeline = cls(
            FeatureConfig(**data["config"]),
            VariantDictionary([tuple(pair) for pair in data["variants"]], leet=leet),
            lexicon=(
                lexicon_from_records(data["lexicon"])
                if data.get("lexicon") is not None
                else None
            ),
            lm_off=CharGramLM.from_dict(data["lm_off"]) if data.get("lm_off") else None,
            lm_clean=(
                CharGramLM.from_dict(data["lm_clean"]) if data.get("lm_clean") else None
            ),
            embedding=embedding,
            normalize=bool(data["normalize"]),
            tfidf=TfidfModel.from_dict(data["tfidf"]) if data.get("tfidf") else None,
        )
        if list(pipeline.names) != list(data.get("names", pipeline.names)):
            raise ValidationError(
                "saved feature names do not match the rebuilt pipeline"
            )
        return pipeline

    def save_embedding(self, directory: Path) -> None:
        if self.embedding is not None:
            write_embedding(self.embedding, directory / EMBEDDING_FILE)
