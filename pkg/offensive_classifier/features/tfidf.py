"""tf-idf over pre-tokenized documents, backed by scikit-learn."""

import logging
from typing import Any, Dict, List, Mapping, Sequence

import numpy as np
from scipy import sparse
from sklearn.feature_extraction.text import TfidfVectorizer

from ..core.errors import TrainingError, ValidationError

logger = logging.getLogger(__name__)

FORMAT = "tfidf/1"


def _pretokenized(tokens: Sequence[str]) -> Sequence[str]:
    return tokens


def _vectorizer(
    min_df: int, sublinear_tf: bool, normalize: bool, vocabulary: Any = None
) -> TfidfVectorizer:
    return TfidfVectorizer(
        analyzer=_pretokenized,
        lowercase=False,
        min_df=min_df,
        smooth_idf=True,
        sublinear_tf=sublinear_tf,
        norm="l2" if normalize else None,
        vocabulary=vocabulary,
        dtype=np.float64,
    )


class TfidfModel:
    """fitted vocabulary and smoothed idf; columns in lexicographic term order."""

    def __init__(
        self,
        vectorizer: TfidfVectorizer,
        min_df: int,
        sublinear_tf: bool,
        normalize: bool,
    ):
        self._vectorizer = vectorizer
        self.min_df = min_df
        self.sublinear_tf = sublinear_tf
        self.normalize = normalize

    @property
    def vocabulary(self) -> Dict[str, int]:
        return dict(self._vectorizer.vocabulary_)

    @property
    def terms(self) -> List[str]:
        return list(self._vectorizer.get_feature_names_out())

    @property
    def idf(self) -> np.ndarray:
        return np.asarray(self._vectorizer.idf_, dtype=np.float64)

    def __len__(self) -> int:
        return len(self._vectorizer.vocabulary_)

    def idf_of(self, term: str) -> float:
        column = self._vectorizer.vocabulary_.get(term)
        if column is None:
            raise KeyError(term)
        return float(self._vectorizer.idf_[column])

    def transform(self, documents: Sequence[Sequence[str]]) -> sparse.csr_matrix:
        """one row per document; unknown tokens are ignored."""
        return sparse.csr_matrix(
            self._vectorizer.transform([list(tokens) for tokens in documents])
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": FORMAT,
            "min_df": self.min_df,
            "sublinear_tf": self.sublinear_tf,
            "normalize": self.normalize,
            "terms": self.terms,
            "idf": [float(value) for value in self.idf],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TfidfModel":
        if data.get("format") != FORMAT:
            raise ValidationError(f"unsupported tf-idf format {data.get('format')!r}")
        terms = list(data["terms"])
        idf = np.asarray(data["idf"], dtype=np.float64)
        if len(terms) != len(idf):
            raise ValidationError(
                f"tf-idf model has {len(terms)} terms but {len(idf)} idf values"
            )
        min_df = int(data["min_df"])
        sublinear_tf = bool(data["sublinear_tf"])
        normalize = bool(data["normalize"])
        vectorizer = _vectorizer(
            min_df,
            sublinear_tf,
            normalize,
            vocabulary={term: i for i, term in enumerate(terms)},
        )
        vectorizer.idf_ = idf
        return cls(vectorizer, min_df, sublinear_tf, normalize)


def fit_tfidf(
    corpus: Sequence[Sequence[str]],
    min_df: int = 1,
    sublinear_tf: bool = False,
    normalize: bool = True,
) -> TfidfModel:
    """idf(t) = ln((1 + N) / (1 + df(t))) + 1 over terms with df >= min_df."""
    if not corpus:
        raise TrainingError("cannot fit tf-idf on an empty corpus")
    vectorizer = _vectorizer(min_df, sublinear_tf, normalize)
    try:
        vectorizer.fit([list(tokens) for tokens in corpus])
    except ValueError as e:
        # scikit-learn reports an empty or fully pruned vocabulary this way
        raise TrainingError(f"tf-idf vocabulary is empty: {e}") from e
    logger.debug(
        "tf-idf vocabulary: %d terms from %d documents",
        len(vectorizer.vocabulary_),
        len(corpus),
    )
    return TfidfModel(vectorizer, min_df, sublinear_tf, normalize)


def transform_tfidf(model: TfidfModel, tokens: Sequence[str]) -> sparse.csr_matrix:
    """1 x |V| row for one document."""
    return model.transform([tokens])
