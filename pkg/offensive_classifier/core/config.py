"""configuration management for offensive-classifier."""

import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Union

from dotenv import dotenv_values
from pydantic import (
    BaseModel,
    Field,
    ValidationError as PydanticValidationError,
    field_validator,
    model_validator,
)
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..data.documents import Task
from ..data.sampling import SamplingMode
from .errors import ConfigError

logger = logging.getLogger(__name__)


class BaseVectorization(str, Enum):
    """first pipeline step: tf-idf scores, pooled embeddings, both, or nothing."""

    TFIDF = "tfidf"
    EMBEDDING = "embedding"
    BOTH = "both"
    NONE = "none"


class ModelKind(str, Enum):
    FOREST = "forest"
    SVM = "svm"
    LOGREG = "logreg"


class FeatureConfig(BaseModel):
    """which feature blocks are assembled, and how tf-idf / the char LMs are built."""

    base: BaseVectorization = BaseVectorization.TFIDF
    use_graphemic: bool = True
    use_lexicon: bool = True
    use_charlm: bool = True
    tfidf_min_df: int = Field(default=1, ge=1)
    tfidf_sublinear: bool = False
    tfidf_norm: bool = True
    charlm_order: int = Field(default=3, ge=2)
    charlm_alpha: float = Field(default=0.1, gt=0)

    @property
    def uses_tfidf(self) -> bool:
        return self.base in (BaseVectorization.TFIDF, BaseVectorization.BOTH)

    @property
    def uses_embedding(self) -> bool:
        return self.base in (BaseVectorization.EMBEDDING, BaseVectorization.BOTH)

    @property
    def uses_features(self) -> bool:
        return self.use_graphemic or self.use_lexicon or self.use_charlm

    def with_features(self, enabled: bool) -> "FeatureConfig":
        return self.model_copy(
            update={
                "use_graphemic": enabled,
                "use_lexicon": enabled,
                "use_charlm": enabled,
            }
        )


class SkipgramConfig(BaseModel):
    """subword skip-gram with negative sampling."""

    dim: int = Field(default=100, gt=0)
    window: int = Field(default=5, ge=1)
    negative: int = Field(default=5, ge=1)
    epochs: int = Field(default=5, ge=1)
    learning_rate: float = Field(default=0.05, gt=0)
    min_learning_rate: float = Field(default=1e-4, ge=0)
    min_count: int = Field(default=1, ge=1)
    subwords: bool = True
    min_n: int = Field(default=3, ge=1)
    max_n: int = Field(default=6, ge=1)
    buckets: int = Field(default=100_000, ge=1)
    seed: int = 42


class ForestConfig(BaseModel):
    n_trees: int = Field(default=200, ge=1)
    max_depth: Optional[int] = Field(default=None, ge=1)
    min_samples_leaf: int = Field(default=1, ge=1)
    max_features: Union[int, str] = "sqrt"
    bootstrap: bool = True
    seed: int = 42

    @field_validator("max_features")
    @classmethod
    def _check_max_features(cls, value: Union[int, str]) -> Union[int, str]:
        if isinstance(value, str) and value.isdigit():
            value = int(value)
        if isinstance(value, int):
            if value < 1:
                raise ValueError("max_features must be positive")
            return value
        if value not in ("sqrt", "log2", "all"):
            raise ValueError(
                "max_features must be sqrt, log2, all or a positive integer"
            )
        return value


class SvmConfig(BaseModel):
    regularization: float = Field(default=1e-4, gt=0)
    epochs: int = Field(default=20, ge=1)
    calibration_folds: int = Field(default=5, ge=2)
    standardize: bool = True
    seed: int = 42


class LogisticConfig(BaseModel):
    l2: float = Field(default=1e-4, ge=0)
    max_iter: int = Field(default=300, ge=0)
    tol: float = Field(default=1e-6, gt=0)
    standardize: bool = True
    seed: int = 42


# settings that change how a run executes but never what it produces
RUNTIME_FIELDS = ("jobs", "enable_debug_logging", "output_directory")

_PATH_FIELDS = (
    "data_path",
    "lexicon_path",
    "variants_path",
    "leet_path",
    "clean_words_path",
    "offensive_words_path",
    "embedding_path",
)


class RunConfig(BaseSettings):
    """run configuration; flat keys, set from a `key=value` file or OFFCLF_* vars."""

    model_config = SettingsConfigDict(
        env_prefix="OFFCLF_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        protected_namespaces=(),
    )

    # inputs
    task: Task = Field(
        default=Task.OFFENSE, description="target label column: 5-A, 6-A, 6-B or 6-C"
    )
    data_path: Optional[Path] = Field(
        default=None, description="OLID or internal TSV corpus"
    )
    lexicon_path: Optional[Path] = Field(
        default=None, description="tier<TAB>phrase blacklist (packaged seed if unset)"
    )
    variants_path: Optional[Path] = Field(
        default=None, description="variant<TAB>canonical dictionary"
    )
    leet_path: Optional[Path] = Field(
        default=None, description="leetspeak character map"
    )
    clean_words_path: Optional[Path] = Field(
        default=None, description="word list for the clean char LM"
    )
    offensive_words_path: Optional[Path] = Field(
        default=None,
        description="word list for the offensive char LM (lexicon words if unset)",
    )
    embedding_path: Optional[Path] = Field(
        default=None, description="word vectors in `|V| d` text format"
    )
    output_directory: Path = Field(
        default=Path("model"), description="where trained bundles are written"
    )

    # features
    base: BaseVectorization = BaseVectorization.TFIDF
    use_graphemic: bool = True
    use_lexicon: bool = True
    use_charlm: bool = True
    tfidf_min_df: int = Field(default=1, ge=1)
    tfidf_sublinear: bool = False
    tfidf_norm: bool = True
    charlm_order: int = Field(default=3, ge=2)
    charlm_alpha: float = Field(default=0.1, gt=0)
    normalize: bool = True

    # models
    model: ModelKind = ModelKind.FOREST
    forest_trees: int = Field(default=200, ge=1)
    forest_max_depth: Optional[int] = Field(default=None, ge=1)
    forest_min_leaf: int = Field(default=1, ge=1)
    forest_max_features: Union[int, str] = "sqrt"
    svm_lambda: float = Field(default=1e-4, gt=0)
    svm_epochs: int = Field(default=20, ge=1)
    svm_calibration_folds: int = Field(default=5, ge=2)
    logreg_l2: float = Field(default=1e-4, ge=0)
    logreg_max_iter: int = Field(default=300, ge=0)

    # corpus skip-gram, trained for +U ablation cells when no embedding_path is set
    skipgram_dim: int = Field(default=50, gt=0)
    skipgram_epochs: int = Field(default=3, ge=1)
    skipgram_window: int = Field(default=5, ge=1)
    skipgram_negative: int = Field(default=5, ge=1)
    skipgram_min_count: int = Field(default=1, ge=1)
    skipgram_subwords: bool = True

    # sampling and runtime
    sampling: SamplingMode = SamplingMode.BALANCED
    max_ratio: float = Field(default=2.0, gt=0)
    seed: int = 42
    jobs: int = Field(default=1, ge=1)
    enable_debug_logging: bool = False

    @field_validator("task", mode="before")
    @classmethod
    def _parse_task(cls, value: Any) -> Any:
        return value.upper() if isinstance(value, str) else value

    @model_validator(mode="after")
    def _check_references(self) -> "RunConfig":
        for name in _PATH_FIELDS:
            path = getattr(self, name)
            if path is not None and not Path(path).exists():
                raise ValueError(f"{name}: file not found: {path}")
        if self.base is BaseVectorization.NONE and not (
            self.use_graphemic or self.use_lexicon or self.use_charlm
        ):
            raise ValueError(
                "no feature block enabled: set base or turn on a feature block"
            )
        embedded = (BaseVectorization.EMBEDDING, BaseVectorization.BOTH)
        uses_embedding = self.base in embedded
        if uses_embedding and self.embedding_path is None:
            raise ValueError(f"base={self.base.value} needs embedding_path")
        return self

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(
            base=self.base,
            use_graphemic=self.use_graphemic,
            use_lexicon=self.use_lexicon,
            use_charlm=self.use_charlm,
            tfidf_min_df=self.tfidf_min_df,
            tfidf_sublinear=self.tfidf_sublinear,
            tfidf_norm=self.tfidf_norm,
            charlm_order=self.charlm_order,
            charlm_alpha=self.charlm_alpha,
        )

    def forest_config(self) -> ForestConfig:
        return ForestConfig(
            n_trees=self.forest_trees,
            max_depth=self.forest_max_depth,
            min_samples_leaf=self.forest_min_leaf,
            max_features=self.forest_max_features,
            seed=self.seed,
        )

    def svm_config(self) -> SvmConfig:
        return SvmConfig(
            regularization=self.svm_lambda,
            epochs=self.svm_epochs,
            calibration_folds=self.svm_calibration_folds,
            seed=self.seed,
        )

    def logistic_config(self) -> LogisticConfig:
        return LogisticConfig(
            l2=self.logreg_l2, max_iter=self.logreg_max_iter, seed=self.seed
        )

    def skipgram_config(self) -> SkipgramConfig:
        return SkipgramConfig(
            dim=self.skipgram_dim,
            epochs=self.skipgram_epochs,
            window=self.skipgram_window,
            negative=self.skipgram_negative,
            min_count=self.skipgram_min_count,
            subwords=self.skipgram_subwords,
            seed=self.seed,
        )

    def effective(self) -> Dict[str, Any]:
        """json-ready view for provenance files; runtime-only fields are left out."""
        return self.model_dump(mode="json", exclude=set(RUNTIME_FIELDS))


def read_config_file(path: Path) -> Dict[str, str]:
    """flat `key=value` file; `#` comments; keys are case-insensitive."""
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    values = {
        key.strip().lower(): value
        for key, value in dotenv_values(path).items()
        if value not in (None, "")
    }
    unknown = sorted(set(values) - set(RunConfig.model_fields))
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {', '.join(unknown)}")
    return values  # type: ignore[return-value]


def load_run_config(path: Optional[Path] = None, **overrides: Any) -> RunConfig:
    """file values, then CLI overrides (None means "not given") on top."""
    values: Dict[str, Any] = read_config_file(path) if path is not None else {}
    values.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return RunConfig(**values)
    except PydanticValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: "
            f"{error['msg']}"
            for error in e.errors()
        )
        raise ConfigError(f"invalid configuration: {problems}") from e


def get_config() -> RunConfig:
    """get the run configuration from the environment alone."""
    return load_run_config()
