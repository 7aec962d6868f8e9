"""concatenate the base vector with the enabled feature blocks.

block order is fixed: base | graphemic | lexicon tiers | perplexity gap.
"""

from typing import Optional, Sequence, Tuple

from ..core.config import FeatureConfig
from ..core.errors import ValidationError
from ..text.charlm import CharGramLM, perplexity_gap
from ..text.lexicon import Lexicon, match_counts
from ..text.normalizer import USER_TOKEN, NormalizedDocument
from .graphemic import EMPTY_VECTOR, GRAPHEMIC_NAMES, FeatureVector, graphemic_features

LEXICON_NAMES: Tuple[str, ...] = (
    "lexicon_offensive", "lexicon_contextual", "lexicon_total"
)
PERPLEXITY_NAMES: Tuple[str, ...] = ("perplexity_gap_mean", "perplexity_gap_max")


def feature_names(
    config: FeatureConfig, base_names: Sequence[str] = ()
) -> Tuple[str, ...]:
    """column names for a config; they never depend on the text."""
    names = tuple(base_names)
    if config.use_graphemic:
        names += GRAPHEMIC_NAMES
    if config.use_lexicon:
        names += LEXICON_NAMES
    if config.use_charlm:
        names += PERPLEXITY_NAMES
    return names


def scored_tokens(document: NormalizedDocument) -> Tuple[str, ...]:
    """tokens the char LMs see: alphabetic words, without the user placeholder."""
    return tuple(
        token
        for token in document.tokens
        if token != USER_TOKEN and any(c.isalpha() for c in token)
    )


def assemble_features(
    document: NormalizedDocument,
    lexicon: Optional[Lexicon],
    lm_off: Optional[CharGramLM],
    lm_clean: Optional[CharGramLM],
    base_vector: FeatureVector = EMPTY_VECTOR,
    config: Optional[FeatureConfig] = None,
) -> FeatureVector:
    config = config or FeatureConfig()
    vector = base_vector
    if config.use_graphemic:
        vector = vector.concat(graphemic_features(document.original, document))
    if config.use_lexicon:
        if lexicon is None:
            raise ValidationError(
                "lexicon features are enabled but no lexicon was given"
            )
        counts = match_counts(document.tokens, lexicon)
        vector = vector.concat(
            FeatureVector(
                LEXICON_NAMES,
                (
                    float(counts.offensive_count),
                    float(counts.contextual_count),
                    float(counts.total),
                ),
            )
        )
    if config.use_charlm:
        if lm_off is None or lm_clean is None:
            raise ValidationError(
                "perplexity features are enabled but the character models are missing"
            )
        gap = perplexity_gap(lm_off, lm_clean, scored_tokens(document))
        vector = vector.concat(FeatureVector(PERPLEXITY_NAMES, (gap.mean, gap.max)))
    return vector


class FeatureAssembler:
    """assemble_features with a fixed schema for the appended blocks.

    the first document sets the names of the graphemic, lexicon and perplexity
    columns; later documents must produce the same ones. the base vector is the
    caller's and passes through unchecked.
    """

    def __init__(
        self,
        lexicon: Optional[Lexicon],
        lm_off: Optional[CharGramLM],
        lm_clean: Optional[CharGramLM],
        config: FeatureConfig,
    ):
        self.lexicon = lexicon
        self.lm_off = lm_off
        self.lm_clean = lm_clean
        self.config = config
        self.names: Optional[Tuple[str, ...]] = None

    def __call__(
        self, document: NormalizedDocument, base_vector: FeatureVector = EMPTY_VECTOR
    ) -> FeatureVector:
        extra = assemble_features(
            document,
            self.lexicon,
            self.lm_off,
            self.lm_clean,
            EMPTY_VECTOR,
            self.config,
        )
        if self.names is None:
            self.names = extra.names
        elif extra.names != self.names:
            raise ValidationError(
                f"feature dimension drift: expected {len(self.names)} columns, "
                f"got {len(extra)}"
            )
        return base_vector.concat(extra)
