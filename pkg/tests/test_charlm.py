import math

import pytest

from offensive_classifier.core.errors import TrainingError, ValidationError
from offensive_classifier.text.charlm import (
    CharGramLM,
    perplexity,
    perplexity_gap,
    train_char_lm,
)


def test_deterministic_corpus_has_perplexity_one():
    lm = train_char_lm(["abcd"], order=6, alpha=1e-12)
    assert perplexity(lm, "abcd") == pytest.approx(1.0, abs=1e-9)


def test_probabilities_sum_to_one_over_the_alphabet():
    lm = train_char_lm(["abba", "baab", "aab"], order=3, alpha=0.5)
    for context in ("\x02\x02", "ab", "zz"):
        assert math.fsum(
            lm.probability(context, char) for char in lm.alphabet
        ) == pytest.approx(1.0)


def test_unseen_characters_get_zero_count_mass():
    lm = train_char_lm(["abab"], order=2, alpha=0.1)
    # "a" is followed by "b" twice; the alphabet is {a, b, end}
    expected = 0.1 / (2 + 0.1 * 3)
    transitions = lm.transitions("az")
    assert transitions[1] == ("a", "\x00")
    assert lm.probability(*transitions[1]) == pytest.approx(expected)


def test_gap_is_antisymmetric():
    first = train_char_lm(["shit", "bitch", "idiot"], order=3)
    second = train_char_lm(["house", "garden", "window"], order=3)
    tokens = ["shiit", "gardn", "xyz"]
    forward = perplexity_gap(first, second, tokens)
    backward = perplexity_gap(second, first, tokens)
    assert forward.per_token == tuple(-gap for gap in backward.per_token)


def test_empty_token_list_gives_zero_gap():
    lm = train_char_lm(["abc"])
    gap = perplexity_gap(lm, lm, [])
    assert (gap.mean, gap.max, gap.per_token) == (0.0, 0.0, ())


@pytest.mark.parametrize("shift", range(10))
def test_in_domain_words_score_lower_under_their_own_model(shift):
    own_letters = "abcdefghij"[shift:] + "abcdefghij"[:shift]
    own = [own_letters[i : i + 4] for i in range(0, 7)]
    other = ["qrstu", "rstuv", "stuvw", "tuvwx", "uvwxy"]
    lm_own = train_char_lm(own, order=3)
    lm_other = train_char_lm(other, order=3)
    for word in own:
        assert perplexity(lm_own, word) < perplexity(lm_other, word)


def test_repeated_training_words_do_not_change_the_model():
    once = train_char_lm(["fuck", "shit"])
    twice = train_char_lm(["fuck", "shit", "fuck", "shit"])
    assert once.to_dict() == twice.to_dict()


def test_gap_orders_must_match():
    with pytest.raises(ValidationError):
        perplexity_gap(
            train_char_lm(["ab"], order=2), train_char_lm(["ab"], order=3), ["ab"]
        )


def test_empty_training_list_is_rejected():
    with pytest.raises(TrainingError):
        train_char_lm([])


def test_serialized_model_scores_the_same():
    lm = train_char_lm(["bastard", "moron", "idiot"], order=4, alpha=0.2)
    restored = CharGramLM.from_dict(lm.to_dict())
    assert perplexity(restored, "m0ron") == perplexity(lm, "m0ron")
