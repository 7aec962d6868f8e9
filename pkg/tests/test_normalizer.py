import random
import string

import pytest

from offensive_classifier.core.errors import ValidationError
from offensive_classifier.text.normalizer import (
    USER_TOKEN,
    LeetMap,
    VariantDictionary,
    fold_obfuscation,
    map_leetspeak,
    normalize_text,
    squeeze_elongation,
    strip_diacritics,
    tokenize,
    unnormalized_document,
)


@pytest.mark.parametrize(
    "variant, canonical",
    [
        ("fvck", "fuck"),
        ("fok", "fuck"),
        ("fucc", "fuck"),
        ("phuk", "fuck"),
        ("n1gga", "nigger"),
        ("n1gr", "nigger"),
        ("niigr", "nigger"),
        ("nuggah", "nigger"),
        ("nigg3r", "nigger"),
        ("booob", "boob"),
        ("booooooob", "boob"),
        ("a55", "ass"),
        ("455", "ass"),
        ("åşşćĺσẇη", "assclown"),
        ("Mutha Fukker", "motherfucker"),
    ],
)
def test_obfuscated_variants_map_to_canonical_words(variant, canonical):
    assert normalize_text(variant).tokens == (canonical,)


def test_mentions_become_user_placeholder():
    doc = normalize_text("@bob you fvck")
    assert doc.tokens == (USER_TOKEN, "you", "fuck")
    assert doc.trace[0].rule == "mention"
    assert doc.trace[0].before == "@bob"


def test_email_addresses_are_not_mentions():
    assert USER_TOKEN not in normalize_text("mail me at me@example.org").tokens


def test_urls_are_dropped():
    assert normalize_text("look https://t.co/abc now").tokens == ("look", "now")


def test_punctuation_is_split_from_words():
    assert normalize_text("dumb!").tokens == ("dumb", "!")


def test_trailing_leet_symbols_stay_punctuation():
    assert map_leetspeak("sh1t!", LeetMap({"1": "i", "!": "i"})) == "shit!"


def test_digit_only_tokens_are_not_leet_mapped():
    assert map_leetspeak("2019", LeetMap({"1": "i", "0": "o"})) == "2019"


def test_elongation_keeps_two_characters():
    assert squeeze_elongation("soooo") == "soo"
    assert squeeze_elongation("NOoOo") == "NOo"


def test_diacritics_and_confusables_are_stripped():
    assert strip_diacritics("ćαfé") == "cafe"


def test_fold_is_idempotent():
    for token in ("f4ggg0t", "ÅŞŞ", "biiitch", "phuk"):
        once = fold_obfuscation(token)
        assert fold_obfuscation(once) == once


def test_fold_keeps_clean_lowercase_words():
    rng = random.Random(3)
    checked = 0
    while checked < 500:
        word = "".join(
            rng.choice(string.ascii_lowercase) for _ in range(rng.randint(1, 12))
        )
        if any(word[i] == word[i + 1] == word[i + 2] for i in range(len(word) - 2)):
            continue
        assert fold_obfuscation(word) == word
        checked += 1


def test_normalization_is_idempotent():
    text = "@amy U R such a B1TCH!!! go to hellll https://x.y"
    once = normalize_text(text).normalized
    assert normalize_text(once).normalized == once


def test_normalization_never_fails_on_odd_input():
    for text in ("", "   ", "!!!", "​", "@", "🙂🙂🙂"):
        doc = normalize_text(text)
        assert doc.original == text


def test_chained_variants_are_rejected():
    with pytest.raises(ValidationError):
        VariantDictionary([("fvck", "fuk"), ("fuk", "fuck")])


def test_conflicting_variants_are_rejected():
    with pytest.raises(ValidationError):
        VariantDictionary([("fvck", "fuck"), ("fvck", "folk")])


def test_redundant_variants_are_dropped():
    dictionary = VariantDictionary([("booob", "boob"), ("fvck", "fuck")])
    assert len(dictionary) == 1
    assert dictionary.records() == [["fvck", "fuck"]]


def test_leet_map_rejects_multi_character_keys():
    with pytest.raises(ValidationError):
        LeetMap({"ph": "f"})


def test_unnormalized_document_only_splits_whitespace():
    doc = unnormalized_document("  Fvck   THIS!! ")
    assert doc.tokens == ("Fvck", "THIS!!")
    assert doc.trace == ()


def test_tokenize_splits_on_single_spaces():
    assert tokenize("") == []
    assert tokenize("<USER> is dumb") == ["<USER>", "is", "dumb"]
    assert tokenize(normalize_text("@john http://x.y lol").normalized) == [
        USER_TOKEN, "lol"
    ]


def test_multi_token_variants_keep_outer_punctuation():
    assert normalize_text("(mutha fukker!)").tokens == ("(", "motherfucker", "!)")


def test_multi_token_variants_do_not_span_punctuation():
    assert normalize_text("mutha, fukker").tokens == ("mutha", ",", "fukker")
