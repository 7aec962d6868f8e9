from dataclasses import replace

import numpy as np
import pytest

from offensive_classifier.core.classifier import TextClassifier, train_text_classifier
from offensive_classifier.core.config import (
    BaseVectorization,
    FeatureConfig,
    ModelKind,
    RunConfig,
)
from offensive_classifier.core.errors import ConfigError, TrainingError, ValidationError
from offensive_classifier.core.pipeline import FeaturePipeline
from offensive_classifier.data.documents import Task
from offensive_classifier.features.embeddings import (
    EmbeddingMatrix,
    read_embedding,
    write_embedding,
)
from offensive_classifier.text.normalizer import normalize_text

from .conftest import separable_documents, separable_rows

HELD_OUT = [
    ("@someone you are a moron and so is your library!!", "OFF"),
    ("what a calm garden we had today", "NOT"),
    ("@pal you are a scumbag and so is your picnic!!", "OFF"),
    ("what a bright weekend we had today", "NOT"),
]


@pytest.fixture
def trained(fast_config, default_resources):
    return train_text_classifier(
        separable_documents(200), fast_config, default_resources
    )


@pytest.mark.parametrize("model", list(ModelKind))
def test_every_model_separates_the_fixture(model, fast_config, default_resources):
    config = fast_config.model_copy(update={"model": model})
    classifier, report = train_text_classifier(
        separable_documents(200), config, default_resources
    )
    assert classifier.predict([text for text, _ in HELD_OUT]) == [
        label for _, label in HELD_OUT
    ]
    assert report["model"] == model.value


def test_training_report(trained):
    _, report = trained
    assert report["classes"] == ["NOT", "OFF"]
    assert report["class_counts"] == {"NOT": 100, "OFF": 100}
    assert report["training_counts"] == {"NOT": 100, "OFF": 100}
    assert report["sampling"]["mode"] == "balanced"


def test_probabilities_are_distributions(trained):
    classifier, _ = trained
    probabilities = classifier.predict_proba(
        [text for _, text, _ in separable_rows(30)]
    )
    assert probabilities.shape == (30, 2)
    np.testing.assert_allclose(probabilities.sum(axis=1), 1.0)


def test_saved_bundle_predicts_the_same(trained, tmp_path):
    classifier, report = trained
    classifier.save(tmp_path / "bundle", report)
    loaded = TextClassifier.load(tmp_path / "bundle")
    texts = [text for _, text, _ in separable_rows(40)]
    np.testing.assert_array_equal(
        loaded.predict_proba(texts), classifier.predict_proba(texts)
    )
    assert loaded.pipeline.names == classifier.pipeline.names
    assert (tmp_path / "bundle" / "report.json").exists()


def test_loading_a_directory_without_a_bundle(tmp_path):
    with pytest.raises(ValidationError):
        TextClassifier.load(tmp_path)


def test_named_features_match_the_matrix(trained):
    classifier, _ = trained
    text = "@user you are a MORON!!! 2day"
    vector = classifier.pipeline.featurize(text)
    assert vector.names == classifier.pipeline.names
    np.testing.assert_allclose(vector.values, classifier.pipeline.transform([text])[0])
    named = dict(zip(vector.names, vector.values))
    assert named["lexicon_offensive"] == 1.0


def test_featurize_and_transform_share_one_schema(trained):
    classifier, _ = trained
    pipeline = classifier.pipeline
    texts = ["@user you are a moron", "a quiet garden", "idiot!!!"]
    matrix = pipeline.transform(texts)
    for row, text in zip(matrix, texts):
        np.testing.assert_allclose(pipeline.featurize(text).values, row)
    np.testing.assert_array_equal(pipeline.transform(texts), matrix)


def test_unfitted_pipeline_refuses_to_transform(default_resources):
    pipeline = FeaturePipeline.from_resources(FeatureConfig(), default_resources)
    with pytest.raises(ValidationError):
        pipeline.transform(["text"])


def test_raw_pipeline_skips_normalization(default_resources):
    pipeline = FeaturePipeline.from_resources(
        FeatureConfig(), default_resources, normalize=False
    )
    assert pipeline.document("@bob SOOO  gr8").tokens == ("@bob", "SOOO", "gr8")


def test_features_only_pipeline(fast_config, default_resources):
    config = fast_config.model_copy(update={"base": BaseVectorization.NONE})
    classifier, report = train_text_classifier(
        separable_documents(100), config, default_resources
    )
    assert not any(name.startswith("tfidf:") for name in classifier.pipeline.names)
    assert report["n_features"] == len(classifier.pipeline.names)


def test_embedding_base_travels_with_the_bundle(
    fast_config, default_resources, tmp_path
):
    vocabulary = sorted(
        {
            token
            for _, text, _ in separable_rows(40)
            for token in normalize_text(text).tokens
        }
    )
    vectors = np.random.default_rng(0).normal(size=(len(vocabulary), 8))
    path = tmp_path / "vectors.vec"
    write_embedding(EmbeddingMatrix(vocabulary, vectors), path)

    config = RunConfig(forest_trees=15, base="embedding", embedding_path=path)
    resources = replace(default_resources, embedding=read_embedding(path))
    classifier, _ = train_text_classifier(separable_documents(200), config, resources)
    assert "embedding_7" in classifier.pipeline.names

    classifier.save(tmp_path / "bundle")
    assert (tmp_path / "bundle" / "embedding.vec").exists()
    loaded = TextClassifier.load(tmp_path / "bundle")
    texts = [text for text, _ in HELD_OUT]
    np.testing.assert_array_equal(
        loaded.predict_proba(texts), classifier.predict_proba(texts)
    )


def test_embedding_base_without_vectors(default_resources):
    with pytest.raises(ConfigError):
        FeaturePipeline.from_resources(
            FeatureConfig(base="embedding"), default_resources
        )


def test_no_labeled_documents(fast_config, default_resources):
    config = fast_config.model_copy(update={"task": Task.TARGET})
    with pytest.raises(TrainingError, match="no documents"):
        train_text_classifier(separable_documents(20), config, default_resources)
