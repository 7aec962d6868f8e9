"""shared fixtures: small corpora, resources and run configurations."""

from pathlib import Path
from typing import List, Tuple

import pytest

from offensive_classifier.core.config import RunConfig
from offensive_classifier.core.pipeline import FeatureResources, load_resources
from offensive_classifier.data.documents import LabeledDocument
from offensive_classifier.parsers.corpus_parser import serialize_olid

INSULTS = ("idiot", "moron", "stupid", "bastard", "scumbag", "dumbass", "asshole")
NICE = ("lovely", "sunny", "quiet", "pleasant", "friendly", "calm", "bright")
THINGS = ("morning", "garden", "street", "weekend", "concert", "library", "picnic")


def separable_rows(count: int) -> List[Tuple[str, str, str]]:
    """(id, text, label) rows: offensive rows carry an insult, clean rows never do."""
    rows = []
    for index in range(count):
        thing = THINGS[index % len(THINGS)]
        if index % 2:
            insult = INSULTS[index % len(INSULTS)]
            rows.append(
                (
                    f"r{index:04d}",
                    f"@user{index} you are a {insult} and so is your {thing}!!",
                    "OFF",
                )
            )
        else:
            nice = NICE[index % len(NICE)]
            rows.append((f"r{index:04d}", f"what a {nice} {thing} we had today", "NOT"))
    return rows


def separable_documents(count: int) -> List[LabeledDocument]:
    return [
        LabeledDocument(id=doc_id, raw_text=text, label_a=label, source="fixture")
        for doc_id, text, label in separable_rows(count)
    ]


@pytest.fixture
def olid_file(tmp_path: Path) -> Path:
    path = tmp_path / "olid.tsv"
    path.write_text(serialize_olid(separable_documents(200)), encoding="utf-8")
    return path


@pytest.fixture
def texts_file(tmp_path: Path) -> Path:
    path = tmp_path / "texts.tsv"
    lines = ["id\ttext"] + [
        f"{doc_id}\t{text}" for doc_id, text, _ in separable_rows(20)
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def run_config_file(tmp_path: Path) -> Path:
    path = tmp_path / "run.cfg"
    path.write_text("# small forest for tests\nforest_trees=15\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def default_resources() -> FeatureResources:
    return load_resources(RunConfig())


@pytest.fixture
def fast_config() -> RunConfig:
    return RunConfig(forest_trees=15, svm_epochs=5, logreg_max_iter=100)
