import pydantic
import pytest

from offensive_classifier.core.config import ModelKind, RunConfig
from offensive_classifier.core.pipeline import load_resources
from offensive_classifier.data.documents import Task
from offensive_classifier.data.sampling import SamplingMode
from offensive_classifier.data.splitting import stratified_split
from offensive_classifier.data.synthetic import SyntheticConfig, generate_corpus
from offensive_classifier.evaluation import ablation
from offensive_classifier.evaluation.ablation import (
    AblationCell,
    AblationGrid,
    grid_cells,
    matrix_tsv,
    run_ablation,
)


def synthetic_setup(tmp_path, documents, **overrides):
    corpus = generate_corpus(SyntheticConfig(documents=documents, seed=11))
    lexicon = tmp_path / "lexicon.tsv"
    lexicon.write_text(corpus.lexicon_tsv(), encoding="utf-8")
    config = RunConfig(lexicon_path=lexicon, **{"forest_trees": 15, **overrides})
    split = stratified_split(corpus.documents, Task.OFFENSE, seed=config.seed)
    return config, split, load_resources(config)


def scores(report):
    return {(cell.variant, cell.normalize): cell.macro_f1 for cell in report.cells}


def test_grid_is_the_cartesian_product():
    grid = AblationGrid(
        models=[ModelKind.FOREST, ModelKind.SVM],
        variants=["", "+F"],
        sampling=[SamplingMode.BALANCED],
    )
    cells = grid_cells(grid)
    assert len(cells) == 2 * 2 * 1 * 2
    assert {cell.label for cell in cells} == {"RF", "RF+F", "SVM", "SVM+F"}


def test_unknown_variant_is_rejected():
    with pytest.raises(pydantic.ValidationError):
        AblationGrid(variants=["+X"])


def test_cell_config_switches_blocks_together():
    cell = AblationCell(ModelKind.LOGREG, "+F", SamplingMode.FULL, False, 3)
    config = cell.run_config(RunConfig(jobs=4))
    assert (
        config.model, config.sampling, config.normalize, config.seed, config.jobs
    ) == (
        ModelKind.LOGREG,
        SamplingMode.FULL,
        False,
        3,
        1,
    )
    assert config.use_graphemic and config.use_lexicon and config.use_charlm
    assert cell.regime("6-A") == "6-A FULL RAW"


def test_features_and_normalization_both_help(tmp_path):
    config, split, resources = synthetic_setup(tmp_path, 1000)
    grid = AblationGrid(variants=["", "+F"], normalize=[True, False])
    report = run_ablation(grid, split, config, resources)
    assert not report.partial
    f1 = scores(report)
    assert f1[("+F", True)] > f1[("", True)]
    assert f1[("+F", True)] > f1[("+F", False)]

    deltas = {delta["label"]: delta["delta"] for delta in report.normalization_deltas()}
    assert deltas["RF+F"] == pytest.approx(f1[("+F", True)] - f1[("+F", False)])
    assert matrix_tsv(report).splitlines()[0] == "model\t6-A\t6-A RAW"


def test_failing_cell_is_recorded(tmp_path, monkeypatch):
    config, split, resources = synthetic_setup(tmp_path, 200)
    real = ablation.train_text_classifier

    def fail_for_svm(documents, run_config, cell_resources):
        if run_config.model is ModelKind.SVM:
            raise RuntimeError("boom")
        return real(documents, run_config, cell_resources)

    monkeypatch.setattr(ablation, "train_text_classifier", fail_for_svm)
    grid = AblationGrid(
        models=[ModelKind.FOREST, ModelKind.SVM], variants=[""], normalize=[True]
    )
    report = run_ablation(grid, split, config, resources)
    assert report.partial
    errors = {cell.label: cell.error for cell in report.cells}
    assert errors == {"RF": None, "SVM": "RuntimeError: boom"}
    assert "ERR" in matrix_tsv(report)


def test_ablation_is_deterministic(tmp_path):
    config, split, resources = synthetic_setup(tmp_path, 300)
    grid = AblationGrid(variants=["+F"], normalize=[True])
    first = run_ablation(grid, split, config, resources)
    second = run_ablation(grid, split, config, resources, jobs=2)
    assert first.as_dict() == second.as_dict()


def test_feature_and_normalization_margins_on_5000_documents(tmp_path):
    config, split, resources = synthetic_setup(tmp_path, 5000, forest_trees=50)
    grid = AblationGrid(variants=["", "+F"], normalize=[True, False])
    report = run_ablation(grid, split, config, resources, jobs=4)
    assert not report.partial
    f1 = scores(report)
    assert f1[("+F", True)] - f1[("", True)] >= 0.05
    assert f1[("+F", True)] - f1[("+F", False)] >= 0.05


@pytest.mark.slow
def test_full_grid_on_a_larger_corpus(tmp_path):
    config, split, resources = synthetic_setup(tmp_path, 5000, forest_trees=50)
    report = run_ablation(AblationGrid(), split, config, resources, jobs=4)
    assert not report.partial
    f1 = scores(report)
    assert f1[("+U+F", True)] > f1[("+U", True)]
    assert all(
        delta["delta"] > 0
        for delta in report.normalization_deltas()
        if "+F" in delta["label"]
    )
