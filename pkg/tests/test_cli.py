import json

import pytest
from click.testing import CliRunner

from offensive_classifier import __version__
from offensive_classifier.cli.main import LOCK_FILE, cli, run_cli
from offensive_classifier.parsers.corpus_parser import read_predictions

BUNDLE_FILES = ("model.json", "pipeline.json", "report.json", "effective_config.json")


@pytest.fixture
def runner():
    return CliRunner()


def train_bundle(olid_file, run_config_file, out, *extra):
    code = run_cli(
        [
            "train",
            "--data",
            str(olid_file),
            "--out",
            str(out),
            "--config",
            str(run_config_file),
            *extra,
        ]
    )
    assert code == 0
    return out


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_train_predict_eval(olid_file, texts_file, run_config_file, tmp_path):
    bundle = train_bundle(olid_file, run_config_file, tmp_path / "bundle")
    for name in BUNDLE_FILES:
        assert (bundle / name).exists()
    assert not (bundle / LOCK_FILE).exists()
    effective = json.loads((bundle / "effective_config.json").read_text())
    assert effective["forest_trees"] == 15

    predictions = tmp_path / "pred.tsv"
    assert run_cli(
        [
            "predict",
            "--model",
            str(bundle),
            "--in",
            str(texts_file),
            "--out",
            str(predictions),
        ]
    ) == 0
    classes, rows = read_predictions(predictions)
    assert classes == ["NOT", "OFF"]
    assert [row[0] for row in rows] == [f"r{i:04d}" for i in range(20)]
    assert all(abs(sum(row[2]) - 1.0) < 1e-9 for row in rows)

    assert run_cli(
        [
            "eval",
            "--data",
            str(olid_file),
            "--model",
            str(bundle),
            "--out",
            str(tmp_path / "eval"),
        ]
    ) == 0
    report = json.loads((tmp_path / "eval" / "eval.json").read_text())
    assert report["macro_f1"] >= 0.95
    assert (tmp_path / "eval" / "eval.tsv").exists()


def test_eval_from_a_prediction_file(olid_file, run_config_file, tmp_path, runner):
    bundle = train_bundle(olid_file, run_config_file, tmp_path / "bundle")
    predictions = tmp_path / "pred.tsv"
    assert run_cli(
        [
            "predict",
            "--model",
            str(bundle),
            "--in",
            str(olid_file),
            "--out",
            str(predictions),
        ]
    ) == 0

    result = runner.invoke(
        cli, ["eval", "--data", str(olid_file), "--predictions", str(predictions)]
    )
    assert result.exit_code == 0
    assert "macro F1 = " in result.output


def test_predict_writes_to_stdout(
    olid_file, texts_file, run_config_file, tmp_path, runner
):
    bundle = train_bundle(olid_file, run_config_file, tmp_path / "bundle")
    result = runner.invoke(
        cli, ["predict", "--model", str(bundle), "--in", str(texts_file)]
    )
    assert result.exit_code == 0
    assert result.output.startswith("id\tlabel\tNOT\tOFF\n")
    assert len(result.output.splitlines()) == 21


@pytest.mark.parametrize("model", ["forest", "svm", "logreg"])
def test_runs_are_identical_across_worker_counts(
    olid_file, run_config_file, tmp_path, model
):
    first = train_bundle(
        olid_file, run_config_file, tmp_path / "one", "--model", model, "--jobs", "1"
    )
    second = train_bundle(
        olid_file, run_config_file, tmp_path / "eight", "--model", model, "--jobs", "8"
    )
    for name in BUNDLE_FILES:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_set_reaches_every_config_key(olid_file, run_config_file, tmp_path):
    settings = [
        "forest_trees=7",
        "svm_lambda=0.001",
        "max_ratio=1.5",
        "tfidf_min_df=2",
        "seed=3",
    ]
    args = [arg for setting in settings for arg in ("--set", setting)]
    bundle = train_bundle(
        olid_file, run_config_file, tmp_path / "bundle", *args, "--seed", "9"
    )
    effective = json.loads((bundle / "effective_config.json").read_text())
    assert (
        effective["forest_trees"], effective["svm_lambda"], effective["max_ratio"]
    ) == (7, 0.001, 1.5)
    assert effective["tfidf_min_df"] == 2
    assert effective["seed"] == 9
    assert len(
        json.loads((bundle / "model.json").read_text())["parameters"]["trees"]
    ) == 7


@pytest.mark.parametrize(
    "setting", ["forest_tress=3", "forest_trees", "=3", "forest_trees=many"]
)
def test_bad_set_exits_with_one(olid_file, tmp_path, setting):
    args = [
        "train",
        "--data",
        str(olid_file),
        "--out",
        str(tmp_path / "m"),
        "--set",
        setting,
    ]
    assert run_cli(args) == 1
    assert not (tmp_path / "m" / "model.json").exists()


def test_predict_with_a_missing_model(texts_file, tmp_path):
    output = tmp_path / "pred.tsv"
    code = run_cli(
        [
            "predict",
            "--model",
            str(tmp_path / "absent"),
            "--in",
            str(texts_file),
            "--out",
            str(output),
        ]
    )
    assert code == 1
    assert not output.exists()


def test_usage_errors_exit_with_one(tmp_path):
    assert run_cli(["frobnicate"]) == 1
    assert run_cli(["train", "--model", "tree"]) == 1


def test_invalid_config_exits_with_one(olid_file, tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("forest_trees=-3\n", encoding="utf-8")
    assert run_cli(
        [
            "train",
            "--data",
            str(olid_file),
            "--config",
            str(config),
            "--out",
            str(tmp_path / "m"),
        ]
    ) == 1


def test_locked_output_directory(olid_file, run_config_file, tmp_path):
    out = tmp_path / "bundle"
    out.mkdir()
    (out / LOCK_FILE).write_text("", encoding="utf-8")
    code = run_cli(
        [
            "train",
            "--data",
            str(olid_file),
            "--out",
            str(out),
            "--config",
            str(run_config_file),
        ]
    )
    assert code == 1
    assert not (out / "model.json").exists()
    assert (out / LOCK_FILE).exists()


def test_kappa(tmp_path, runner):
    ratings = tmp_path / "ratings.tsv"
    ratings.write_text("item\tOFF\tNOT\n1\t2\t0\n2\t1\t1\n", encoding="utf-8")
    result = runner.invoke(cli, ["kappa", "--ratings", str(ratings)])
    assert result.exit_code == 0
    assert "κ = -0.333333" in result.output

    labels = tmp_path / "labels.tsv"
    labels.write_text("1\tOFF\tOFF\n2\tNOT\tNOT\n3\tOFF\tOFF\n", encoding="utf-8")
    result = runner.invoke(cli, ["kappa", "--ratings", str(labels), "--mode", "cohen"])
    assert result.exit_code == 0
    assert "κ = 1.000000" in result.output


def test_corpus_stats(olid_file, tmp_path, runner):
    output = tmp_path / "stats.tsv"
    result = runner.invoke(cli, ["corpus-stats", str(olid_file), "--out", str(output)])
    assert result.exit_code == 0
    assert "olid\t100\t100\t200" in output.read_text().splitlines()


def test_ensemble_members_and_saved_spec(
    olid_file, texts_file, run_config_file, tmp_path
):
    forest = train_bundle(olid_file, run_config_file, tmp_path / "forest")
    logreg = train_bundle(
        olid_file, run_config_file, tmp_path / "logreg", "--model", "logreg"
    )
    spec = tmp_path / "ensemble.json"
    direct = tmp_path / "direct.tsv"
    args = [
        "ensemble",
        "--member",
        str(forest),
        "--member",
        str(logreg),
        "--weight",
        "2",
        "--weight",
        "1",
    ]
    assert run_cli(
        [*args, "--save-spec", str(spec), "--in", str(texts_file), "--out", str(direct)]
    ) == 0
    assert json.loads(spec.read_text())["members"][0] == {
        "model": "forest", "weight": 2.0
    }

    from_spec = tmp_path / "from_spec.tsv"
    assert run_cli(
        [
            "ensemble",
            "--spec",
            str(spec),
            "--in",
            str(texts_file),
            "--out",
            str(from_spec),
        ]
    ) == 0
    assert from_spec.read_text() == direct.read_text()


def test_ensemble_weight_count_must_match(olid_file, run_config_file, tmp_path):
    forest = train_bundle(olid_file, run_config_file, tmp_path / "forest")
    assert run_cli(
        ["ensemble", "--member", str(forest), "--weight", "1", "--weight", "2"]
    ) == 1


def test_embed(texts_file, tmp_path, runner):
    output = tmp_path / "vectors.vec"
    args = [
        "embed",
        "--data",
        str(texts_file),
        "--out",
        str(output),
        "--dim",
        "8",
        "--epochs",
        "1",
    ]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    assert output.read_text().splitlines()[0].split()[1] == "8"
    assert "OOV rate" in result.output


def test_ablate_synthetic(run_config_file, tmp_path, runner):
    out = tmp_path / "ablation"
    args = [
        "ablate",
        "--synthetic",
        "200",
        "--out",
        str(out),
        "--variants",
        "+F",
        "--normalization",
        "on",
    ]
    result = runner.invoke(cli, [*args, "--config", str(run_config_file)])
    assert result.exit_code == 0, result.output
    for name in (
        "corpus.tsv",
        "lexicon.tsv",
        "ablation.tsv",
        "ablation.json",
        "effective_config.json",
    ):
        assert (out / name).exists()
    report = json.loads((out / "ablation.json").read_text())
    assert [cell["label"] for cell in report["cells"]] == ["RF+F"]
    assert report["partial"] is False


def test_check(runner):
    result = runner.invoke(cli, ["check"])
    assert result.exit_code == 0
    assert "lexicon" in result.output


def test_ablate_records_how_embeddings_were_built(run_config_file, tmp_path, runner):
    out = tmp_path / "ablation"
    args = [
        "ablate",
        "--synthetic",
        "120",
        "--out",
        str(out),
        "--variants",
        "+U",
        "--normalization",
        "on",
    ]
    result = runner.invoke(
        cli,
        [
            *args,
            "--dim",
            "8",
            "--set",
            "skipgram_epochs=1",
            "--config",
            str(run_config_file),
        ],
    )
    assert result.exit_code == 0, result.output
    effective = json.loads((out / "effective_config.json").read_text())
    assert (effective["skipgram_dim"], effective["skipgram_epochs"]) == (8, 1)
    report = json.loads((out / "ablation.json").read_text())
    assert report["embedding"]["source"] == "corpus skip-gram"
    assert report["embedding"]["skipgram"]["dim"] == 8
    assert report["embedding"]["skipgram"]["epochs"] == 1
    assert [cell["base"] for cell in report["cells"]] == ["embedding"]
