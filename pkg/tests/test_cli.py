import json

import numpy as np
import pytest

from conftest import separated_dataset

from eegemo import dataio
from eegemo.cli import main
from eegemo.config import PipelineConfig, load_config
from eegemo.errors import ConfigError


@pytest.fixture
def feature_csv(tmp_path):
    ds = separated_dataset(8.0, n_per_class=40, n_features=6, seed=3)
    path = tmp_path / "features.csv"
    dataio.write_dataset_csv(ds, path)
    return path


@pytest.fixture
def raw_csv(tmp_path):
    rng = np.random.default_rng(0)
    fs = 150.0
    t = np.arange(int(6 * fs)) / fs
    channels = {
        "TP9": np.sin(2 * np.pi * 10 * t) + 0.1 * rng.normal(size=t.size),
        "AF7": np.sin(2 * np.pi * 20 * t) + 0.1 * rng.normal(size=t.size),
    }
    path = tmp_path / "raw.csv"
    header = ",".join(channels)
    rows = "\n".join(
        ",".join(repr(float(channels[name][i])) for name in channels) for i in range(t.size)
    )
    path.write_text(header + "\n" + rows + "\n")
    return path


def read_kind(path):
    return json.loads(path.read_text())["kind"]


class TestPreprocess:
    def test_writes_timeseries_and_psd(self, raw_csv, tmp_path):
        out = tmp_path / "out"
        code = main(["preprocess", "--raw", str(raw_csv), "--rate", "150", "--out", str(out)])
        assert code == 0
        assert read_kind(out / "preprocess" / "cleaned_timeseries.json") == "timeseries"
        assert read_kind(out / "preprocess" / "psd.json") == "psd"
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "preprocess"
        assert len(manifest["artifacts"]) == 2

    def test_missing_raw_is_config_error(self, tmp_path, capsys):
        code = main(["preprocess", "--out", str(tmp_path / "o")])
        assert code == 1
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["error"] == "ConfigError"


class TestFeatures:
    def test_labeled_feature_csv_loads_back(self, raw_csv, tmp_path):
        out = tmp_path / "out"
        config = tmp_path / "run.toml"
        config.write_text(
            f'[dataio]\nraw_csv = "{raw_csv}"\nsampling_rate_hz = 150.0\nraw_label = "NEUTRAL"\n'
            f'[output]\nout_dir = "{out}"\n'
        )
        assert main(["features", "--config", str(config)]) == 0
        ds = dataio.load_feature_dataset(out / "features" / "features.csv")
        # 6 s at offsets 0 and 0.5 -> 6 + 5 windows, 12 features x 2 channels
        assert ds.n_samples == 11
        assert ds.n_features == 24
        assert set(ds.labels.tolist()) == {1}


class TestAnalyze:
    def test_full_artifacts_on_real_sized_data(self, feature_csv, tmp_path):
        out = tmp_path / "out"
        code = main(
            ["analyze", "--dataset", str(feature_csv), "--out", str(out), "--alpha", "0.05"]
        )
        assert code == 0
        adir = out / "analyze"
        assert read_kind(adir / "correlation.json") == "correlation"
        assert read_kind(adir / "significance.json") == "significance"
        assert read_kind(adir / "embedding.json") == "embedding"

    def test_tiny_dataset_skips_tsne_with_notice(self, tmp_path):
        ds = separated_dataset(2.0, n_per_class=4, n_features=3, seed=1)
        path = tmp_path / "tiny.csv"
        dataio.write_dataset_csv(ds, path)
        out = tmp_path / "out"
        assert main(["analyze", "--dataset", str(path), "--out", str(out)]) == 0
        assert (out / "analyze" / "correlation.json").exists()
        assert (out / "analyze" / "significance.json").exists()
        assert not (out / "analyze" / "embedding.json").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert any("t-SNE skipped" in n for n in manifest["notices"])


class TestTrainEvaluate:
    def test_train_writes_loadable_models(self, feature_csv, tmp_path):
        out = tmp_path / "out"
        code = main(
            ["train", "--dataset", str(feature_csv), "--out", str(out), "--model", "all"]
        )
        assert code == 0
        from eegemo.models import model_from_payload

        for key in ("lr", "svm", "rf"):
            kind, payload = dataio.read_artifact(out / "train" / f"model_{key}.json")
            assert kind == "model"
            model_from_payload(payload)  # reconstructs without error

    def test_evaluate_requires_single_model(self, feature_csv, tmp_path, capsys):
        code = main(["evaluate", "--dataset", str(feature_csv), "--out", str(tmp_path / "o")])
        assert code == 1
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["error"] == "ConfigError"

    def test_evaluate_single_model(self, feature_csv, tmp_path):
        out = tmp_path / "out"
        code = main(
            ["evaluate", "--dataset", str(feature_csv), "--out", str(out), "--model", "rf"]
        )
        assert code == 0
        kind, payload = dataio.read_artifact(out / "evaluate" / "evaluation_rf.json")
        assert kind == "comparison"
        assert len(payload["rows"]) == 1
        assert read_kind(out / "evaluate" / "confusion_rf.json") == "confusion"


class TestCompare:
    def test_three_rows_and_confusions(self, feature_csv, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["compare", "--dataset", str(feature_csv), "--out", str(out)])
        assert code == 0
        stdout = capsys.readouterr().out
        assert "best:" in stdout
        kind, payload = dataio.read_artifact(out / "compare" / "comparison.json")
        assert kind == "comparison"
        assert [r["key"] for r in payload["rows"]] == ["lr", "svm", "rf"]
        assert payload["best_model"] in {r["model"] for r in payload["rows"]}
        for key in ("lr", "svm", "rf"):
            assert read_kind(out / "compare" / f"confusion_{key}.json") == "confusion"

    def test_reruns_are_byte_identical(self, feature_csv, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            assert main(["compare", "--dataset", str(feature_csv), "--out", str(out)]) == 0
        for name in ("comparison", "confusion_lr", "confusion_svm", "confusion_rf"):
            a = (out1 / "compare" / f"{name}.json").read_bytes()
            b = (out2 / "compare" / f"{name}.json").read_bytes()
            assert a == b

    def test_manifest_config_closure(self, feature_csv, tmp_path):
        # the manifest snapshot alone must be able to reproduce the run
        out1 = tmp_path / "a"
        assert main(["compare", "--dataset", str(feature_csv), "--out", str(out1)]) == 0
        manifest = json.loads((out1 / "manifest.json").read_text())
        snapshot = tmp_path / "snapshot.json"
        config = manifest["config"]
        config["output"]["out_dir"] = str(tmp_path / "b")
        snapshot.write_text(json.dumps(config))
        assert main(["compare", "--config", str(snapshot)]) == 0
        a = (out1 / "compare" / "comparison.json").read_bytes()
        b = (tmp_path / "b" / "compare" / "comparison.json").read_bytes()
        assert a == b

    def test_significant_only_runs(self, feature_csv, tmp_path):
        out = tmp_path / "out"
        code = main(
            [
                "compare",
                "--dataset",
                str(feature_csv),
                "--out",
                str(out),
                "--significant-only",
            ]
        )
        assert code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert any("significant-only" in n for n in manifest["notices"])


class TestErrors:
    def test_unknown_subcommand_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_missing_dataset_file(self, tmp_path, capsys):
        code = main(["compare", "--dataset", str(tmp_path / "none.csv"), "--out", str(tmp_path / "o")])
        assert code == 1
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["error"] == "FileNotFoundError"

    def test_unknown_config_key_rejected(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("[dataio]\nfeture_csv = 'x.csv'\n")
        with pytest.raises(ConfigError):
            load_config(bad)

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError):
            PipelineConfig.from_dict({"plotting": {}})
