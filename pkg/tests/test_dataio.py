import json

import numpy as np
import pytest

from eegemo import dataio
from eegemo.errors import (
    ArtifactSchemaError,
    DataFormatError,
    EmptyFileError,
    NonFiniteCellError,
    NonNumericCellError,
    RaggedRowError,
    UnknownLabelError,
)


class TestLoadFeatureDataset:
    def test_toy_csv_encodes_labels(self, toy_csv):
        ds = dataio.load_feature_dataset(toy_csv)
        assert ds.labels.tolist() == [0, 1, 2]
        assert ds.n_features == 2
        assert ds.feature_names == ("f1", "f2")
        assert ds.features[0].tolist() == [1.0, 2.0]

    def test_numeric_labels_accepted(self, tmp_path):
        path = tmp_path / "num.csv"
        path.write_text("a,label\n1,2\n2,0\n3,1\n")
        ds = dataio.load_feature_dataset(path)
        assert ds.labels.tolist() == [2, 0, 1]

    def test_non_numeric_cell_names_row_and_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("f1,f2,label\n1.0,2.0,NEGATIVE\n1.0,abc,NEUTRAL\n")
        with pytest.raises(NonNumericCellError) as err:
            dataio.load_feature_dataset(path)
        assert err.value.row == 2
        assert err.value.column == "f2"

    def test_nan_cell_rejected(self, tmp_path):
        path = tmp_path / "nan.csv"
        path.write_text("f1,label\nnan,NEGATIVE\n")
        with pytest.raises(NonFiniteCellError):
            dataio.load_feature_dataset(path)

    def test_unknown_label(self, tmp_path):
        path = tmp_path / "lbl.csv"
        path.write_text("f1,label\n1.0,HAPPYISH\n")
        with pytest.raises(UnknownLabelError) as err:
            dataio.load_feature_dataset(path)
        assert err.value.row == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            dataio.load_feature_dataset(tmp_path / "nope.csv")

    def test_missing_label_column(self, toy_csv):
        with pytest.raises(DataFormatError):
            dataio.load_feature_dataset(toy_csv, label_column="emotion")

    def test_csv_round_trip_is_lossless(self, tmp_path):
        rng = np.random.default_rng(0)
        ds = dataio.LabeledDataset(
            rng.normal(0, 1e6, (20, 5)) * 1e-7,
            tuple(f"f{i}" for i in range(5)),
            rng.integers(0, 3, 20),
        )
        path = tmp_path / "round.csv"
        dataio.write_dataset_csv(ds, path)
        back = dataio.load_feature_dataset(path)
        np.testing.assert_array_equal(back.features, ds.features)
        np.testing.assert_array_equal(back.labels, ds.labels)


class TestLoadRawEeg:
    def test_four_channel_counts(self, tmp_path):
        path = tmp_path / "raw.csv"
        rows = "\n".join(",".join(str(v) for v in row) for row in np.ones((300, 4)))
        path.write_text("TP9,AF7,AF8,TP10\n" + rows + "\n")
        rec = dataio.load_raw_eeg(path, 150.0)
        assert rec.n_channels == 4
        assert rec.n_samples == 300
        assert rec.duration == pytest.approx(2.0)
        assert rec.channel_names == ("TP9", "AF7", "AF8", "TP10")

    def test_channel_count_is_data_driven(self, tmp_path):
        path = tmp_path / "raw19.csv"
        header = ",".join(f"ch{i}" for i in range(19))
        rows = "\n".join(",".join("0.5" for _ in range(19)) for _ in range(10))
        path.write_text(header + "\n" + rows + "\n")
        rec = dataio.load_raw_eeg(path, 150.0)
        assert rec.n_channels == 19

    def test_ragged_row(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("a,b,c,d\n1,2,3,4\n1,2,3\n")
        with pytest.raises(RaggedRowError) as err:
            dataio.load_raw_eeg(path, 150.0)
        assert err.value.row == 2

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(EmptyFileError):
            dataio.load_raw_eeg(path, 150.0)


class TestGenerateSynthetic:
    def test_zero_separation_shape(self):
        ds = dataio.generate_synthetic(dataio.SyntheticSpec(50, 4, 0.0, seed=7))
        assert ds.n_samples == 150
        assert ds.class_counts() == {0: 50, 1: 50, 2: 50}

    def test_nearest_centroid_oracle_on_separated_data(self):
        # brute-force oracle: classify a fresh draw by nearest class centroid
        train = dataio.generate_synthetic(dataio.SyntheticSpec(50, 4, 10.0, seed=7))
        fresh = dataio.generate_synthetic(dataio.SyntheticSpec(50, 4, 10.0, seed=8))
        centroids = np.stack(
            [train.features[train.labels == c].mean(axis=0) for c in range(3)]
        )
        d = ((fresh.features[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        accuracy = (np.argmin(d, axis=1) == fresh.labels).mean()
        assert accuracy >= 0.99

    def test_deterministic(self):
        spec = dataio.SyntheticSpec(10, 3, 2.0, seed=123)
        a = dataio.generate_synthetic(spec)
        b = dataio.generate_synthetic(spec)
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels, b.labels)

    def test_pairwise_mean_distances(self):
        sep = 6.0
        means = dataio._class_means(5, sep)
        for i in range(3):
            for j in range(i + 1, 3):
                assert np.linalg.norm(means[i] - means[j]) == pytest.approx(sep)


class TestArtifacts:
    def test_confusion_round_trip(self, tmp_path):
        from eegemo.evaluate import ConfusionMatrix

        cm = ConfusionMatrix(np.arange(9).reshape(3, 3), model="LR")
        path = tmp_path / "cm.json"
        dataio.write_artifact(cm, path)
        kind, payload = dataio.read_artifact(path)
        assert kind == "confusion"
        back = ConfusionMatrix.from_payload(payload)
        np.testing.assert_array_equal(back.counts, cm.counts)

    def test_psd_round_trip_counts(self, tmp_path, sine_recording):
        from eegemo import dsp

        psd = dsp.welch_psd(sine_recording, 128, 0.5)
        path = tmp_path / "psd.json"
        dataio.write_artifact(psd, path)
        kind, payload = dataio.read_artifact(path)
        assert kind == "psd"
        assert len(payload["frequencies_hz"]) == 65  # 128 // 2 + 1 bins
        assert all(len(ch) == 65 for ch in payload["power"])
        back = dsp.PsdEstimate.from_payload(payload)
        np.testing.assert_array_equal(back.power, psd.power)

    def test_write_to_missing_directory(self, tmp_path, sine_recording):
        with pytest.raises(FileNotFoundError):
            dataio.write_artifact(sine_recording, tmp_path / "nowhere" / "x.json")

    def test_version_check(self, tmp_path):
        path = tmp_path / "future.json"
        path.write_text(json.dumps({"schema_version": 99, "kind": "psd", "payload": {}}))
        with pytest.raises(ArtifactSchemaError):
            dataio.read_artifact(path)


class TestInvariants:
    def test_dataset_rejects_nonfinite(self):
        with pytest.raises(DataFormatError):
            dataio.LabeledDataset(np.array([[1.0, np.inf]]), ("a", "b"), [0])

    def test_dataset_rejects_duplicate_names(self):
        with pytest.raises(DataFormatError):
            dataio.LabeledDataset(np.ones((1, 2)), ("a", "a"), [0])

    def test_label_name_bijection(self):
        assert sorted(dataio.LABEL_NAMES) == [0, 1, 2]
        assert {dataio.NAME_TO_LABEL[v] for v in dataio.LABEL_NAMES.values()} == {0, 1, 2}
