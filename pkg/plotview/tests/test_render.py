import pytest

from conftest import artifact, write

from plotview import ArtifactError, FigureJob, load_artifact, render
from plotview.schema import FIGURE_KINDS


@pytest.mark.parametrize("kind", FIGURE_KINDS)
def test_every_kind_renders_one_image(kind, sample_payloads, tmp_path):
    src = write(tmp_path / f"{kind}.json", artifact(kind, sample_payloads[kind]))
    out = tmp_path / f"{kind}.png"
    result = render(FigureJob(artifact_path=src, output_path=out))
    assert result == out
    assert out.exists()
    assert out.stat().st_size > 1000  # a real raster image, not a stub


def test_confusion_annotations_present(sample_payloads, tmp_path):
    # structural check: 3x3 counts render without error and produce svg text
    src = write(tmp_path / "cm.json", artifact("confusion", sample_payloads["confusion"]))
    out = tmp_path / "cm.svg"
    render(FigureJob(artifact_path=src, output_path=out))
    svg = out.read_text()
    for count in ("10", "12"):
        assert count in svg  # annotated cell counts make it into the figure


def test_unknown_kind_fails_loudly(tmp_path):
    src = write(tmp_path / "x.json", artifact("spectrogram", {}))
    with pytest.raises(ArtifactError):
        render(FigureJob(artifact_path=src, output_path=tmp_path / "x.png"))


def test_schema_version_mismatch(sample_payloads, tmp_path):
    src = write(
        tmp_path / "new.json", artifact("psd", sample_payloads["psd"], version=2)
    )
    with pytest.raises(ArtifactError):
        render(FigureJob(artifact_path=src, output_path=tmp_path / "new.png"))


def test_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ArtifactError):
        load_artifact(bad)


def test_missing_envelope_fields(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": 1}')
    with pytest.raises(ArtifactError):
        load_artifact(bad)


def test_rendering_leaves_artifact_untouched(sample_payloads, tmp_path):
    src = write(tmp_path / "psd.json", artifact("psd", sample_payloads["psd"]))
    before = src.read_bytes()
    render(FigureJob(artifact_path=src, output_path=tmp_path / "psd.png"))
    assert src.read_bytes() == before


def test_embedding_without_labels_renders(sample_payloads, tmp_path):
    payload = dict(sample_payloads["embedding"])
    payload["labels"] = None
    src = write(tmp_path / "emb.json", artifact("embedding", payload))
    render(FigureJob(artifact_path=src, output_path=tmp_path / "emb.png"))
    assert (tmp_path / "emb.png").exists()
