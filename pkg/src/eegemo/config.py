"""Pipeline configuration: one document, strict keys, flag overrides.

Config files are TOML (or JSON with the same structure); sections mirror the
module names.  Unknown sections or keys are rejected so a manifest's config
snapshot is always sufficient to reproduce a run.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - py310 fallback
    import tomli as tomllib

from .errors import ConfigError


@dataclass
class DataIoConfig:
    feature_csv: str | None = None
    label_column: str = "label"
    raw_csv: str | None = None
    sampling_rate_hz: float = 150.0
    raw_label: str | None = None  # label stamped on windows cut from raw_csv


@dataclass
class DspConfig:
    filter_low_hz: float = 0.5
    filter_high_hz: float = 45.0
    filter_order: int = 4
    resample_hz: float | None = None  # None -> keep the native rate
    welch_segment_seconds: float = 1.0
    welch_overlap: float = 0.5


@dataclass
class FeatextConfig:
    window_seconds: float = 1.0
    offsets_seconds: tuple[float, ...] = (0.0, 0.5)


@dataclass
class AnalysisConfig:
    alpha: float = 0.05
    tsne_perplexity: float = 30.0
    tsne_iterations: int = 1000
    tsne_seed: int = 0
    tsne_max_rows: int = 1000


@dataclass
class ModelsConfig:
    model: str = "all"  # lr | svm | rf | all
    significant_only: bool = False
    svm_grid: bool = False
    logreg_l2: float = 1e-3
    logreg_learning_rate: float = 0.1
    logreg_max_epochs: int = 500
    logreg_tolerance: float = 1e-5
    svm_c: float = 1.0
    svm_gamma: float | None = None  # None -> 1 / (n_features * mean feature variance)
    svm_tol: float = 1e-3
    svm_max_passes: int = 10
    rf_trees: int = 100
    rf_mtry: int | None = None  # None -> floor(sqrt(n_features))
    rf_max_depth: int | None = None
    rf_min_leaf: int = 1
    rf_seed: int = 0
    rf_jobs: int = 1


@dataclass
class EvalConfig:
    test_fraction: float = 0.3
    seed: int = 42


@dataclass
class OutputConfig:
    out_dir: str = "artifacts"


@dataclass
class PipelineConfig:
    dataio: DataIoConfig = field(default_factory=DataIoConfig)
    dsp: DspConfig = field(default_factory=DspConfig)
    featext: FeatextConfig = field(default_factory=FeatextConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    models: ModelsConfig = field(default_factory=ModelsConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def validate(self) -> None:
        if self.models.model not in ("lr", "svm", "rf", "all"):
            raise ConfigError(f"models.model must be lr|svm|rf|all, got {self.models.model!r}")
        if not 0.0 < self.eval.test_fraction < 1.0:
            raise ConfigError("eval.test_fraction must be in (0, 1)")
        if not 0.0 < self.analysis.alpha < 1.0:
            raise ConfigError("analysis.alpha must be in (0, 1)")
        if not 0.0 <= self.dsp.welch_overlap < 1.0:
            raise ConfigError("dsp.welch_overlap must be in [0, 1)")

    def to_dict(self) -> dict:
        def scrub(value):
            if isinstance(value, tuple):
                return list(value)
            return value

        return {
            section.name: {
                f.name: scrub(getattr(getattr(self, section.name), f.name))
                for f in dataclasses.fields(getattr(self, section.name))
            }
            for section in dataclasses.fields(self)
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        if not isinstance(data, dict):
            raise ConfigError("config document must be a table of sections")
        sections = {f.name: f for f in dataclasses.fields(cls)}
        unknown = set(data) - set(sections)
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        kwargs = {}
        for name, section_field in sections.items():
            if name not in data:
                continue
            section_cls = section_field.default_factory  # type: ignore[union-attr]
            section_data = data[name]
            if not isinstance(section_data, dict):
                raise ConfigError(f"config section [{name}] must be a table")
            known = {f.name: f for f in dataclasses.fields(section_cls)}
            bad = set(section_data) - set(known)
            if bad:
                raise ConfigError(f"unknown keys in [{name}]: {sorted(bad)}")
            coerced = {}
            for key, value in section_data.items():
                if isinstance(value, list):
                    value = tuple(value)
                coerced[key] = value
            kwargs[name] = section_cls(**coerced)
        config = cls(**kwargs)
        config.validate()
        return config


def load_config(path) -> PipelineConfig:
    """Load a TOML or JSON config file (picked by extension)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    if path.suffix.lower() == ".json":
        data = json.loads(path.read_text())
    else:
        with path.open("rb") as fh:
            try:
                data = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path} is not valid TOML: {exc}") from None
    return PipelineConfig.from_dict(data)
