"""Subcommand CLI: preprocess | features | analyze | train | evaluate | compare.

Every run resolves one PipelineConfig (config file plus flag overrides),
writes its artifacts under ``<out>/<subcommand>/`` and finishes with a
``manifest.json`` at the output root holding the config snapshot, seed,
artifact checksums, timings and notices.  Artifact files themselves are
deterministic; anything run-dependent lives only in the manifest.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__, analysis, dataio, dsp, evaluate, featext
from .config import PipelineConfig, load_config
from .errors import ConfigError, EegemoError, InfeasiblePerplexityError
from .models import model_to_artifact

MANIFEST_VERSION = 1


def _selected_models(config: PipelineConfig) -> tuple[str, ...]:
    if config.models.model == "all":
        return evaluate.MODEL_ORDER
    return (config.models.model,)


def _model_configs(config: PipelineConfig, models: tuple[str, ...]) -> evaluate.ModelConfigs:
    m = config.models
    return evaluate.ModelConfigs(
        models=models,
        logreg_l2=m.logreg_l2,
        logreg_learning_rate=m.logreg_learning_rate,
        logreg_max_epochs=m.logreg_max_epochs,
        logreg_tolerance=m.logreg_tolerance,
        svm_c=m.svm_c,
        svm_gamma=m.svm_gamma,
        svm_tol=m.svm_tol,
        svm_max_passes=m.svm_max_passes,
        rf_trees=m.rf_trees,
        rf_mtry=m.rf_mtry,
        rf_max_depth=m.rf_max_depth,
        rf_min_leaf=m.rf_min_leaf,
        rf_seed=m.rf_seed,
        rf_jobs=m.rf_jobs,
    )


class _Run:
    """Collects artifacts, timings and notices for one subcommand run."""

    def __init__(self, command: str, config: PipelineConfig):
        self.command = command
        self.config = config
        self.out_root = Path(config.output.out_dir)
        self.out_dir = self.out_root / command
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.artifacts: dict[str, str] = {}
        self.timings: dict[str, float] = {}
        self.notices: list[str] = []

    def write(self, payload_obj, filename: str) -> Path:
        path = self.out_dir / filename
        digest = dataio.write_artifact(payload_obj, path)
        self.artifacts[str(path.relative_to(self.out_root))] = digest
        return path

    def register_file(self, path: Path) -> None:
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        self.artifacts[str(path.relative_to(self.out_root))] = digest

    def notice(self, message: str) -> None:
        self.notices.append(message)
        print(f"notice: {message}", file=sys.stderr)

    def finish(self) -> None:
        manifest = {
            "manifest_version": MANIFEST_VERSION,
            "package_version": __version__,
            "command": self.command,
            "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "seed": self.config.eval.seed,
            "config": self.config.to_dict(),
            "artifacts": self.artifacts,
            "timings_seconds": self.timings,
            "notices": self.notices,
        }
        path = self.out_root / "manifest.json"
        path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def _load_dataset(config: PipelineConfig) -> dataio.LabeledDataset:
    if not config.dataio.feature_csv:
        raise ConfigError("dataio.feature_csv (or --dataset) is required for this subcommand")
    return dataio.load_feature_dataset(config.dataio.feature_csv, config.dataio.label_column)


def _preprocessed_recording(config: PipelineConfig) -> dataio.EegRecording:
    if not config.dataio.raw_csv:
        raise ConfigError("dataio.raw_csv (or --raw) is required for this subcommand")
    recording = dataio.load_raw_eeg(config.dataio.raw_csv, config.dataio.sampling_rate_hz)
    if config.dsp.resample_hz and config.dsp.resample_hz != recording.sampling_rate:
        recording = dsp.resample(recording, config.dsp.resample_hz)
    spec = dsp.FilterSpec(config.dsp.filter_low_hz, config.dsp.filter_high_hz, config.dsp.filter_order)
    return dsp.bandpass_filter(recording, spec)


def _welch_segment(config: PipelineConfig, recording: dataio.EegRecording) -> int:
    return int(round(config.dsp.welch_segment_seconds * recording.sampling_rate))


def run_preprocess(config: PipelineConfig, run: _Run) -> None:
    recording = _preprocessed_recording(config)
    run.write(recording, "cleaned_timeseries.json")
    psd = dsp.welch_psd(recording, _welch_segment(config, recording), config.dsp.welch_overlap)
    run.write(psd, "psd.json")


def run_features(config: PipelineConfig, run: _Run) -> None:
    recording = _preprocessed_recording(config)
    plan = featext.WindowPlan(config.featext.window_seconds, config.featext.offsets_seconds)
    table = featext.extract_features(recording, plan)
    label = config.dataio.raw_label
    label_code = None
    if label is not None:
        label_code = dataio.NAME_TO_LABEL.get(label.strip().upper())
        if label_code is None:
            raise ConfigError(f"dataio.raw_label must be one of {sorted(dataio.NAME_TO_LABEL)}")
    path = run.out_dir / "features.csv"
    _write_feature_csv(table, path, label_code, config.dataio.label_column)
    run.register_file(path)
    run.notice(f"extracted {table.values.shape[0]} windows x {table.values.shape[1]} features")


def _write_feature_csv(table: featext.FeatureTable, path: Path, label_code, label_column: str) -> None:
    import csv

    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        header = list(table.feature_names)
        if label_code is not None:
            header.append(label_column)
        writer.writerow(header)
        for row in table.values:
            cells = [repr(float(v)) for v in row]
            if label_code is not None:
                cells.append(dataio.LABEL_NAMES[label_code])
            writer.writerow(cells)


def run_analyze(config: PipelineConfig, run: _Run) -> None:
    dataset = _load_dataset(config)
    corr = analysis.correlation_matrix(dataset.features, dataset.feature_names)
    run.write(corr, "correlation.json")
    summary = analysis.significance_summary(dataset, config.analysis.alpha)
    run.write(summary, "significance.json")

    standardizer = featext.fit_standardizer(dataset.features)
    standardized = featext.apply_standardizer(standardizer, dataset.features)
    rows = analysis.subsample_stratified(
        dataset.labels, config.analysis.tsne_max_rows, config.analysis.tsne_seed
    )
    try:
        started = time.perf_counter()
        embedding = analysis.tsne_embed(
            standardized[rows],
            perplexity=config.analysis.tsne_perplexity,
            iterations=config.analysis.tsne_iterations,
            seed=config.analysis.tsne_seed,
            labels=dataset.labels[rows],
        )
        run.timings["tsne"] = time.perf_counter() - started
        run.write(embedding, "embedding.json")
    except InfeasiblePerplexityError as exc:
        run.notice(f"t-SNE skipped: {exc}")


def _prepare_dataset_for_models(config: PipelineConfig, run: _Run):
    dataset = _load_dataset(config)
    split = evaluate.stratified_split(dataset, config.eval.test_fraction, config.eval.seed)
    if config.models.significant_only:
        train_view = dataset.subset(split.train_rows)
        summary = analysis.significance_summary(train_view, config.analysis.alpha)
        keep = sorted(
            {
                r.feature_name
                for _, r in summary.tests
                if r.significant
            }
        )
        if not keep:
            raise ConfigError("significant-only filter removed every feature")
        keep_idx = [dataset.feature_names.index(name) for name in keep]
        dataset = dataio.LabeledDataset(
            dataset.features[:, keep_idx],
            tuple(dataset.feature_names[i] for i in keep_idx),
            dataset.labels,
        )
        run.notice(f"significant-only filter kept {len(keep)} features")
    return dataset, split


def _maybe_grid_search(config: PipelineConfig, run: _Run, dataset, split, configs):
    if not config.models.svm_grid or "svm" not in configs.models:
        return configs
    x_train = dataset.features[split.train_rows]
    standardizer = featext.fit_standardizer(x_train)
    x_std = featext.apply_standardizer(standardizer, x_train)
    y_train = dataset.labels[split.train_rows]
    best_c, best_gamma, score = evaluate.grid_search_svm(x_std, y_train, configs, config.eval.seed)
    run.notice(f"svm grid search picked C={best_c}, gamma={best_gamma:.6g} (val acc {score:.3f})")
    return evaluate.ModelConfigs(
        **{
            **{f.name: getattr(configs, f.name) for f in configs.__dataclass_fields__.values()},
            "svm_c": best_c,
            "svm_gamma": best_gamma,
        }
    )


def run_train(config: PipelineConfig, run: _Run) -> None:
    dataset, split = _prepare_dataset_for_models(config, run)
    keys = _selected_models(config)
    configs = _model_configs(config, keys)
    configs = _maybe_grid_search(config, run, dataset, split, configs)
    x_train_raw = dataset.features[split.train_rows]
    y_train = dataset.labels[split.train_rows]
    standardizer = featext.fit_standardizer(x_train_raw)
    x_train_std = featext.apply_standardizer(standardizer, x_train_raw)
    for key in keys:
        started = time.perf_counter()
        model = evaluate.train_one_model(key, configs, x_train_std, x_train_raw, y_train)
        run.timings[f"train_{key}"] = time.perf_counter() - started
        run.write(model_to_artifact(model), f"model_{key}.json")


def run_evaluate(config: PipelineConfig, run: _Run) -> None:
    if config.models.model == "all":
        raise ConfigError("evaluate needs a single model (--model lr|svm|rf); use compare for all")
    dataset, split = _prepare_dataset_for_models(config, run)
    configs = _model_configs(config, (config.models.model,))
    configs = _maybe_grid_search(config, run, dataset, split, configs)
    report = evaluate.compare_models(dataset, split, configs)
    for row in report.rows:
        run.timings[f"train_{row.key}"] = row.training_seconds
    run.write(report, f"evaluation_{config.models.model}.json")
    run.write(report.rows[0].confusion, f"confusion_{config.models.model}.json")
    print(evaluate.format_comparison_table(report))


def run_compare(config: PipelineConfig, run: _Run) -> None:
    dataset, split = _prepare_dataset_for_models(config, run)
    keys = _selected_models(config)
    configs = _model_configs(config, keys)
    configs = _maybe_grid_search(config, run, dataset, split, configs)
    report = evaluate.compare_models(dataset, split, configs)
    for row in report.rows:
        run.timings[f"train_{row.key}"] = row.training_seconds
    run.write(report, "comparison.json")
    for row in report.rows:
        run.write(row.confusion, f"confusion_{row.key}.json")
    print(evaluate.format_comparison_table(report))


SUBCOMMANDS = {
    "preprocess": run_preprocess,
    "features": run_features,
    "analyze": run_analyze,
    "train": run_train,
    "evaluate": run_evaluate,
    "compare": run_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eegemo",
        description="EEG emotion classification pipeline (three classes, three classifiers)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} stage")
        p.add_argument("--config", type=Path, help="TOML or JSON config file")
        p.add_argument("--out", type=Path, help="output directory (overrides output.out_dir)")
        p.add_argument("--dataset", type=Path, help="labeled feature CSV (overrides dataio.feature_csv)")
        p.add_argument("--raw", type=Path, help="raw EEG CSV (overrides dataio.raw_csv)")
        p.add_argument("--rate", type=float, help="raw CSV sampling rate in Hz")
        p.add_argument("--seed", type=int, help="split seed (overrides eval.seed)")
        p.add_argument("--test-fraction", type=float, help="held-out fraction (overrides eval.test_fraction)")
        p.add_argument("--model", choices=["lr", "svm", "rf", "all"], help="model selection")
        p.add_argument("--alpha", type=float, help="significance threshold")
        p.add_argument("--filter-low", type=float, help="bandpass low edge in Hz")
        p.add_argument("--filter-high", type=float, help="bandpass high edge in Hz")
        p.add_argument(
            "--significant-only",
            action="store_true",
            help="drop features not significant (one-vs-rest, train rows only) before training",
        )
        p.add_argument("--svm-grid", action="store_true", help="small C/gamma grid search for the SVM")
    return parser


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    if args.out is not None:
        config.output.out_dir = str(args.out)
    if args.dataset is not None:
        config.dataio.feature_csv = str(args.dataset)
    if args.raw is not None:
        config.dataio.raw_csv = str(args.raw)
    if args.rate is not None:
        config.dataio.sampling_rate_hz = args.rate
    if args.seed is not None:
        config.eval.seed = args.seed
    if args.test_fraction is not None:
        config.eval.test_fraction = args.test_fraction
    if args.model is not None:
        config.models.model = args.model
    if args.alpha is not None:
        config.analysis.alpha = args.alpha
    if args.filter_low is not None:
        config.dsp.filter_low_hz = args.filter_low
    if args.filter_high is not None:
        config.dsp.filter_high_hz = args.filter_high
    if args.significant_only:
        config.models.significant_only = True
    if args.svm_grid:
        config.models.svm_grid = True
    config.validate()
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        run = _Run(args.command, config)
        SUBCOMMANDS[args.command](config, run)
        run.finish()
    except (EegemoError, FileNotFoundError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
