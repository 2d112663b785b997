"""Workflow stages: preprocess, train, generate, baseline, evaluate.

Each stage reads and writes under the experiment's output directory,
records the content hashes of everything it touched in the run manifest,
and surfaces failures as StageError with the stage name attached.

Data routing follows one rule set everywhere: the window test split is
consumed only by the baseline classifier; held-out recordings feed only
evaluation (TSTR testing, discriminative and privacy holdouts, PCA);
training stages see the train split alone. Statistical distance and MMD
compare synthetic windows against the real training windows.
"""

import dataclasses
import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pandas as pd

from ..errors import StageError
from ..metrics import (
    DiscriminativeConfig,
    MetricReport,
    baseline,
    discriminative_score,
    mmd,
    pca_compare,
    privacy_score,
    repeat_protocol,
    stat_distance,
    trts,
    tstr,
)
from ..models import (
    DganModel,
    TimeganModel,
    build_dgan,
    build_timegan,
    generate_dgan,
    generate_timegan,
    load_checkpoint,
    save_checkpoint,
    train_dgan,
    train_timegan,
)
from ..pipeline import (
    WindowedDataset,
    apply_scaler,
    butterworth_lowpass,
    count_out_of_range,
    fit_scaler,
    holdout_split,
    load_recordings,
    load_windowed_dataset,
    save_windowed_dataset,
    shuffle_split,
    window_recordings,
)
from ..pipeline.scaling import ScalerParams
from ..seeding import derive_seed
from .config import FAMILIES, ExperimentConfig
from .manifest import RunManifest, dict_digest, file_sha256, hash_files
from .report import plot_history, plot_pca, render_tables, write_pca_csv

PREPROCESS_DIR = "preprocess"
MODELS_DIR = "models"
SYNTH_DIR = "synthetic"
EVAL_DIR = "evaluation"

Log = Optional[Callable[[str], None]]


@dataclass
class StageResult:
    stage: str
    cached: bool = False
    outputs: dict[str, str] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)
    payload: object = None


def _log(log: Log, msg: str) -> None:
    if log is not None:
        log(msg)


class _WarningTap:
    """Capture warnings inside a stage, forwarding messages to the log."""

    def __init__(self, log: Log):
        self.log = log
        self.count = 0
        self._ctx = None

    def __enter__(self):
        self._ctx = warnings.catch_warnings(record=True)
        self._records = self._ctx.__enter__()
        warnings.simplefilter("always")
        return self

    def __exit__(self, *exc):
        for rec in self._records:
            self.count += 1
            _log(self.log, f"warning: {rec.message}")
        return self._ctx.__exit__(*exc)


def _dataset_files(ds_dir: Path) -> list[Path]:
    return [ds_dir / name for name in ("data.csv", "labels.csv", "meta.json")]


def _require_dir(path: Path, stage: str, hint: str) -> None:
    if not path.exists():
        raise StageError(stage, f"missing {path}; {hint}")


def _model_seed(cfg: ExperimentConfig, family: str, label: str) -> int:
    return derive_seed(cfg.seed, "train", family, label)


def checkpoint_path(cfg: ExperimentConfig, family: str, label: str) -> Path:
    return cfg.output_dir / MODELS_DIR / f"{family}_{label}.ckpt"


def history_path(cfg: ExperimentConfig, family: str, label: str) -> Path:
    return cfg.output_dir / MODELS_DIR / f"{family}_{label}_history.csv"


def synthetic_dir(cfg: ExperimentConfig, family: str, label: str) -> Path:
    return cfg.output_dir / SYNTH_DIR / family / label


def _preprocess_key(cfg: ExperimentConfig, input_hashes: dict[str, str]) -> str:
    return dict_digest(
        {
            "classes": list(cfg.classes),
            "sample_rate": cfg.sample_rate,
            "filter": dataclasses.asdict(cfg.filter_spec),
            "windows": {k: dataclasses.asdict(v) for k, v in cfg.windows.items()},
            "split": dataclasses.asdict(cfg.split),
            "inputs": input_hashes,
        }
    )


def run_preprocess(cfg: ExperimentConfig, log: Log = None) -> StageResult:
    """Filter, split off held-out recordings, window per family, scale, split."""
    stage = "preprocess"
    if not cfg.data_root.is_dir():
        raise StageError(stage, f"data root is not a directory: {cfg.data_root}")

    raw_files = sorted(cfg.data_root.rglob("*.csv"), key=lambda p: p.as_posix())
    input_hashes = hash_files(cfg.data_root, raw_files)
    key = _preprocess_key(cfg, input_hashes)
    manifest = RunManifest.open_or_create(cfg.output_dir, cfg.to_json_dict())
    if manifest.stage_is_current(stage, key, cfg.output_dir):
        _log(log, "inputs and config unchanged; outputs intact (cached)")
        record = manifest.stages[stage]
        return StageResult(
            stage=stage, cached=True,
            outputs=record["outputs"], counters=record["counters"],
        )

    counters: dict[str, int] = {"clipped_values": 0}
    out_paths: list[Path] = []
    with _WarningTap(log) as tap:
        recordings = load_recordings(
            cfg.data_root, classes=list(cfg.classes), sample_rate=cfg.sample_rate
        )
        present = {r.label for r in recordings}
        missing = [c for c in cfg.classes if c not in present]
        if missing:
            raise StageError(stage, f"no recordings found for class(es) {missing}")

        filtered = [butterworth_lowpass(r, cfg.filter_spec) for r in recordings]
        working, heldout = holdout_split(filtered, cfg.split)
        _log(log, f"{len(working)} working / {len(heldout)} held-out recordings")

        for family in FAMILIES:
            fam_dir = cfg.output_dir / PREPROCESS_DIR / family
            wcfg = cfg.windows[family]
            work_ds = window_recordings(working, wcfg)
            held_ds = window_recordings(heldout, wcfg)

            scaler = fit_scaler(work_ds)
            counters["clipped_values"] += count_out_of_range(held_ds, scaler)
            work_scaled = apply_scaler(work_ds, scaler)
            held_scaled = apply_scaler(held_ds, scaler)
            train_ds, test_ds = shuffle_split(work_scaled, cfg.split)

            meta = {
                "family": family,
                "window": dataclasses.asdict(wcfg),
                "class_counts": None,  # filled per split below
            }
            for name, ds in (
                ("train", train_ds), ("test", test_ds), ("holdout", held_scaled)
            ):
                split_meta = dict(meta, split=name, class_counts=ds.class_counts())
                ds_dir = save_windowed_dataset(ds, fam_dir / name, meta=split_meta)
                out_paths.extend(_dataset_files(ds_dir))
            scaler_file = fam_dir / "scaler.json"
            with open(scaler_file, "w", encoding="utf-8") as fh:
                json.dump(scaler.to_dict(), fh, indent=2, sort_keys=True)
                fh.write("\n")
            out_paths.append(scaler_file)
            _log(
                log,
                f"{family}: train {train_ds.n_instances} / test {test_ds.n_instances}"
                f" / holdout {held_scaled.n_instances} windows",
            )
    counters["warnings"] = tap.count

    outputs = hash_files(cfg.output_dir, out_paths)
    manifest.record_stage(stage, key, input_hashes, outputs, counters)
    manifest.save(cfg.output_dir)
    return StageResult(stage=stage, outputs=outputs, counters=counters)


def _load_split(cfg: ExperimentConfig, family: str, split: str, stage: str) -> WindowedDataset:
    ds_dir = cfg.output_dir / PREPROCESS_DIR / family / split
    _require_dir(ds_dir / "data.csv", stage, "run preprocess first")
    ds, _ = load_windowed_dataset(ds_dir)
    return ds


def load_scaler(cfg: ExperimentConfig, family: str) -> ScalerParams:
    path = cfg.output_dir / PREPROCESS_DIR / family / "scaler.json"
    with open(path, encoding="utf-8") as fh:
        return ScalerParams.from_dict(json.load(fh))


def run_train(cfg: ExperimentConfig, family: str, label: str, log: Log = None) -> StageResult:
    """Train one model family on one class's training windows."""
    stage = f"train/{family}/{label}"
    if family not in FAMILIES:
        raise StageError(stage, f"unknown family {family!r}; choose from {FAMILIES}")
    if label not in cfg.classes:
        raise StageError(stage, f"unknown class {label!r}; configured: {list(cfg.classes)}")

    train_ds = _load_split(cfg, family, "train", stage)
    class_ds = train_ds.for_class(label)
    if class_ds.n_instances == 0:
        raise StageError(stage, f"no training windows for class {label!r}")
    _log(log, f"{class_ds.n_instances} training windows for class {label}")

    seed = _model_seed(cfg, family, label)
    with _WarningTap(log) as tap:
        if family == "timegan":
            model_cfg = dataclasses.replace(cfg.timegan, seed=seed)
            model = build_timegan(model_cfg)
            history = train_timegan(model, class_ds)
            frame = pd.DataFrame(
                {
                    "epoch": np.arange(len(history["phase1"])),
                    "phase1": history["phase1"],
                    "phase2": history["phase2"],
                    "phase3_generator": history["phase3"]["generator"],
                    "phase3_autoencoder": history["phase3"]["autoencoder"],
                    "phase3_discriminator": history["phase3"]["discriminator"],
                }
            )
            epochs = model_cfg.epochs
        else:
            model_cfg = dataclasses.replace(cfg.dgan, seed=seed)
            model = build_dgan(model_cfg)
            history = train_dgan(model, class_ds)
            epochs = model_cfg.epochs
            frame = pd.DataFrame({"epoch": np.arange(epochs)})
            for k, v in history.items():
                per_epoch = np.asarray(v, dtype=np.float64).reshape(epochs, -1)
                frame[k] = per_epoch.mean(axis=1)

        ckpt = checkpoint_path(cfg, family, label)
        save_checkpoint(model, ckpt)
        hist_file = history_path(cfg, family, label)
        hist_file.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(hist_file, index=False)

    assert len(frame) == epochs
    counters = {"warnings": tap.count, "epochs": epochs}
    outputs = hash_files(cfg.output_dir, [ckpt, hist_file])
    inputs = hash_files(
        cfg.output_dir,
        _dataset_files(cfg.output_dir / PREPROCESS_DIR / family / "train"),
    )
    manifest = RunManifest.open_or_create(cfg.output_dir, cfg.to_json_dict())
    manifest.record_stage(stage, dict_digest({"seed": seed}), inputs, outputs, counters)
    manifest.save(cfg.output_dir)
    _log(log, f"checkpoint written to {ckpt}")
    return StageResult(stage=stage, outputs=outputs, counters=counters, payload=ckpt)


def _generate_from(model, n: int, seed: int) -> WindowedDataset:
    if isinstance(model, TimeganModel):
        return generate_timegan(model, n, seed=seed)
    if isinstance(model, DganModel):
        return generate_dgan(model, n, seed=seed)
    raise TypeError(f"not a generative model: {type(model).__name__}")


def _family_of(model) -> str:
    return "timegan" if isinstance(model, TimeganModel) else "dgan"


def run_generate(
    cfg: ExperimentConfig,
    checkpoint: str | Path,
    n: Optional[int] = None,
    seed: Optional[int] = None,
    log: Log = None,
) -> StageResult:
    """Sample a synthetic dataset from a checkpoint and persist it.

    The default count matches the real per-class training window count, so
    transfer experiments compare like-for-like.
    """
    stage = "generate"
    checkpoint = Path(checkpoint)
    if not checkpoint.exists():
        raise StageError(stage, f"checkpoint not found: {checkpoint}")
    model = load_checkpoint(checkpoint)
    family = _family_of(model)
    label = model.class_label
    if label is None:
        raise StageError(stage, f"{checkpoint} was never trained; it has no class label")
    stage = f"generate/{family}/{label}"

    if n is None:
        train_ds = _load_split(cfg, family, "train", stage)
        n = train_ds.for_class(label).n_instances
        _log(log, f"defaulting to the real training count: {n}")
    if seed is None:
        seed = derive_seed(cfg.seed, "generate", family, label)

    with _WarningTap(log) as tap:
        synth = _generate_from(model, n, seed)
    out_dir = synthetic_dir(cfg, family, label)
    meta = {
        "family": family,
        "class": label,
        "seed": seed,
        "count": n,
        "checkpoint_sha256": file_sha256(checkpoint),
    }
    save_windowed_dataset(synth, out_dir, meta=meta)

    counters = {"warnings": tap.count, "instances": n}
    outputs = hash_files(cfg.output_dir, _dataset_files(out_dir))
    manifest = RunManifest.open_or_create(cfg.output_dir, cfg.to_json_dict())
    manifest.record_stage(
        stage,
        dict_digest({"seed": seed, "n": n, "checkpoint": meta["checkpoint_sha256"]}),
        {checkpoint.name: meta["checkpoint_sha256"]},
        outputs,
        counters,
    )
    manifest.save(cfg.output_dir)
    _log(log, f"{n} synthetic windows written to {out_dir}")
    return StageResult(stage=stage, outputs=outputs, counters=counters, payload=out_dir)


def _classifier_cfg(cfg: ExperimentConfig, seed: int):
    return dataclasses.replace(cfg.classifier, seed=seed)


def _baseline_summary(cfg: ExperimentConfig, log: Log = None):
    """Baseline classifier repeats on the plain-overlap train/test split."""
    stage = "baseline"
    train_ds = _load_split(cfg, "dgan", "train", stage)
    test_ds = _load_split(cfg, "dgan", "test", stage)

    def experiment(seed):
        return baseline(train_ds, test_ds, _classifier_cfg(cfg, seed))

    return repeat_protocol(
        experiment, n_runs=cfg.n_runs, base_seed=derive_seed(cfg.seed, "baseline")
    )


def run_baseline(cfg: ExperimentConfig, log: Log = None) -> StageResult:
    """Train-on-real / test-on-real reference performance."""
    stage = "baseline"
    with _WarningTap(log) as tap:
        summary = _baseline_summary(cfg, log)
    eval_dir = cfg.output_dir / EVAL_DIR
    eval_dir.mkdir(parents=True, exist_ok=True)
    path = eval_dir / "baseline.json"
    payload = {
        "stats": {k: list(v) for k, v in summary.stats.items()},
        "samples": summary.samples,
        "seeds": list(summary.seeds),
        "n_runs": cfg.n_runs,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for name, (mean, std) in summary.stats.items():
        _log(log, f"{name}: {mean:.3f} +/- {std:.3f}")

    counters = {"warnings": tap.count}
    outputs = hash_files(cfg.output_dir, [path])
    manifest = RunManifest.open_or_create(cfg.output_dir, cfg.to_json_dict())
    manifest.record_stage(stage, dict_digest({"n_runs": cfg.n_runs}), {}, outputs, counters)
    manifest.save(cfg.output_dir)
    return StageResult(stage=stage, outputs=outputs, counters=counters, payload=summary)


def _evaluate_class(cfg, family, label, model, n_c, train_all, holdout_all,
                    persisted_ds, disc_cfg, eval_dir):
    train_c = train_all.for_class(label)
    holdout_c = holdout_all.for_class(label)

    def experiment(seed):
        synth = _generate_from(model, n_c, derive_seed(seed, "synth"))
        return {
            "stat_distance": stat_distance(train_c, synth),
            "mmd": mmd(train_c, synth),
            "privacy": privacy_score(synth, train_c, holdout_c),
            "disc_score": discriminative_score(
                train_c, synth, holdout_c,
                seed=derive_seed(seed, "disc"), cfg=disc_cfg,
            ),
        }

    summary = repeat_protocol(
        experiment,
        n_runs=cfg.n_runs,
        base_seed=derive_seed(cfg.seed, "evaluate", family, label),
    )
    projection = pca_compare(
        holdout_c, persisted_ds, seed=derive_seed(cfg.seed, "pca", family, label)
    )
    pca_path = write_pca_csv(projection, eval_dir / f"pca_{family}_{label}.csv")
    return summary, pca_path


def run_evaluate(
    cfg: ExperimentConfig,
    disc_cfg: DiscriminativeConfig = DiscriminativeConfig(),
    parallel_classes: bool = False,
    log: Log = None,
) -> StageResult:
    """Per-class metric repeats plus pooled transfer experiments.

    Each repeat draws a fresh synthetic sample from the trained
    checkpoints, so the reported stds reflect generation variability as
    well as metric seeding. The persisted synthetic sets fix the per-class
    sample counts and feed the PCA exports. With parallel_classes the
    per-class work runs in a thread pool; results keep their order, but
    bit-exact repeatability is only promised single-threaded.
    """
    stage = "evaluate"
    eval_dir = cfg.output_dir / EVAL_DIR
    data: dict[str, dict[str, WindowedDataset]] = {}
    models: dict[tuple[str, str], object] = {}
    synth_counts: dict[str, int] = {}
    persisted: dict[tuple[str, str], WindowedDataset] = {}

    missing_synth = []
    for family in FAMILIES:
        data[family] = {
            split: _load_split(cfg, family, split, stage)
            for split in ("train", "test", "holdout")
        }
        for label in cfg.classes:
            sdir = synthetic_dir(cfg, family, label)
            if not (sdir / "data.csv").exists():
                missing_synth.append(f"{family}/{label}")
                continue
            ds, _meta = load_windowed_dataset(sdir)
            persisted[(family, label)] = ds
            synth_counts[f"{family}/{label}"] = ds.n_instances
    if missing_synth:
        have = sorted(f"{f}/{c}" for (f, c) in persisted)
        raise StageError(
            stage,
            f"missing synthetic sets for {missing_synth}; present: {have or 'none'}; "
            "run generate for every class and family first",
        )
    for family in FAMILIES:
        for label in cfg.classes:
            ckpt = checkpoint_path(cfg, family, label)
            if not ckpt.exists():
                raise StageError(stage, f"missing checkpoint {ckpt}; run train first")
            models[(family, label)] = load_checkpoint(ckpt)

    per_class: dict[str, dict[str, tuple[float, float]]] = {}
    pooled: dict[str, dict[str, tuple[float, float]]] = {}
    seeds: dict[str, list[int]] = {}
    out_paths: list[Path] = []

    with _WarningTap(log) as tap:
        for family in FAMILIES:
            train_all = data[family]["train"]
            holdout_all = data[family]["holdout"]

            def class_job(label, family=family, train_all=train_all,
                          holdout_all=holdout_all):
                return _evaluate_class(
                    cfg, family, label, models[(family, label)],
                    synth_counts[f"{family}/{label}"], train_all, holdout_all,
                    persisted[(family, label)], disc_cfg, eval_dir,
                )

            if parallel_classes and len(cfg.classes) > 1:
                with ThreadPoolExecutor(max_workers=len(cfg.classes)) as pool:
                    futures = {lab: pool.submit(class_job, lab) for lab in cfg.classes}
                    results = {lab: fut.result() for lab, fut in futures.items()}
            else:
                results = {lab: class_job(lab) for lab in cfg.classes}

            for label in cfg.classes:
                key = f"{family}/{label}"
                summary, pca_path = results[label]
                per_class[key] = summary.stats
                seeds[key] = list(summary.seeds)
                out_paths.append(pca_path)
                _log(log, f"{key}: " + ", ".join(
                    f"{m}={v[0]:.3f}+/-{v[1]:.3f}" for m, v in summary.stats.items()
                ))

            def pooled_experiment(seed, family=family, train_all=train_all,
                                  holdout_all=holdout_all):
                synth_all = _concat_synth(cfg, models, family, seed, synth_counts)
                t_rts = trts(train_all, synth_all, _classifier_cfg(cfg, derive_seed(seed, "trts")))
                t_str = tstr(synth_all, holdout_all, _classifier_cfg(cfg, derive_seed(seed, "tstr")))
                out = {f"trts_{k}": v for k, v in t_rts.items()}
                out.update({f"tstr_{k}": v for k, v in t_str.items()})
                return out

            summary = repeat_protocol(
                pooled_experiment,
                n_runs=cfg.n_runs,
                base_seed=derive_seed(cfg.seed, "evaluate", family, "pooled"),
            )
            for exp in ("trts", "tstr"):
                pooled[f"{exp}/{family}"] = {
                    k.split("_", 1)[1]: v
                    for k, v in summary.stats.items()
                    if k.startswith(exp + "_")
                }
            seeds[f"pooled/{family}"] = list(summary.seeds)
            for exp in ("trts", "tstr"):
                stats = pooled[f"{exp}/{family}"]
                _log(log, f"{exp}/{family}: " + ", ".join(
                    f"{m}={v[0]:.3f}+/-{v[1]:.3f}" for m, v in stats.items()
                ))

        base_summary = _baseline_summary(cfg, log)
        pooled["baseline"] = base_summary.stats
        seeds["baseline"] = list(base_summary.seeds)
        _log(log, "baseline: " + ", ".join(
            f"{m}={v[0]:.3f}+/-{v[1]:.3f}" for m, v in base_summary.stats.items()
        ))

    report = MetricReport(
        per_class=per_class,
        pooled=pooled,
        baseline={k: v[0] for k, v in base_summary.stats.items()},
        n_runs=cfg.n_runs,
        seeds=seeds,
    )

    eval_dir.mkdir(parents=True, exist_ok=True)
    report_path = eval_dir / "report.json"
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "metrics": report.to_dict(),
                "synthetic_counts": synth_counts,
                "families": list(FAMILIES),
                "classes": list(cfg.classes),
            },
            fh, indent=2, sort_keys=True,
        )
        fh.write("\n")
    tables = render_tables(report, synth_counts, families=FAMILIES, classes=cfg.classes)
    tables_path = eval_dir / "tables.txt"
    tables_path.write_text(tables, encoding="utf-8")
    out_paths.extend([report_path, tables_path])

    counters = {"warnings": tap.count}
    outputs = hash_files(cfg.output_dir, out_paths)
    manifest = RunManifest.open_or_create(cfg.output_dir, cfg.to_json_dict())
    manifest.record_stage(
        stage, dict_digest({"n_runs": cfg.n_runs, "seed": cfg.seed}), {}, outputs, counters
    )
    manifest.save(cfg.output_dir)
    return StageResult(stage=stage, outputs=outputs, counters=counters, payload=(report, tables))


def _concat_synth(cfg, models, family, seed, synth_counts) -> WindowedDataset:
    from ..pipeline import concat_datasets

    parts = []
    for label in cfg.classes:
        n = synth_counts[f"{family}/{label}"]
        parts.append(
            _generate_from(models[(family, label)], n, derive_seed(seed, "synth", label))
        )
    return concat_datasets(parts)


def run_report(cfg: ExperimentConfig, log: Log = None) -> StageResult:
    """Re-render tables and draw figures from persisted evaluation outputs."""
    stage = "report"
    eval_dir = cfg.output_dir / EVAL_DIR
    report_path = eval_dir / "report.json"
    _require_dir(report_path, stage, "run evaluate first")
    with open(report_path, encoding="utf-8") as fh:
        payload = json.load(fh)
    report = MetricReport.from_dict(payload["metrics"])
    synth_counts = payload.get("synthetic_counts", {})
    families = tuple(payload.get("families", list(FAMILIES)))
    classes = tuple(payload.get("classes", list(cfg.classes)))

    tables = render_tables(report, synth_counts, families=families, classes=classes)
    tables_path = eval_dir / "tables.txt"
    tables_path.write_text(tables, encoding="utf-8")
    out_paths = [tables_path]

    fig_dir = eval_dir / "figures"
    for family in families:
        for label in classes:
            pca_csv = eval_dir / f"pca_{family}_{label}.csv"
            if pca_csv.exists():
                out_paths.append(
                    plot_pca(pca_csv, fig_dir / f"pca_{family}_{label}.png",
                             title=f"{family} {label}")
                )
            hist_csv = history_path(cfg, family, label)
            if hist_csv.exists():
                out_paths.append(
                    plot_history(hist_csv, fig_dir / f"loss_{family}_{label}.png",
                                 title=f"{family} {label} training loss")
                )

    counters: dict[str, int] = {"figures": sum(1 for p in out_paths if p.suffix == ".png")}
    outputs = hash_files(cfg.output_dir, out_paths)
    manifest = RunManifest.open_or_create(cfg.output_dir, cfg.to_json_dict())
    manifest.record_stage(stage, dict_digest({"report": True}), {}, outputs, counters)
    manifest.save(cfg.output_dir)
    _log(log, f"tables and {counters['figures']} figure(s) under {eval_dir}")
    return StageResult(stage=stage, outputs=outputs, counters=counters, payload=tables)
