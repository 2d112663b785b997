from .config import (
    DEFAULT_CLASSES,
    FAMILIES,
    ExperimentConfig,
    config_from_dict,
    load_experiment_config,
    save_experiment_config,
)
from .manifest import RunManifest, file_sha256, hash_files
from .stages import (
    StageResult,
    checkpoint_path,
    history_path,
    run_baseline,
    run_evaluate,
    run_generate,
    run_preprocess,
    run_report,
    run_train,
    synthetic_dir,
)
from .toydata import TOY_CLASSES, toy_recording, write_toy_corpus

__all__ = [
    "DEFAULT_CLASSES",
    "FAMILIES",
    "ExperimentConfig",
    "config_from_dict",
    "load_experiment_config",
    "save_experiment_config",
    "RunManifest",
    "file_sha256",
    "hash_files",
    "StageResult",
    "checkpoint_path",
    "history_path",
    "run_baseline",
    "run_evaluate",
    "run_generate",
    "run_preprocess",
    "run_report",
    "run_train",
    "synthetic_dir",
    "TOY_CLASSES",
    "toy_recording",
    "write_toy_corpus",
]
