"""Experiment configuration: one JSON file describing the whole workflow.

Schema (all keys optional except data_root and output_dir; unknown keys
are rejected at any level):

    {
      "data_root": "path/to/recordings",
      "output_dir": "path/to/outputs",
      "classes": ["01a", "02a", "03a", "03b"],
      "sample_rate": 100.0,
      "filter": {"order": 4, "cutoff_hz": 5.0, "mode": "zero_phase"},
      "windows": {
        "timegan": {"window_size": 100, "overlap": 0.99},
        "dgan": {"window_size": 100, "overlap": 0.5}
      },
      "split": {"holdout_fraction": 0.2, "test_fraction": 0.2,
                "seed": 0, "stratified": true},
      "timegan": { ...TimeganConfig fields... },
      "dgan": { ...DganConfig fields... },
      "classifier": { ...Cnn1dConfig fields... },
      "n_runs": 10,
      "seed": 0
    }

Relative data_root/output_dir are resolved against the directory holding
the config file.
"""

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError
from ..metrics.classifier import Cnn1dConfig
from ..models.doppelganger import DganConfig
from ..models.timegan import TimeganConfig
from ..pipeline.filtering import FilterSpec
from ..pipeline.splits import SplitSpec
from ..pipeline.windowing import WindowConfig

FAMILIES = ("timegan", "dgan")

DEFAULT_CLASSES = ("01a", "02a", "03a", "03b")


def _default_windows() -> dict[str, WindowConfig]:
    return {
        "timegan": WindowConfig(window_size=100, overlap=0.99),
        "dgan": WindowConfig(window_size=100, overlap=0.50),
    }


@dataclass(frozen=True)
class ExperimentConfig:
    data_root: Path
    output_dir: Path
    classes: tuple[str, ...] = DEFAULT_CLASSES
    sample_rate: float = 100.0
    filter_spec: FilterSpec = field(default_factory=FilterSpec)
    windows: dict[str, WindowConfig] = field(default_factory=_default_windows)
    split: SplitSpec = field(default_factory=SplitSpec)
    timegan: TimeganConfig = field(default_factory=TimeganConfig)
    dgan: DganConfig = field(default_factory=DganConfig)
    classifier: Cnn1dConfig = field(default_factory=Cnn1dConfig)
    n_runs: int = 10
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "data_root", Path(self.data_root))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ConfigError("classes must not be empty")
        if len(set(self.classes)) != len(self.classes):
            raise ConfigError(f"duplicate class labels in {self.classes}")
        if self.sample_rate <= 0:
            raise ConfigError(f"sample_rate must be positive, got {self.sample_rate}")
        if set(self.windows) != set(FAMILIES):
            raise ConfigError(
                f"windows must configure exactly {sorted(FAMILIES)}, "
                f"got {sorted(self.windows)}"
            )
        if self.n_runs < 1:
            raise ConfigError(f"n_runs must be >= 1, got {self.n_runs}")
        self.filter_spec.validate_against(self.sample_rate)
        if self.timegan.seq_len != self.windows["timegan"].window_size:
            raise ConfigError(
                f"timegan.seq_len {self.timegan.seq_len} must equal its window_size "
                f"{self.windows['timegan'].window_size}"
            )
        if self.dgan.seq_len != self.windows["dgan"].window_size:
            raise ConfigError(
                f"dgan.seq_len {self.dgan.seq_len} must equal its window_size "
                f"{self.windows['dgan'].window_size}"
            )
        if self.classifier.n_classes != len(self.classes):
            raise ConfigError(
                f"classifier.n_classes {self.classifier.n_classes} must equal the "
                f"number of classes {len(self.classes)}"
            )

    def to_json_dict(self) -> dict:
        return {
            "data_root": str(self.data_root),
            "output_dir": str(self.output_dir),
            "classes": list(self.classes),
            "sample_rate": self.sample_rate,
            "filter": dataclasses.asdict(self.filter_spec),
            "windows": {k: dataclasses.asdict(v) for k, v in self.windows.items()},
            "split": dataclasses.asdict(self.split),
            "timegan": dataclasses.asdict(self.timegan),
            "dgan": _jsonable(dataclasses.asdict(self.dgan)),
            "classifier": dataclasses.asdict(self.classifier),
            "n_runs": self.n_runs,
            "seed": self.seed,
        }


def _jsonable(d: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def _build_component(cls, payload, where: str):
    if not isinstance(payload, dict):
        raise ConfigError(f"{where}: expected an object, got {type(payload).__name__}")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(payload) - known)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {unknown}; accepted: {sorted(known)}")
    coerced = {k: tuple(v) if isinstance(v, list) else v for k, v in payload.items()}
    try:
        return cls(**coerced)
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


_TOP_LEVEL = {
    "data_root",
    "output_dir",
    "classes",
    "sample_rate",
    "filter",
    "windows",
    "split",
    "timegan",
    "dgan",
    "classifier",
    "n_runs",
    "seed",
}


def config_from_dict(payload: dict, base_dir: Path | None = None) -> ExperimentConfig:
    if not isinstance(payload, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = sorted(set(payload) - _TOP_LEVEL)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown}; accepted: {sorted(_TOP_LEVEL)}")
    for key in ("data_root", "output_dir"):
        if key not in payload:
            raise ConfigError(f"missing required key {key!r}")

    kwargs: dict = {}
    base = Path(base_dir) if base_dir is not None else None

    def resolve(p: str) -> Path:
        path = Path(p)
        if base is not None and not path.is_absolute():
            path = base / path
        return path

    kwargs["data_root"] = resolve(payload["data_root"])
    kwargs["output_dir"] = resolve(payload["output_dir"])
    if "classes" in payload:
        kwargs["classes"] = tuple(str(c) for c in payload["classes"])
    if "sample_rate" in payload:
        kwargs["sample_rate"] = float(payload["sample_rate"])
    if "filter" in payload:
        kwargs["filter_spec"] = _build_component(FilterSpec, payload["filter"], "filter")
    if "windows" in payload:
        w = payload["windows"]
        if not isinstance(w, dict):
            raise ConfigError("windows: expected an object keyed by model family")
        bad = sorted(set(w) - set(FAMILIES))
        if bad:
            raise ConfigError(f"windows: unknown famil{'y' if len(bad) == 1 else 'ies'} {bad}")
        kwargs["windows"] = {
            fam: _build_component(WindowConfig, w[fam], f"windows.{fam}") for fam in w
        }
        for fam in FAMILIES:
            kwargs["windows"].setdefault(fam, _default_windows()[fam])
    if "split" in payload:
        kwargs["split"] = _build_component(SplitSpec, payload["split"], "split")
    if "timegan" in payload:
        kwargs["timegan"] = _build_component(TimeganConfig, payload["timegan"], "timegan")
    if "dgan" in payload:
        kwargs["dgan"] = _build_component(DganConfig, payload["dgan"], "dgan")
    if "classifier" in payload:
        kwargs["classifier"] = _build_component(
            Cnn1dConfig, payload["classifier"], "classifier"
        )
    if "n_runs" in payload:
        kwargs["n_runs"] = int(payload["n_runs"])
    if "seed" in payload:
        kwargs["seed"] = int(payload["seed"])
    return ExperimentConfig(**kwargs)


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return config_from_dict(payload, base_dir=path.parent)


def save_experiment_config(cfg: ExperimentConfig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cfg.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
