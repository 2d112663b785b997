"""Repeat-run aggregation and the assembled evaluation report."""

import warnings
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from ..seeding import derive_seed

# metric name -> (lower bound, upper bound); None means unbounded
_RANGES = {
    "stat_distance": (0.0, None),
    "mmd": (-1e-6, None),
    "privacy": (0.0, 1.0),
    "disc_score": (0.0, 0.5),
    "accuracy": (0.0, 1.0),
    "recall": (0.0, 1.0),
    "f1": (0.0, 1.0),
}


@dataclass(frozen=True)
class RepeatSummary:
    """Per-metric (mean, std) over seeded repeats, with the raw samples."""

    stats: dict[str, tuple[float, float]]
    samples: dict[str, list[float]]
    seeds: tuple[int, ...]


def repeat_seeds(base_seed: int, n_runs: int) -> tuple[int, ...]:
    return tuple(derive_seed(base_seed, "run", i) for i in range(n_runs))


def repeat_protocol(experiment, n_runs: int = 10, base_seed: int = 0) -> RepeatSummary:
    """Run ``experiment(seed)`` over derived seeds and aggregate.

    The experiment may return a scalar (reported under the key "value")
    or a mapping of metric names to scalars. Std uses the sample
    (n - 1) denominator; with a single run it is reported as 0 with a
    warning.
    """
    if n_runs < 1:
        raise ValueError(f"n_runs must be >= 1, got {n_runs}")
    if n_runs < 2:
        warnings.warn(
            "fewer than two runs; std is reported as 0", UserWarning, stacklevel=2
        )

    seeds = repeat_seeds(base_seed, n_runs)
    samples: dict[str, list[float]] = {}
    for i, seed in enumerate(seeds):
        out = experiment(seed)
        row = dict(out) if isinstance(out, Mapping) else {"value": out}
        if i == 0:
            samples = {k: [] for k in row}
        elif set(row) != set(samples):
            raise ValueError(
                f"run {i} returned metrics {sorted(row)} but earlier runs "
                f"returned {sorted(samples)}"
            )
        for k, v in row.items():
            samples[k].append(float(v))

    stats = {}
    for k, vals in samples.items():
        arr = np.asarray(vals, dtype=np.float64)
        std = float(arr.std(ddof=1)) if n_runs >= 2 else 0.0
        stats[k] = (float(arr.mean()), std)
    return RepeatSummary(stats=stats, samples=samples, seeds=seeds)


def _check_range(name: str, value: float, context: str) -> None:
    bounds = _RANGES.get(name)
    if bounds is None:
        return
    lo, hi = bounds
    if lo is not None and value < lo:
        raise ValueError(f"{context}: {name} = {value} below {lo}")
    if hi is not None and value > hi:
        raise ValueError(f"{context}: {name} = {value} above {hi}")


@dataclass(frozen=True)
class MetricReport:
    """Everything the evaluation stage measures, ready for serialization.

    per_class maps class -> metric -> (mean, std); pooled maps
    experiment ("trts" / "tstr") -> metric -> (mean, std); baseline is a
    single {accuracy, recall, f1} run.
    """

    per_class: dict[str, dict[str, tuple[float, float]]]
    pooled: dict[str, dict[str, tuple[float, float]]]
    baseline: dict[str, float]
    n_runs: int
    seeds: dict[str, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_runs < 1:
            raise ValueError("n_runs must be >= 1")
        for cls, metrics in self.per_class.items():
            for name, (mean, std) in metrics.items():
                if std < 0:
                    raise ValueError(f"class {cls}: {name} std is negative")
                _check_range(name, mean, f"class {cls}")
        for exp, metrics in self.pooled.items():
            for name, (mean, std) in metrics.items():
                if std < 0:
                    raise ValueError(f"{exp}: {name} std is negative")
                _check_range(name, mean, exp)
        for name, value in self.baseline.items():
            _check_range(name, value, "baseline")

    def to_dict(self) -> dict:
        return {
            "per_class": {
                cls: {k: list(v) for k, v in m.items()}
                for cls, m in self.per_class.items()
            },
            "pooled": {
                exp: {k: list(v) for k, v in m.items()}
                for exp, m in self.pooled.items()
            },
            "baseline": dict(self.baseline),
            "n_runs": self.n_runs,
            "seeds": {k: list(v) for k, v in self.seeds.items()},
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "MetricReport":
        return cls(
            per_class={
                c: {k: (float(v[0]), float(v[1])) for k, v in m.items()}
                for c, m in payload["per_class"].items()
            },
            pooled={
                e: {k: (float(v[0]), float(v[1])) for k, v in m.items()}
                for e, m in payload["pooled"].items()
            },
            baseline={k: float(v) for k, v in payload["baseline"].items()},
            n_runs=int(payload["n_runs"]),
            seeds={k: [int(s) for s in v] for k, v in payload.get("seeds", {}).items()},
        )
