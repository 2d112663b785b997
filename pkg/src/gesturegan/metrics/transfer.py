"""Cross-domain classifier experiments: baseline, TRTS, and TSTR.

All three train the same 1-D CNN under the same config; they differ only
in which side is real. TRTS trains on real and tests on synthetic (a
realism probe); TSTR trains on synthetic and tests on real (a diversity
probe that collapses when the generator does).
"""

import warnings

import numpy as np

from ..pipeline.datasets import WindowedDataset
from ..seeding import derive_seed
from .classifier import Cnn1dConfig, evaluate_classifier, train_cnn1d


def rebalance_classes(ds: WindowedDataset, seed: int) -> WindowedDataset:
    """Downsample every class to the smallest class count, seeded."""
    counts = ds.class_counts()
    m = min(counts.values())
    rng = np.random.default_rng(derive_seed(seed, "rebalance"))
    keep: list[int] = []
    for cls in ds.classes():
        idx = np.flatnonzero(ds.labels == cls)
        keep.extend(rng.permutation(idx)[:m].tolist())
    return ds.subset(np.sort(np.asarray(keep)))


def _check_synth_balance(synth_all: WindowedDataset, seed: int) -> WindowedDataset:
    counts = synth_all.class_counts()
    if len(counts) > 1 and max(counts.values()) > 2 * min(counts.values()):
        warnings.warn(
            f"synthetic class counts are imbalanced ({counts}); "
            "downsampling to the smallest class",
            UserWarning,
            stacklevel=3,
        )
        return rebalance_classes(synth_all, seed)
    return synth_all


def _run(train: WindowedDataset, test: WindowedDataset, cfg: Cnn1dConfig) -> dict[str, float]:
    classes = sorted(set(train.classes()) | set(test.classes()))
    clf = train_cnn1d(train, cfg, classes=classes)
    return evaluate_classifier(clf, test)


def baseline(real_train: WindowedDataset, real_test: WindowedDataset, cfg: Cnn1dConfig) -> dict[str, float]:
    """Train on real, test on real: the reference performance."""
    return _run(real_train, real_test, cfg)


def trts(real_train: WindowedDataset, synth_all: WindowedDataset, cfg: Cnn1dConfig) -> dict[str, float]:
    """Train on real, test on synthetic."""
    return _run(real_train, _check_synth_balance(synth_all, cfg.seed), cfg)


def tstr(synth_all: WindowedDataset, real_eval: WindowedDataset, cfg: Cnn1dConfig) -> dict[str, float]:
    """Train on synthetic, test on held-out real."""
    return _run(_check_synth_balance(synth_all, cfg.seed), real_eval, cfg)
