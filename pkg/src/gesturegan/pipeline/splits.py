"""Deterministic, stratified splits at recording and window granularity.

The held-out split works on whole recordings (never windows) so that no
window derived from a held-out recording can appear in training.  The
train/test split works on windows of an already scaled dataset and is
reserved for the baseline classifier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gesturegan.errors import ConfigError, DataFormatError
from gesturegan.pipeline.datasets import WindowedDataset
from gesturegan.pipeline.recordings import RawRecording


@dataclass(frozen=True)
class SplitSpec:
    holdout_fraction: float = 0.2
    test_fraction: float = 0.2
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        for name in ("holdout_fraction", "test_fraction"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigError(f"{name} must be in (0, 1), got {value}")


def _per_class_indices(labels: list[str]) -> dict[str, list[int]]:
    by_class: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    return by_class


def _held_count(n: int, fraction: float) -> int:
    # At least one held out, at least one kept.
    return min(n - 1, max(1, round(n * fraction)))


def stratified_split_indices(
    labels: list[str], fraction: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Split index set per class; returns (kept, held) in original order.

    Classes are visited in sorted label order so the draw sequence is
    deterministic for a given generator state.
    """
    by_class = _per_class_indices(labels)
    held: list[int] = []
    for lab in sorted(by_class):
        idx = by_class[lab]
        if len(idx) < 2:
            raise DataFormatError(
                f"class {lab!r} has a single element; stratified split needs at least 2"
            )
        perm = rng.permutation(len(idx))
        take = _held_count(len(idx), fraction)
        held.extend(idx[i] for i in perm[:take])
    held_set = set(held)
    held_arr = np.array(sorted(held), dtype=int)
    kept_arr = np.array([i for i in range(len(labels)) if i not in held_set], dtype=int)
    return kept_arr, held_arr


def holdout_split(
    recordings: list[RawRecording], spec: SplitSpec
) -> tuple[list[RawRecording], list[RawRecording]]:
    """Reserve a fraction of whole recordings for generative-model evaluation.

    Deterministic given the spec seed; stratified per class when enabled.
    """
    if not recordings:
        raise DataFormatError("no recordings to split")
    rng = np.random.default_rng(spec.seed)
    labels = [r.label for r in recordings]
    if spec.stratified:
        kept, held = stratified_split_indices(labels, spec.holdout_fraction, rng)
    else:
        if len(recordings) < 2:
            raise DataFormatError("need at least 2 recordings to split")
        perm = rng.permutation(len(recordings))
        take = _held_count(len(recordings), spec.holdout_fraction)
        held = np.array(sorted(perm[:take]), dtype=int)
        held_set = set(held.tolist())
        kept = np.array([i for i in range(len(recordings)) if i not in held_set], dtype=int)
    working = [recordings[i] for i in kept]
    heldout = [recordings[i] for i in held]
    return working, heldout


def shuffle_split(ds: WindowedDataset, spec: SplitSpec) -> tuple[WindowedDataset, WindowedDataset]:
    """Shuffle windows and split them into train/test, stratified by class.

    Requires a scaled dataset.  The test subset is reserved for baseline
    classification only.
    """
    if not ds.scaled:
        raise DataFormatError("shuffle_split expects a scaled dataset")
    if ds.n_instances < 2:
        raise DataFormatError("need at least 2 windows to split")
    rng = np.random.default_rng(spec.seed)
    labels = ds.labels.tolist()
    train_idx, test_idx = stratified_split_indices(labels, spec.test_fraction, rng)
    # Shuffle within each side so windows from one recording do not stay adjacent.
    train_idx = train_idx[rng.permutation(len(train_idx))]
    test_idx = test_idx[rng.permutation(len(test_idx))]
    return ds.subset(train_idx), ds.subset(test_idx)
