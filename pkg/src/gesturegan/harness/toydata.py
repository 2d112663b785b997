"""Synthetic 6-channel waveform corpus for end-to-end exercises.

Four signal families (sine, square, chirp, sawtooth) sampled at 100 Hz,
written in the same CSV layout as real recordings. Each class carries a
distinct per-channel gain profile and baseline level on top of its
waveform shape, and every recording draws its own fundamental frequency,
phases, offsets, and amplitude jitter, so the corpus has genuine
within-class variation while staying cleanly separable.
"""

import csv
from pathlib import Path

import numpy as np
from scipy import signal

from ..pipeline.recordings import FEATURE_NAMES
from ..seeding import derive_seed

TOY_CLASSES = ("sine", "square", "chirp", "sawtooth")

# per-class channel gain fingerprints (6 channels each)
_GAINS = {
    "sine": np.array([1.0, 0.9, 0.8, 0.7, 0.6, 0.5]),
    "square": np.array([0.5, 0.6, 0.7, 0.8, 0.9, 1.0]),
    "chirp": np.array([1.0, 0.5, 1.0, 0.5, 1.0, 0.5]),
    "sawtooth": np.array([0.75, 0.75, 0.75, 0.75, 0.75, 0.75]),
}

# per-class resting baseline per channel, like sensors mounted in
# different orientations; sign patterns are mutually distant so the
# classes stay separable even in summary statistics
_LEVELS = {
    "sine": 0.5 * np.array([1, 1, 1, -1, -1, -1]),
    "square": 0.5 * np.array([-1, -1, -1, 1, 1, 1]),
    "chirp": 0.5 * np.array([1, -1, 1, -1, 1, -1]),
    "sawtooth": 0.5 * np.array([-1, 1, -1, 1, -1, 1]),
}


def _waveform(label: str, t: np.ndarray, f0: float, phase: float) -> np.ndarray:
    arg = 2.0 * np.pi * f0 * t + phase
    if label == "sine":
        return np.sin(arg)
    if label == "square":
        return signal.square(arg)
    if label == "sawtooth":
        return signal.sawtooth(arg)
    if label == "chirp":
        # sweep from f0 up to roughly twice f0 across the recording
        return signal.chirp(t, f0=f0, f1=2.0 * f0, t1=t[-1], phi=np.degrees(phase))
    raise ValueError(f"unknown toy class {label!r}")


def toy_recording(label: str, length: int, seed: int, sample_rate: float = 100.0,
                  noise: float = 0.02) -> np.ndarray:
    """One (length, 6) toy recording for the given class."""
    if label not in TOY_CLASSES:
        raise ValueError(f"unknown toy class {label!r}; choose from {TOY_CLASSES}")
    rng = np.random.default_rng(seed)
    t = np.arange(length) / sample_rate
    f0 = rng.uniform(2.5, 4.5)
    base_phase = rng.uniform(0.0, 2.0 * np.pi)
    # every recording draws one of two loudness modes (soft or emphatic
    # performance) with jitter; covering both lobes of the resulting
    # amplitude distribution is what separates generators that model
    # per-instance range from ones that collapse it
    scale = rng.choice((0.6, 1.4)) * rng.uniform(0.92, 1.08)
    gains = scale * _GAINS[label] * rng.uniform(0.9, 1.1, size=6)
    offsets = _LEVELS[label] + rng.uniform(-0.15, 0.15, size=6)
    channels = []
    for k in range(6):
        wave = _waveform(label, t, f0, base_phase + 0.4 * k)
        channels.append(gains[k] * wave + offsets[k])
    out = np.stack(channels, axis=1)
    out += noise * rng.standard_normal(out.shape)
    return out


def write_toy_corpus(
    root: str | Path,
    n_per_class: int = 10,
    length_range: tuple[int, int] = (240, 320),
    seed: int = 0,
    sample_rate: float = 100.0,
    noise: float = 0.02,
    classes: tuple[str, ...] = TOY_CLASSES,
) -> list[Path]:
    """Write the corpus as <root>/<class>/rec_NNN.csv files.

    Deterministic for a given seed. Returns the written paths.
    """
    root = Path(root)
    lo, hi = length_range
    if lo < 2 or hi < lo:
        raise ValueError(f"bad length range {length_range}")
    paths = []
    for label in classes:
        class_dir = root / label
        class_dir.mkdir(parents=True, exist_ok=True)
        for i in range(n_per_class):
            rec_seed = derive_seed(seed, "toy", label, i)
            rng = np.random.default_rng(derive_seed(rec_seed, "length"))
            length = int(rng.integers(lo, hi + 1))
            samples = toy_recording(label, length, rec_seed, sample_rate, noise)
            path = class_dir / f"rec_{i:03d}.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(FEATURE_NAMES)
                writer.writerows(samples.tolist())
            paths.append(path)
    return paths
