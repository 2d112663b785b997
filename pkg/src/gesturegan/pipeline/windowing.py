"""Sliding-window segmentation of recordings into fixed-length windows."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from gesturegan.errors import ConfigError
from gesturegan.pipeline.datasets import WindowedDataset
from gesturegan.pipeline.recordings import RawRecording


@dataclass(frozen=True)
class WindowConfig:
    """Window length in timesteps plus the overlap fraction between
    consecutive windows.  The stride is ``max(1, round(W * (1 - overlap)))``.
    """

    window_size: int = 100
    overlap: float = 0.5

    def __post_init__(self):
        if self.window_size < 2:
            raise ConfigError(f"window_size must be >= 2, got {self.window_size}")
        if not 0.0 <= self.overlap < 1.0:
            raise ConfigError(f"overlap must be in [0, 1), got {self.overlap}")

    @property
    def step(self) -> int:
        return max(1, round(self.window_size * (1.0 - self.overlap)))


@dataclass(frozen=True)
class Window:
    values: np.ndarray  # (window_size, features)
    label: str


def sliding_window(rec: RawRecording, cfg: WindowConfig) -> list[Window]:
    """Segment one recording; trailing samples that do not fill a window
    are dropped.  A recording shorter than the window degrades to an empty
    list with a warning rather than an error.
    """
    n = len(rec)
    w, step = cfg.window_size, cfg.step
    if n < w:
        warnings.warn(
            f"recording {rec.source_id or '<unnamed>'} has {n} samples, "
            f"shorter than window size {w}; producing no windows"
        )
        return []
    count = (n - w) // step + 1
    return [Window(values=rec.samples[i * step : i * step + w], label=rec.label) for i in range(count)]


def dataset_from_windows(windows: list[Window], scaled: bool = False) -> WindowedDataset:
    if not windows:
        raise ValueError("no windows to assemble; check recording lengths against the window size")
    data = np.stack([w.values for w in windows])
    labels = np.array([w.label for w in windows], dtype=object)
    return WindowedDataset(data=data, labels=labels, scaled=scaled)


def window_recordings(recordings: list[RawRecording], cfg: WindowConfig) -> WindowedDataset:
    """Window every recording in order and merge the results.

    Recording order is preserved, so the output is deterministic for a
    deterministic recording list.
    """
    windows: list[Window] = []
    for rec in recordings:
        windows.extend(sliding_window(rec, cfg))
    return dataset_from_windows(windows)
