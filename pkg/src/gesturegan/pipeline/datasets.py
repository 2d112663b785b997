"""Windowed dataset container and its on-disk CSV format.

A windowed dataset is the common currency between the pipeline, the
generative models and the metrics: a ``(N, W, F)`` tensor of windows with
one class label per window, plus a flag telling whether values have been
min-max scaled into [0, 1].

On disk a dataset is a directory with three files:

* ``data.csv``    -- columns ``instance,timestep,<feature...>``
* ``labels.csv``  -- columns ``instance,label``
* ``meta.json``   -- free-form metadata (window config, scaler params, seeds...)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import pandas as pd

from gesturegan.errors import DataFormatError

FEATURE_NAMES = ("acc_x", "acc_y", "acc_z", "gyr_x", "gyr_y", "gyr_z")


def _feature_columns(n_features: int) -> list[str]:
    if n_features == len(FEATURE_NAMES):
        return list(FEATURE_NAMES)
    return [f"f{i}" for i in range(n_features)]


@dataclass(frozen=True)
class WindowedDataset:
    """Tensor of fixed-length windows with aligned class labels.

    ``data`` has shape (instances, timesteps, features); ``labels`` has one
    entry per instance.  ``scaled`` records whether values live in [0, 1].
    """

    data: np.ndarray
    labels: np.ndarray
    scaled: bool = False

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=object)
        if data.ndim != 3:
            raise DataFormatError(f"data must be (N, W, F), got shape {data.shape}")
        if labels.shape != (data.shape[0],):
            raise DataFormatError(
                f"labels shape {labels.shape} does not match instance count {data.shape[0]}"
            )
        if data.size and not np.isfinite(data).all():
            bad = np.argwhere(~np.isfinite(data))[0]
            raise DataFormatError(
                f"non-finite value at instance {bad[0]}, timestep {bad[1]}, feature {bad[2]}"
            )
        if self.scaled and data.size and (data.min() < 0.0 or data.max() > 1.0):
            raise DataFormatError("scaled dataset has entries outside [0, 1]")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "labels", labels)

    @property
    def n_instances(self) -> int:
        return self.data.shape[0]

    @property
    def window_size(self) -> int:
        return self.data.shape[1]

    @property
    def n_features(self) -> int:
        return self.data.shape[2]

    def classes(self) -> list[str]:
        return sorted(set(self.labels.tolist()))

    def class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for lab in self.labels.tolist():
            counts[lab] = counts.get(lab, 0) + 1
        return counts

    def subset(self, indices) -> "WindowedDataset":
        indices = np.asarray(indices, dtype=int)
        return replace(self, data=self.data[indices], labels=self.labels[indices])

    def for_class(self, label: str) -> "WindowedDataset":
        mask = np.array([lab == label for lab in self.labels.tolist()])
        return replace(self, data=self.data[mask], labels=self.labels[mask])

    def flattened(self) -> np.ndarray:
        """Windows as (N, W*F) row vectors (temporal dimension collapsed)."""
        return self.data.reshape(self.n_instances, -1)


def concat_datasets(parts: list[WindowedDataset]) -> WindowedDataset:
    if not parts:
        raise ValueError("nothing to concatenate")
    scaled = parts[0].scaled
    if any(p.scaled != scaled for p in parts):
        raise DataFormatError("cannot concatenate scaled with unscaled datasets")
    shapes = {(p.window_size, p.n_features) for p in parts}
    if len(shapes) != 1:
        raise DataFormatError(f"window shapes differ: {sorted(shapes)}")
    return WindowedDataset(
        data=np.concatenate([p.data for p in parts], axis=0),
        labels=np.concatenate([p.labels for p in parts], axis=0),
        scaled=scaled,
    )


def save_windowed_dataset(ds: WindowedDataset, out_dir: str | Path, meta: dict | None = None) -> Path:
    """Persist a dataset as data.csv / labels.csv / meta.json under ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cols = _feature_columns(ds.n_features)

    n, w, f = ds.data.shape
    frame = pd.DataFrame(ds.data.reshape(n * w, f), columns=cols)
    frame.insert(0, "timestep", np.tile(np.arange(w), n))
    frame.insert(0, "instance", np.repeat(np.arange(n), w))
    frame.to_csv(out_dir / "data.csv", index=False)

    pd.DataFrame({"instance": np.arange(n), "label": ds.labels}).to_csv(
        out_dir / "labels.csv", index=False
    )

    meta = dict(meta or {})
    meta["scaled"] = ds.scaled
    meta["shape"] = [n, w, f]
    with open(out_dir / "meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out_dir


def load_windowed_dataset(in_dir: str | Path) -> tuple[WindowedDataset, dict]:
    """Load a dataset directory written by :func:`save_windowed_dataset`."""
    in_dir = Path(in_dir)
    for name in ("data.csv", "labels.csv", "meta.json"):
        if not (in_dir / name).exists():
            raise DataFormatError(f"{in_dir}: missing {name}")
    with open(in_dir / "meta.json", encoding="utf-8") as fh:
        meta = json.load(fh)
    n, w, f = meta["shape"]

    frame = pd.read_csv(in_dir / "data.csv", float_precision="round_trip")
    expected = ["instance", "timestep"] + _feature_columns(f)
    if list(frame.columns) != expected:
        raise DataFormatError(f"{in_dir}/data.csv: unexpected columns {list(frame.columns)}")
    if len(frame) != n * w:
        raise DataFormatError(f"{in_dir}/data.csv: expected {n * w} rows, found {len(frame)}")
    data = frame[_feature_columns(f)].to_numpy(dtype=np.float64).reshape(n, w, f)

    labels_frame = pd.read_csv(in_dir / "labels.csv", dtype={"label": str})
    if len(labels_frame) != n:
        raise DataFormatError(f"{in_dir}/labels.csv: expected {n} rows, found {len(labels_frame)}")
    labels = labels_frame["label"].to_numpy(dtype=object)

    ds = WindowedDataset(data=data, labels=labels, scaled=bool(meta.get("scaled", False)))
    return ds, meta
