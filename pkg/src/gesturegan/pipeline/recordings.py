"""Raw gesture recordings and their CSV loader.

A recording file is UTF-8 CSV with header
``acc_x,acc_y,acc_z,gyr_x,gyr_y,gyr_z`` and one row per sample at the
device sampling rate.  The class label comes from the parent directory
name (``01a/rec_0001.csv``) or from an optional JSON manifest that maps
relative file paths to labels.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gesturegan.errors import DataFormatError
from gesturegan.pipeline.datasets import FEATURE_NAMES


@dataclass(frozen=True)
class RawRecording:
    """One gesture performance: (T, 6) samples plus a class label."""

    label: str
    samples: np.ndarray
    sample_rate: float = 100.0
    source_id: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 2 or samples.shape[1] != len(FEATURE_NAMES):
            raise DataFormatError(
                f"samples must be (T, {len(FEATURE_NAMES)}), got shape {samples.shape}"
            )
        if samples.shape[0] < 1:
            raise DataFormatError("recording must contain at least one sample")
        if not np.isfinite(samples).all():
            row = int(np.argwhere(~np.isfinite(samples).all(axis=1))[0][0])
            raise DataFormatError(f"non-finite sample at row {row}")
        if self.sample_rate <= 0:
            raise DataFormatError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.shape[0]


def _read_recording_file(path: Path, rel: str, label: str, sample_rate: float) -> RawRecording:
    rows: list[list[float]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataFormatError(f"{rel}: empty file")
        if [h.strip() for h in header] != list(FEATURE_NAMES):
            raise DataFormatError(
                f"{rel}: line 1: expected header {','.join(FEATURE_NAMES)}, got {','.join(header)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(FEATURE_NAMES):
                raise DataFormatError(
                    f"{rel}: line {lineno}: expected {len(FEATURE_NAMES)} columns, got {len(row)}"
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise DataFormatError(f"{rel}: line {lineno}: non-numeric value") from None
    if not rows:
        raise DataFormatError(f"{rel}: no data rows")
    return RawRecording(
        label=label,
        samples=np.asarray(rows, dtype=np.float64),
        sample_rate=sample_rate,
        source_id=rel,
    )


def load_recordings(
    root_path: str | Path,
    manifest: str | Path | None = None,
    classes: list[str] | None = None,
    sample_rate: float = 100.0,
) -> list[RawRecording]:
    """Load every ``*.csv`` recording under ``root_path``.

    Files are visited in lexicographic order of their relative path, so the
    returned list is deterministic.  Labels come from the manifest when one
    is given (falling back to the parent directory name for unlisted
    files).  When ``classes`` is given, any other label is an error.
    """
    root = Path(root_path)
    if not root.is_dir():
        raise DataFormatError(f"not a directory: {root}")

    labels_by_file: dict[str, str] = {}
    if manifest is not None:
        with open(manifest, encoding="utf-8") as fh:
            mapping = json.load(fh)
        if not isinstance(mapping, dict):
            raise DataFormatError(f"{manifest}: manifest must map file paths to labels")
        labels_by_file = {str(k): str(v) for k, v in mapping.items()}

    files = sorted(root.rglob("*.csv"), key=lambda p: p.relative_to(root).as_posix())
    if not files:
        warnings.warn(f"no recording files found under {root}")
        return []

    recordings = []
    for path in files:
        rel = path.relative_to(root).as_posix()
        label = labels_by_file.get(rel, path.parent.name)
        if classes is not None and label not in classes:
            raise DataFormatError(
                f"{rel}: unknown label {label!r}; accepted labels: {sorted(classes)}"
            )
        recordings.append(_read_recording_file(path, rel, label, sample_rate))
    return recordings
