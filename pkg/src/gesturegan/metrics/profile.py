"""Summary-statistic fingerprints and the distance between them.

A profile concatenates {min, max, mean, std} blocks computed at three
granularities: once globally, once per feature, and once per timestep
(across instances and features). For 100-step, 6-feature windows the
vector has length 4 + 4*6 + 4*100 = 428. Block layout is
feature-major / timestep-major; std is the population std (ddof=0).
Absolute distances are comparable only between profiles built here.
"""

import numpy as np

from ..errors import DataFormatError
from ..pipeline.datasets import WindowedDataset


def _stats(values: np.ndarray) -> list[float]:
    return [
        float(values.min()),
        float(values.max()),
        float(values.mean()),
        float(values.std()),
    ]


def stat_profile(ds: WindowedDataset) -> np.ndarray:
    """Return the ordered statistics vector for a dataset."""
    if ds.n_instances == 0:
        raise DataFormatError("cannot profile an empty dataset")
    x = ds.data
    parts = _stats(x)
    for f in range(ds.n_features):
        parts.extend(_stats(x[:, :, f]))
    for t in range(ds.window_size):
        parts.extend(_stats(x[:, t, :]))
    out = np.asarray(parts, dtype=np.float64)
    if not np.all(np.isfinite(out)):
        bad = int(np.flatnonzero(~np.isfinite(out))[0])
        raise DataFormatError(f"non-finite profile entry at position {bad}")
    return out


def stat_distance(real: WindowedDataset, synth: WindowedDataset) -> float:
    """Euclidean norm of the difference between two profiles.

    Symmetric, non-negative, zero exactly when the profiles agree.
    """
    pa = stat_profile(real)
    pb = stat_profile(synth)
    if pa.shape != pb.shape:
        raise DataFormatError(
            f"profile lengths differ: {pa.shape[0]} vs {pb.shape[0]}"
        )
    return float(np.linalg.norm(pa - pb))
