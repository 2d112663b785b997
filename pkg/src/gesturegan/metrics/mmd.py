"""Maximum mean discrepancy between two window samples.

Biased V-statistic with an exponentiated-quadratic kernel
k(a, b) = exp(-||a - b||^2 / (2 sigma^2)). Windows are flattened so each
instance is a single vector. When no bandwidth is given, sigma is the
median pairwise distance over the pooled sample; that heuristic needs at
least two instances per side, an explicit bandwidth does not.
"""

import warnings

import numpy as np
from scipy.spatial.distance import cdist, pdist

from ..pipeline.datasets import WindowedDataset

FALLBACK_BANDWIDTH = 1.0


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, WindowedDataset):
        return x.flattened()
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D sample matrix, got shape {arr.shape}")
    return arr


def median_bandwidth(pooled: np.ndarray) -> float:
    """Median pairwise Euclidean distance, with a fallback when it is 0."""
    med = float(np.median(pdist(pooled)))
    if med == 0.0:
        warnings.warn(
            "median pairwise distance is 0; falling back to bandwidth "
            f"{FALLBACK_BANDWIDTH}",
            UserWarning,
            stacklevel=3,
        )
        return FALLBACK_BANDWIDTH
    return med


def mmd(real, synth, bandwidth: float | None = None) -> float:
    """MMD^2 estimate (biased, so >= 0 up to float rounding)."""
    x = _as_matrix(real)
    y = _as_matrix(synth)
    if x.shape[1] != y.shape[1]:
        raise ValueError(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    if min(len(x), len(y)) < 1:
        raise ValueError("each side needs at least one instance")
    if bandwidth is None:
        if min(len(x), len(y)) < 2:
            raise ValueError(
                "bandwidth estimation needs at least two instances per side; "
                "pass an explicit bandwidth for smaller samples"
            )
        sigma = median_bandwidth(np.vstack([x, y]))
    else:
        sigma = float(bandwidth)
        if sigma <= 0:
            raise ValueError(f"bandwidth must be positive, got {sigma}")

    scale = 2.0 * sigma * sigma
    kxx = np.exp(-cdist(x, x, "sqeuclidean") / scale)
    kyy = np.exp(-cdist(y, y, "sqeuclidean") / scale)
    kxy = np.exp(-cdist(x, y, "sqeuclidean") / scale)
    return float(kxx.mean() + kyy.mean() - 2.0 * kxy.mean())
