"""Two-component PCA comparison of real and synthetic window clouds.

The projection is fit on (a sample of) the real windows only; synthetic
windows are transformed with that fixed basis, so the synthetic input can
never influence the components.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.decomposition import PCA

from ..errors import DataFormatError
from ..pipeline.datasets import WindowedDataset
from ..seeding import derive_seed


@dataclass(frozen=True)
class PcaProjection:
    """Fit summary plus the two projected point clouds."""

    components: np.ndarray  # (2, D) rows are principal axes
    mean: np.ndarray  # (D,) centering vector from the real sample
    explained_variance: np.ndarray  # (2,) fractions of real-sample variance
    real_points: np.ndarray  # (n_real, 2)
    synth_points: np.ndarray  # (n_synth, 2)
    seed: int


def _sample_rows(x: np.ndarray, sample: int, seed: int, side: str) -> np.ndarray:
    if sample > len(x):
        warnings.warn(
            f"requested {sample} {side} instances but only {len(x)} exist; using all",
            UserWarning,
            stacklevel=3,
        )
    idx = np.random.default_rng(seed).permutation(len(x))[:sample]
    return x[idx]


def pca_compare(
    real: WindowedDataset,
    synth: WindowedDataset,
    sample: int = 500,
    seed: int = 0,
) -> PcaProjection:
    if not real.scaled or not synth.scaled:
        raise DataFormatError("pca_compare expects scaled datasets")
    if real.n_instances < 2:
        raise ValueError("need at least two real instances to fit a projection")
    if sample < 2:
        raise ValueError(f"sample must be at least 2, got {sample}")

    xr = _sample_rows(real.flattened(), sample, derive_seed(seed, "pca", "real"), "real")
    xs_all = synth.flattened()

    pca = PCA(n_components=2, svd_solver="full")
    real_points = pca.fit_transform(xr)

    if len(xs_all) == 0:
        synth_points = np.zeros((0, 2))
    else:
        xs = _sample_rows(xs_all, sample, derive_seed(seed, "pca", "synth"), "synthetic")
        synth_points = pca.transform(xs)

    return PcaProjection(
        components=pca.components_.copy(),
        mean=pca.mean_.copy(),
        explained_variance=pca.explained_variance_ratio_.copy(),
        real_points=real_points,
        synth_points=synth_points,
        seed=seed,
    )
