"""Global per-feature min-max scaling into [0, 1] and its inverse.

Parameters are fit on the training portion only; applying them to
evaluation data clips out-of-range values into [0, 1] (the clip count is
reported so the harness can record it).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from gesturegan.errors import DataFormatError
from gesturegan.pipeline.datasets import WindowedDataset

DEGENERATE_EPSILON = 1e-8


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature global minima and maxima.

    A degenerate feature (min == max at fit time) is stored with an
    epsilon-widened range so scaling stays defined and maps the constant
    to 0.5.
    """

    minimum: np.ndarray
    maximum: np.ndarray
    epsilon: float = DEGENERATE_EPSILON

    def __post_init__(self):
        minimum = np.asarray(self.minimum, dtype=np.float64)
        maximum = np.asarray(self.maximum, dtype=np.float64)
        if minimum.shape != maximum.shape or minimum.ndim != 1:
            raise DataFormatError("scaler minima/maxima must be matching 1-D arrays")
        if np.any(minimum > maximum):
            raise DataFormatError("scaler minimum exceeds maximum for some feature")
        object.__setattr__(self, "minimum", minimum)
        object.__setattr__(self, "maximum", maximum)

    @property
    def n_features(self) -> int:
        return self.minimum.shape[0]

    def to_dict(self) -> dict:
        return {
            "minimum": self.minimum.tolist(),
            "maximum": self.maximum.tolist(),
            "epsilon": self.epsilon,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScalerParams":
        return cls(
            minimum=np.asarray(d["minimum"], dtype=np.float64),
            maximum=np.asarray(d["maximum"], dtype=np.float64),
            epsilon=float(d.get("epsilon", DEGENERATE_EPSILON)),
        )


def _check_features(ds: WindowedDataset, params: ScalerParams) -> None:
    if ds.n_features != params.n_features:
        raise DataFormatError(
            f"dataset has {ds.n_features} features but scaler was fit on {params.n_features}"
        )


def fit_scaler(ds: WindowedDataset, epsilon: float = DEGENERATE_EPSILON) -> ScalerParams:
    """Per-feature min/max across all instances and timesteps.

    Fit only on the training portion; the same parameters are then applied
    to evaluation and held-out data.
    """
    if ds.scaled:
        raise DataFormatError("scaler must be fit on unscaled data")
    if ds.n_instances == 0:
        raise DataFormatError("cannot fit a scaler on an empty dataset")
    minimum = ds.data.min(axis=(0, 1))
    maximum = ds.data.max(axis=(0, 1))
    degenerate = minimum == maximum
    if degenerate.any():
        minimum = np.where(degenerate, minimum - epsilon, minimum)
        maximum = np.where(degenerate, maximum + epsilon, maximum)
    return ScalerParams(minimum=minimum, maximum=maximum, epsilon=epsilon)


def count_out_of_range(ds: WindowedDataset, params: ScalerParams) -> int:
    """Number of entries that apply_scaler would clip."""
    _check_features(ds, params)
    below = ds.data < params.minimum
    above = ds.data > params.maximum
    return int(below.sum() + above.sum())


def apply_scaler(ds: WindowedDataset, params: ScalerParams) -> WindowedDataset:
    """Map values to (x - min) / (max - min), clipped into [0, 1].

    Clipping only affects data outside the fitted range (evaluation or
    held-out sets); a warning carries the clip count.
    """
    if ds.scaled:
        raise DataFormatError("dataset is already scaled")
    _check_features(ds, params)
    clipped = count_out_of_range(ds, params)
    if clipped:
        warnings.warn(f"clipped {clipped} out-of-range entries into [0, 1]")
    span = params.maximum - params.minimum
    data = np.clip((ds.data - params.minimum) / span, 0.0, 1.0)
    return replace(ds, data=data, scaled=True)


def inverse_scaler(ds: WindowedDataset, params: ScalerParams) -> WindowedDataset:
    """Undo apply_scaler; identity on in-range data within 1e-9."""
    if not ds.scaled:
        raise DataFormatError("dataset is not scaled")
    _check_features(ds, params)
    span = params.maximum - params.minimum
    data = ds.data * span + params.minimum
    return replace(ds, data=data, scaled=False)
