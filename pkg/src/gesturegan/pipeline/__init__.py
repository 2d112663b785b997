"""Deterministic preprocessing: recordings -> filtered -> windowed -> scaled -> split."""

from gesturegan.pipeline.recordings import (
    FEATURE_NAMES,
    RawRecording,
    load_recordings,
)
from gesturegan.pipeline.filtering import FilterSpec, butterworth_lowpass
from gesturegan.pipeline.windowing import (
    Window,
    WindowConfig,
    dataset_from_windows,
    sliding_window,
    window_recordings,
)
from gesturegan.pipeline.datasets import (
    WindowedDataset,
    concat_datasets,
    load_windowed_dataset,
    save_windowed_dataset,
)
from gesturegan.pipeline.scaling import (
    ScalerParams,
    apply_scaler,
    count_out_of_range,
    fit_scaler,
    inverse_scaler,
)
from gesturegan.pipeline.splits import SplitSpec, holdout_split, shuffle_split

__all__ = [
    "FEATURE_NAMES",
    "RawRecording",
    "load_recordings",
    "FilterSpec",
    "butterworth_lowpass",
    "Window",
    "WindowConfig",
    "sliding_window",
    "window_recordings",
    "dataset_from_windows",
    "WindowedDataset",
    "concat_datasets",
    "save_windowed_dataset",
    "load_windowed_dataset",
    "ScalerParams",
    "fit_scaler",
    "apply_scaler",
    "inverse_scaler",
    "count_out_of_range",
    "SplitSpec",
    "holdout_split",
    "shuffle_split",
]
