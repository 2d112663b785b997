"""Evaluation instruments: fidelity, diversity, privacy, and transfer."""

from .classifier import (
    Cnn1dClassifier,
    Cnn1dConfig,
    build_cnn1d,
    evaluate_classifier,
    evaluate_predictions,
    min_window_size,
    predict_labels,
    predict_proba,
    train_cnn1d,
)
from .discriminative import DiscriminativeConfig, discriminative_score
from .mmd import median_bandwidth, mmd
from .privacy import privacy_score
from .profile import stat_distance, stat_profile
from .projection import PcaProjection, pca_compare
from .protocol import MetricReport, RepeatSummary, repeat_protocol, repeat_seeds
from .transfer import baseline, rebalance_classes, trts, tstr

__all__ = [
    "Cnn1dClassifier",
    "Cnn1dConfig",
    "DiscriminativeConfig",
    "MetricReport",
    "PcaProjection",
    "RepeatSummary",
    "baseline",
    "build_cnn1d",
    "discriminative_score",
    "evaluate_classifier",
    "evaluate_predictions",
    "median_bandwidth",
    "min_window_size",
    "mmd",
    "pca_compare",
    "predict_labels",
    "predict_proba",
    "privacy_score",
    "rebalance_classes",
    "repeat_protocol",
    "repeat_seeds",
    "stat_distance",
    "stat_profile",
    "train_cnn1d",
    "trts",
    "tstr",
]
