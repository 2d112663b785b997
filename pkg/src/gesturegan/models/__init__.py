"""Generative model families and checkpoint handling."""

from .checkpoint import config_hash, load_checkpoint, save_checkpoint
from .common import effective_batch_size, single_class_label, torch_generator, uniform_noise
from .doppelganger import (
    AutoNormMeta,
    DganConfig,
    DganModel,
    auto_denormalize,
    auto_normalize,
    gradient_penalty,
)
from .doppelganger import build as build_dgan
from .doppelganger import generate as generate_dgan
from .doppelganger import generate_sequence
from .doppelganger import train as train_dgan
from .timegan import (
    PHASES,
    TimeganConfig,
    TimeganModel,
    reconstruction_loss,
    supervised_loss,
    unsupervised_loss,
)
from .timegan import build as build_timegan
from .timegan import generate as generate_timegan
from .timegan import train as train_timegan
from .timegan import train_phase1, train_phase2, train_phase3

__all__ = [
    "AutoNormMeta",
    "DganConfig",
    "DganModel",
    "PHASES",
    "TimeganConfig",
    "TimeganModel",
    "auto_denormalize",
    "auto_normalize",
    "build_dgan",
    "build_timegan",
    "config_hash",
    "effective_batch_size",
    "generate_dgan",
    "generate_sequence",
    "generate_timegan",
    "gradient_penalty",
    "load_checkpoint",
    "reconstruction_loss",
    "save_checkpoint",
    "single_class_label",
    "supervised_loss",
    "torch_generator",
    "train_dgan",
    "train_phase1",
    "train_phase2",
    "train_phase3",
    "train_timegan",
    "uniform_noise",
    "unsupervised_loss",
]
