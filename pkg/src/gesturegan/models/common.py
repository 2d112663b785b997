"""Helpers shared by both generator families."""

import warnings

import numpy as np
import torch
from torch import nn

from ..errors import DataFormatError
from ..pipeline.datasets import WindowedDataset


def torch_generator(seed: int) -> torch.Generator:
    gen = torch.Generator()
    gen.manual_seed(int(seed))
    return gen


def uniform_noise(shape: tuple[int, ...], seed: int) -> torch.Tensor:
    """Uniform [0, 1) noise, deterministic and independent of global state."""
    return torch.rand(*shape, generator=torch_generator(seed))


def mlp(sizes: list[int], activation=nn.ReLU) -> nn.Sequential:
    """Feedforward stack: Linear+activation between all sizes, linear head."""
    layers: list[nn.Module] = []
    for i in range(len(sizes) - 1):
        layers.append(nn.Linear(sizes[i], sizes[i + 1]))
        if i < len(sizes) - 2:
            layers.append(activation())
    return nn.Sequential(*layers)


def effective_batch_size(n_instances: int, batch_size: int) -> int:
    if batch_size > n_instances:
        warnings.warn(
            f"batch size {batch_size} exceeds the {n_instances}-instance "
            "dataset; clamping",
            UserWarning,
            stacklevel=3,
        )
        return n_instances
    return batch_size


def single_class_label(ds: WindowedDataset) -> str:
    """The one gesture class a per-class model may train on."""
    classes = ds.classes()
    if len(classes) != 1:
        raise DataFormatError(
            f"per-class training expects exactly one class, found {classes}"
        )
    return classes[0]


def batch_slices(n: int, batch_size: int, rng: np.random.Generator):
    """Yield index arrays covering a shuffled epoch."""
    perm = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield perm[start : start + batch_size]
