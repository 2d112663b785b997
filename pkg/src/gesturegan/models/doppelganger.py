"""Batched-emission Wasserstein GAN with per-instance auto-normalization.

Each training instance is rescaled per feature to [-1, 1] by its own
min/max; the (midpoint, half-range) pairs ride along as fake attributes
so the exact scale can be decoded back after generation. An attribute
generator samples those pairs, a recurrent measurement generator emits
sample_len timesteps per pass conditioned on them, and two critics (one
on sequence + attributes, one on attributes alone) train with gradient
penalty. Turning auto_normalize off replaces the per-instance map with
the fixed [0,1] -> [-1,1] map and constant attributes, which is the
mode-collapse ablation.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import torch
from torch import nn

from ..errors import ConfigError, DataFormatError, PhaseOrderError
from ..pipeline.datasets import WindowedDataset
from ..pipeline.scaling import DEGENERATE_EPSILON
from ..seeding import derive_seed
from .common import (
    batch_slices,
    effective_batch_size,
    mlp,
    single_class_label,
    torch_generator,
    uniform_noise,
)


@dataclass(frozen=True)
class DganConfig:
    batch_size: int = 128
    learning_rate: float = 1e-3
    betas: tuple[float, float] = (0.3, 0.9)
    latent_dim: int = 32
    gradient_penalty_weight: float = 3.0
    packing_degree: int = 1
    epochs: int = 500
    seq_len: int = 100
    sample_len: int = 10
    rounds_per_batch: int = 2
    measurement_cols: int = 6
    attribute_cols: tuple = ()
    auto_normalize: bool = True
    generator_hidden: int = 100
    critic_hidden: int = 200
    critic_depth: int = 4
    attribute_hidden: int = 100
    attribute_depth: int = 3
    seed: int = 0

    def __post_init__(self):
        for name in (
            "batch_size",
            "latent_dim",
            "epochs",
            "seq_len",
            "sample_len",
            "rounds_per_batch",
            "measurement_cols",
            "generator_hidden",
            "critic_hidden",
            "critic_depth",
            "attribute_hidden",
            "attribute_depth",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.seq_len % self.sample_len != 0:
            raise ConfigError(
                f"seq_len {self.seq_len} is not divisible by sample_len {self.sample_len}"
            )
        if self.packing_degree < 1:
            raise ConfigError("packing_degree must be >= 1")
        if self.gradient_penalty_weight < 0:
            raise ConfigError("gradient_penalty_weight must be >= 0")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if len(self.betas) != 2 or not all(0 <= b < 1 for b in self.betas):
            raise ConfigError(f"betas must be two values in [0, 1), got {self.betas}")
        if self.attribute_cols:
            raise ConfigError("dataset-provided attributes are not supported")

    @property
    def n_passes(self) -> int:
        return self.seq_len // self.sample_len


@dataclass(frozen=True)
class AutoNormMeta:
    """Per-instance scale carried as fake attributes."""

    midpoint: np.ndarray  # (F,)
    half_range: np.ndarray  # (F,) always > 0

    def __post_init__(self):
        if np.any(self.half_range <= 0):
            raise ValueError("half_range entries must be positive")

    @property
    def minimum(self) -> np.ndarray:
        return self.midpoint - self.half_range

    @property
    def maximum(self) -> np.ndarray:
        return self.midpoint + self.half_range

    def to_attributes(self) -> np.ndarray:
        return np.concatenate([self.midpoint, self.half_range])

    @classmethod
    def from_attributes(cls, attrs: np.ndarray) -> "AutoNormMeta":
        f = len(attrs) // 2
        half = np.maximum(np.asarray(attrs[f:], dtype=np.float64), DEGENERATE_EPSILON)
        return cls(midpoint=np.asarray(attrs[:f], dtype=np.float64), half_range=half)


def auto_normalize(ds: WindowedDataset) -> tuple[WindowedDataset, list[AutoNormMeta]]:
    """Rescale each instance per feature to [-1, 1] by its own range."""
    if ds.n_instances == 0:
        raise DataFormatError("cannot normalize an empty dataset")
    lo = ds.data.min(axis=1)  # (N, F)
    hi = ds.data.max(axis=1)
    mid = (hi + lo) / 2.0
    half = (hi - lo) / 2.0
    half = np.where(half == 0.0, DEGENERATE_EPSILON, half)
    normalized = (ds.data - mid[:, None, :]) / half[:, None, :]
    metas = [AutoNormMeta(midpoint=mid[i], half_range=half[i]) for i in range(len(mid))]
    out = WindowedDataset(data=normalized, labels=ds.labels.copy(), scaled=False)
    return out, metas


def auto_denormalize(
    normalized: WindowedDataset, metas: list[AutoNormMeta]
) -> WindowedDataset:
    """Exact inverse of auto_normalize (round trip < 1e-9)."""
    if normalized.n_instances != len(metas):
        raise DataFormatError(
            f"{normalized.n_instances} instances but {len(metas)} metadata entries"
        )
    mid = np.stack([m.midpoint for m in metas])
    half = np.stack([m.half_range for m in metas])
    data = normalized.data * half[:, None, :] + mid[:, None, :]
    return WindowedDataset(data=data, labels=normalized.labels.copy(), scaled=False)


class _AttributeGenerator(nn.Module):
    """Noise -> (midpoint, half-range) attribute vector in valid ranges."""

    def __init__(self, cfg: DganConfig):
        super().__init__()
        f = cfg.measurement_cols
        sizes = [cfg.latent_dim] + [cfg.attribute_hidden] * cfg.attribute_depth + [2 * f]
        self.net = mlp(sizes)
        self.n_features = f

    def forward(self, z):
        raw = self.net(z)
        mid = torch.sigmoid(raw[:, : self.n_features])
        half = 0.5 * torch.sigmoid(raw[:, self.n_features :])
        return torch.cat([mid, half], dim=1)


class _MeasurementGenerator(nn.Module):
    """LSTM emitting sample_len timesteps per pass, conditioned on attributes."""

    def __init__(self, cfg: DganConfig):
        super().__init__()
        f = cfg.measurement_cols
        in_dim = cfg.latent_dim + 2 * f
        self.rnn = nn.LSTM(in_dim, cfg.generator_hidden, batch_first=True)
        self.head = nn.Linear(cfg.generator_hidden, cfg.sample_len * f)
        self.cfg = cfg

    def forward(self, z_passes, attrs):
        # z_passes: (B, n_passes, latent), attrs: (B, 2F)
        cond = attrs.unsqueeze(1).expand(-1, z_passes.shape[1], -1)
        out, _ = self.rnn(torch.cat([z_passes, cond], dim=2))
        chunks = torch.tanh(self.head(out))  # (B, n_passes, sample_len * F)
        b, p, _ = chunks.shape
        return chunks.reshape(b, p * self.cfg.sample_len, self.cfg.measurement_cols)


@dataclass
class DganModel:
    attribute_generator: nn.Module
    measurement_generator: nn.Module
    critic: nn.Module  # scores flatten(sequence) + attributes
    aux_critic: nn.Module  # scores attributes alone
    config: DganConfig
    trained: bool = False
    class_label: Optional[str] = None
    history: dict = field(default_factory=dict)

    def networks(self) -> dict[str, nn.Module]:
        return {
            "attribute_generator": self.attribute_generator,
            "measurement_generator": self.measurement_generator,
            "critic": self.critic,
            "aux_critic": self.aux_critic,
        }


def build(cfg: DganConfig) -> DganModel:
    torch.manual_seed(derive_seed(cfg.seed, "dgan", "init"))
    f = cfg.measurement_cols
    seq_flat = cfg.seq_len * f + 2 * f
    critic_sizes = [seq_flat] + [cfg.critic_hidden] * cfg.critic_depth + [1]
    aux_sizes = [2 * f] + [cfg.critic_hidden] * cfg.critic_depth + [1]
    return DganModel(
        attribute_generator=_AttributeGenerator(cfg),
        measurement_generator=_MeasurementGenerator(cfg),
        critic=mlp(critic_sizes),
        aux_critic=mlp(aux_sizes),
        config=cfg,
    )


def gradient_penalty(critic, real_batch, fake_batch, seed: int = 0) -> torch.Tensor:
    """Mean over instances of (||grad critic(interpolate)||_2 - 1)^2."""
    if real_batch.shape != fake_batch.shape:
        raise ValueError(
            f"shape mismatch: {tuple(real_batch.shape)} vs {tuple(fake_batch.shape)}"
        )
    n = real_batch.shape[0]
    eps_shape = (n,) + (1,) * (real_batch.dim() - 1)
    eps = torch.rand(eps_shape, generator=torch_generator(seed), dtype=real_batch.dtype)
    interp = (eps * real_batch + (1.0 - eps) * fake_batch).detach().requires_grad_(True)
    scores = critic(interp)
    grads = torch.autograd.grad(
        scores.sum(), interp, create_graph=True, retain_graph=True
    )[0]
    norms = grads.reshape(n, -1).norm(dim=1)
    return ((norms - 1.0) ** 2).mean()


def _seq_input(sequences: torch.Tensor, attrs: torch.Tensor) -> torch.Tensor:
    return torch.cat([sequences.reshape(sequences.shape[0], -1), attrs], dim=1)


def _real_attributes(metas: list[AutoNormMeta]) -> torch.Tensor:
    return torch.from_numpy(np.stack([m.to_attributes() for m in metas])).float()


def _ablated_metas(n: int, n_features: int) -> list[AutoNormMeta]:
    # fixed [0,1] -> [-1,1] map: midpoint 0.5, half-range 0.5 everywhere
    mid = np.full(n_features, 0.5)
    half = np.full(n_features, 0.5)
    return [AutoNormMeta(midpoint=mid, half_range=half) for _ in range(n)]


def train(model: DganModel, ds: WindowedDataset, epochs: Optional[int] = None) -> dict:
    """Adversarial training with gradient penalty on both critics."""
    cfg = model.config
    if cfg.packing_degree > 1:
        raise ConfigError(
            "packing_degree > 1 is not supported; the reference setting is 1"
        )
    if not ds.scaled:
        raise DataFormatError("training data must be scaled to [0, 1]")
    if ds.window_size != cfg.seq_len or ds.n_features != cfg.measurement_cols:
        raise DataFormatError(
            f"dataset windows {ds.window_size}x{ds.n_features} do not match "
            f"config {cfg.seq_len}x{cfg.measurement_cols}"
        )
    model.class_label = single_class_label(ds)

    if cfg.auto_normalize:
        normalized, metas = auto_normalize(ds)
    else:
        normalized = WindowedDataset(
            data=2.0 * ds.data - 1.0, labels=ds.labels.copy(), scaled=False
        )
        metas = _ablated_metas(ds.n_instances, ds.n_features)

    x = torch.from_numpy(normalized.data).float()
    attrs_real_all = _real_attributes(metas)
    epochs = cfg.epochs if epochs is None else epochs
    bs = effective_batch_size(len(x), cfg.batch_size)

    opt_attr = torch.optim.Adam(
        model.attribute_generator.parameters(), lr=cfg.learning_rate, betas=cfg.betas
    )
    opt_meas = torch.optim.Adam(
        model.measurement_generator.parameters(), lr=cfg.learning_rate, betas=cfg.betas
    )
    opt_critic = torch.optim.Adam(
        model.critic.parameters(), lr=cfg.learning_rate, betas=cfg.betas
    )
    opt_aux = torch.optim.Adam(
        model.aux_critic.parameters(), lr=cfg.learning_rate, betas=cfg.betas
    )

    torch.manual_seed(derive_seed(cfg.seed, "dgan", "train"))
    rng = np.random.default_rng(derive_seed(cfg.seed, "dgan", "batches"))
    step = 0
    history: dict[str, list[float]] = {"critic": [], "aux_critic": [], "generator": []}

    def _fake_batch(b, tag):
        z_attr = uniform_noise(
            (b, cfg.latent_dim), derive_seed(cfg.seed, "zattr", step, tag)
        )
        z_meas = uniform_noise(
            (b, cfg.n_passes, cfg.latent_dim), derive_seed(cfg.seed, "zmeas", step, tag)
        )
        fake_attrs = model.attribute_generator(z_attr)
        fake_seq = model.measurement_generator(z_meas, fake_attrs)
        return fake_seq, fake_attrs

    for _ in range(epochs):
        for idx in batch_slices(len(x), bs, rng):
            xb = x[idx]
            ab = attrs_real_all[idx]
            for _round in range(cfg.rounds_per_batch):
                # critics
                fake_seq, fake_attrs = _fake_batch(len(idx), "critic")
                fake_seq = fake_seq.detach()
                fake_attrs = fake_attrs.detach()

                opt_critic.zero_grad()
                real_in = _seq_input(xb, ab)
                fake_in = _seq_input(fake_seq, fake_attrs)
                c_loss = (
                    model.critic(fake_in).mean()
                    - model.critic(real_in).mean()
                    + cfg.gradient_penalty_weight
                    * gradient_penalty(
                        model.critic, real_in, fake_in, derive_seed(cfg.seed, "gp", step)
                    )
                )
                c_loss.backward()
                opt_critic.step()

                opt_aux.zero_grad()
                a_loss = (
                    model.aux_critic(fake_attrs).mean()
                    - model.aux_critic(ab).mean()
                    + cfg.gradient_penalty_weight
                    * gradient_penalty(
                        model.aux_critic, ab, fake_attrs, derive_seed(cfg.seed, "gpa", step)
                    )
                )
                a_loss.backward()
                opt_aux.step()

                # generators: combined signal from both critics
                opt_attr.zero_grad()
                opt_meas.zero_grad()
                fake_seq, fake_attrs = _fake_batch(len(idx), "gen")
                g_loss = (
                    -model.critic(_seq_input(fake_seq, fake_attrs)).mean()
                    - model.aux_critic(fake_attrs).mean()
                )
                g_loss.backward()
                opt_attr.step()
                opt_meas.step()

                history["critic"].append(float(c_loss.detach()))
                history["aux_critic"].append(float(a_loss.detach()))
                history["generator"].append(float(g_loss.detach()))
                step += 1

    model.trained = True
    model.history = history
    return history


def generate_sequence(model: DganModel, noise: torch.Tensor, meta: AutoNormMeta) -> np.ndarray:
    """One denormalized (seq_len, F) window from explicit noise and scale."""
    cfg = model.config
    if noise.shape != (cfg.n_passes, cfg.latent_dim):
        raise ValueError(
            f"noise must have shape ({cfg.n_passes}, {cfg.latent_dim}), "
            f"got {tuple(noise.shape)}"
        )
    attrs = torch.from_numpy(meta.to_attributes()).float().unsqueeze(0)
    with torch.no_grad():
        seq = model.measurement_generator(noise.unsqueeze(0).float(), attrs)
    normalized = seq[0].double().numpy()
    return normalized * meta.half_range[None, :] + meta.midpoint[None, :]


def generate(model: DganModel, n: int, seed: int = 0) -> WindowedDataset:
    """Sample n windows: attributes first, then conditioned sequences."""
    if not model.trained:
        raise PhaseOrderError("generate requires a trained model")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    cfg = model.config
    label = model.class_label if model.class_label is not None else "synthetic"
    if n == 0:
        return WindowedDataset(
            data=np.zeros((0, cfg.seq_len, cfg.measurement_cols)),
            labels=np.array([], dtype=object),
            scaled=True,
        )
    z_attr = uniform_noise((n, cfg.latent_dim), derive_seed(seed, "dgan", "zattr"))
    z_meas = uniform_noise(
        (n, cfg.n_passes, cfg.latent_dim), derive_seed(seed, "dgan", "zmeas")
    )
    with torch.no_grad():
        attrs = model.attribute_generator(z_attr)
        seqs = model.measurement_generator(z_meas, attrs)
    attrs64 = attrs.double().numpy()
    metas = [AutoNormMeta.from_attributes(a) for a in attrs64]
    mid = np.stack([m.midpoint for m in metas])
    half = np.stack([m.half_range for m in metas])
    data = seqs.double().numpy() * half[:, None, :] + mid[:, None, :]
    data = np.clip(data, 0.0, 1.0)
    return WindowedDataset(
        data=data, labels=np.array([label] * n, dtype=object), scaled=True
    )
