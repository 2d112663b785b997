"""Latent-space GAN with an autoencoder and a next-step supervisor.

Five networks share one learned latent space: an embedder and recovery
pair form an autoencoder over it, a generator maps noise into it, a
supervisor predicts its next step, and a discriminator judges latent
sequences. Training runs in three strictly ordered phases:

1. embedder + recovery on reconstruction error;
2. supervisor on next-step prediction over embedded real data;
3. joint adversarial training, where the generator (with the
   supervisor) optimizes adversarial + eta * supervised loss, the
   autoencoder optimizes reconstruction + lambda * supervised loss, and
   the discriminator trains unconditionally each batch.

Sampling runs noise through generator, supervisor, recovery.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import torch
from torch import nn

from ..errors import ConfigError, DataFormatError, PhaseOrderError
from ..pipeline.datasets import WindowedDataset
from ..seeding import derive_seed
from .common import batch_slices, effective_batch_size, single_class_label, uniform_noise

PHASES = ("untrained", "phase1", "phase2", "phase3")


@dataclass(frozen=True)
class TimeganConfig:
    seq_len: int = 100
    n_features: int = 6
    noise_dim: int = 64
    latent_dim: int = 64
    batch_size: int = 128
    learning_rate: float = 5e-4
    epochs: int = 300
    recurrent_cell: str = "gru"
    layers_per_network: int = 3
    lambda_weight: float = 1.0
    eta_weight: float = 10.0
    seed: int = 0

    def __post_init__(self):
        for name in (
            "seq_len",
            "n_features",
            "noise_dim",
            "latent_dim",
            "batch_size",
            "epochs",
            "layers_per_network",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.seq_len < 2:
            raise ConfigError("seq_len must be >= 2 for next-step supervision")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if self.lambda_weight <= 0 or self.eta_weight <= 0:
            raise ConfigError("loss weights must be positive")
        if self.recurrent_cell != "gru":
            raise ConfigError(
                f"recurrent_cell must be 'gru', got {self.recurrent_cell!r}"
            )


class _GruNet(nn.Module):
    """GRU stack plus a linear head, optionally squashed to (0, 1)."""

    def __init__(self, in_dim, hidden, out_dim, layers, sigmoid_out):
        super().__init__()
        self.rnn = nn.GRU(in_dim, hidden, num_layers=layers, batch_first=True)
        self.head = nn.Linear(hidden, out_dim)
        self.sigmoid_out = sigmoid_out

    def forward(self, x):
        out, _ = self.rnn(x)
        out = self.head(out)
        return torch.sigmoid(out) if self.sigmoid_out else out


@dataclass
class TimeganModel:
    embedder: nn.Module
    recovery: nn.Module
    generator: nn.Module
    supervisor: nn.Module
    discriminator: nn.Module
    config: TimeganConfig
    phase: str = "untrained"
    class_label: Optional[str] = None
    history: dict = field(default_factory=dict)

    def networks(self) -> dict[str, nn.Module]:
        return {
            "embedder": self.embedder,
            "recovery": self.recovery,
            "generator": self.generator,
            "supervisor": self.supervisor,
            "discriminator": self.discriminator,
        }


def build(cfg: TimeganConfig) -> TimeganModel:
    torch.manual_seed(derive_seed(cfg.seed, "timegan", "init"))
    h, lat, layers = cfg.latent_dim, cfg.latent_dim, cfg.layers_per_network
    return TimeganModel(
        embedder=_GruNet(cfg.n_features, h, lat, layers, sigmoid_out=True),
        recovery=_GruNet(lat, h, cfg.n_features, layers, sigmoid_out=True),
        generator=_GruNet(cfg.noise_dim, h, lat, layers, sigmoid_out=True),
        supervisor=_GruNet(lat, h, lat, layers, sigmoid_out=True),
        discriminator=_GruNet(lat, h, 1, layers, sigmoid_out=False),
        config=cfg,
    )


def reconstruction_loss(x: torch.Tensor, x_tilde: torch.Tensor) -> torch.Tensor:
    """Mean squared error over every entry."""
    if x.shape != x_tilde.shape:
        raise ValueError(f"shape mismatch: {tuple(x.shape)} vs {tuple(x_tilde.shape)}")
    return ((x - x_tilde) ** 2).mean()


def supervised_loss(h: torch.Tensor, h_hat: torch.Tensor) -> torch.Tensor:
    """MSE between h[:, 1:] and the supervisor's aligned prediction h_hat[:, :-1]."""
    if h.shape != h_hat.shape:
        raise ValueError(f"shape mismatch: {tuple(h.shape)} vs {tuple(h_hat.shape)}")
    if h.shape[1] < 2:
        raise ValueError("sequences must have at least 2 timesteps")
    return ((h[:, 1:] - h_hat[:, :-1]) ** 2).mean()


def unsupervised_loss(
    d_real: torch.Tensor, d_fake: torch.Tensor
) -> tuple[torch.Tensor, torch.Tensor]:
    """Adversarial BCE pair on logits: (generator term, discriminator term)."""
    bce = nn.functional.binary_cross_entropy_with_logits
    generator_term = bce(d_fake, torch.ones_like(d_fake))
    discriminator_term = bce(d_real, torch.ones_like(d_real)) + bce(
        d_fake, torch.zeros_like(d_fake)
    )
    return generator_term, discriminator_term


def _require_phase(model: TimeganModel, needed: str, action: str) -> None:
    if PHASES.index(model.phase) < PHASES.index(needed):
        raise PhaseOrderError(
            f"{action} requires completed {needed}, model is at {model.phase!r}"
        )


def _data_tensor(ds: WindowedDataset, cfg: TimeganConfig) -> torch.Tensor:
    if not ds.scaled:
        raise DataFormatError("training data must be scaled to [0, 1]")
    if ds.window_size != cfg.seq_len or ds.n_features != cfg.n_features:
        raise DataFormatError(
            f"dataset windows {ds.window_size}x{ds.n_features} do not match "
            f"config {cfg.seq_len}x{cfg.n_features}"
        )
    return torch.from_numpy(ds.data).float()


def train_phase1(
    model: TimeganModel, ds: WindowedDataset, epochs: Optional[int] = None
) -> list[float]:
    """Autoencoder training: embedder + recovery on reconstruction loss."""
    cfg = model.config
    model.class_label = single_class_label(ds)
    x = _data_tensor(ds, cfg)
    epochs = cfg.epochs if epochs is None else epochs
    bs = effective_batch_size(len(x), cfg.batch_size)
    opt = torch.optim.Adam(
        list(model.embedder.parameters()) + list(model.recovery.parameters()),
        lr=cfg.learning_rate,
    )
    torch.manual_seed(derive_seed(cfg.seed, "timegan", "phase1"))
    rng = np.random.default_rng(derive_seed(cfg.seed, "timegan", "phase1", "batches"))

    losses = []
    for _ in range(epochs):
        total = 0.0
        for idx in batch_slices(len(x), bs, rng):
            xb = x[idx]
            opt.zero_grad()
            loss = reconstruction_loss(xb, model.recovery(model.embedder(xb)))
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(idx)
        losses.append(total / len(x))
    if PHASES.index(model.phase) < PHASES.index("phase1"):
        model.phase = "phase1"
    model.history["phase1"] = losses
    return losses


def train_phase2(
    model: TimeganModel, ds: WindowedDataset, epochs: Optional[int] = None
) -> list[float]:
    """Supervisor training on embedded real sequences."""
    _require_phase(model, "phase1", "phase 2")
    cfg = model.config
    x = _data_tensor(ds, cfg)
    epochs = cfg.epochs if epochs is None else epochs
    bs = effective_batch_size(len(x), cfg.batch_size)
    opt = torch.optim.Adam(model.supervisor.parameters(), lr=cfg.learning_rate)
    torch.manual_seed(derive_seed(cfg.seed, "timegan", "phase2"))
    rng = np.random.default_rng(derive_seed(cfg.seed, "timegan", "phase2", "batches"))

    losses = []
    for _ in range(epochs):
        total = 0.0
        for idx in batch_slices(len(x), bs, rng):
            xb = x[idx]
            opt.zero_grad()
            with torch.no_grad():
                h = model.embedder(xb)
            loss = supervised_loss(h, model.supervisor(h))
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(idx)
        losses.append(total / len(x))
    if PHASES.index(model.phase) < PHASES.index("phase2"):
        model.phase = "phase2"
    model.history["phase2"] = losses
    return losses


def train_phase3(
    model: TimeganModel, ds: WindowedDataset, epochs: Optional[int] = None
) -> dict[str, list[float]]:
    """Joint adversarial phase over the latent space."""
    _require_phase(model, "phase2", "phase 3")
    cfg = model.config
    x = _data_tensor(ds, cfg)
    epochs = cfg.epochs if epochs is None else epochs
    bs = effective_batch_size(len(x), cfg.batch_size)

    opt_g = torch.optim.Adam(
        list(model.generator.parameters()) + list(model.supervisor.parameters()),
        lr=cfg.learning_rate,
    )
    opt_e = torch.optim.Adam(
        list(model.embedder.parameters()) + list(model.recovery.parameters()),
        lr=cfg.learning_rate,
    )
    opt_d = torch.optim.Adam(model.discriminator.parameters(), lr=cfg.learning_rate)

    torch.manual_seed(derive_seed(cfg.seed, "timegan", "phase3"))
    rng = np.random.default_rng(derive_seed(cfg.seed, "timegan", "phase3", "batches"))
    noise_seq = iter(
        derive_seed(cfg.seed, "timegan", "phase3", "noise", i)
        for i in range(10**9)
    )

    losses: dict[str, list[float]] = {"generator": [], "autoencoder": [], "discriminator": []}
    for _ in range(epochs):
        sums = {k: 0.0 for k in losses}
        for idx in batch_slices(len(x), bs, rng):
            xb = x[idx]
            z = uniform_noise((len(idx), cfg.seq_len, cfg.noise_dim), next(noise_seq))

            # generator + supervisor: adversarial + eta * supervised
            opt_g.zero_grad()
            h = model.embedder(xb)
            h_fake = model.supervisor(model.generator(z))
            g_adv, _ = unsupervised_loss(model.discriminator(h), model.discriminator(h_fake))
            g_sup = supervised_loss(h, model.supervisor(h))
            g_loss = g_adv + cfg.eta_weight * g_sup
            g_loss.backward()
            opt_g.step()

            # embedder + recovery: reconstruction + lambda * supervised
            opt_e.zero_grad()
            h = model.embedder(xb)
            e_rec = reconstruction_loss(xb, model.recovery(h))
            e_sup = supervised_loss(h, model.supervisor(h))
            e_loss = e_rec + cfg.lambda_weight * e_sup
            e_loss.backward()
            opt_e.step()

            # discriminator: unconditional update each batch
            opt_d.zero_grad()
            with torch.no_grad():
                h = model.embedder(xb)
                h_fake = model.supervisor(model.generator(z))
            _, d_loss = unsupervised_loss(
                model.discriminator(h), model.discriminator(h_fake)
            )
            d_loss.backward()
            opt_d.step()

            sums["generator"] += float(g_loss.detach()) * len(idx)
            sums["autoencoder"] += float(e_loss.detach()) * len(idx)
            sums["discriminator"] += float(d_loss.detach()) * len(idx)
        for k in losses:
            losses[k].append(sums[k] / len(x))
    model.phase = "phase3"
    model.history["phase3"] = losses
    return losses


def train(
    model: TimeganModel, ds: WindowedDataset, epochs_per_phase: Optional[int] = None
) -> dict:
    """Run all three phases in order and return the loss history."""
    train_phase1(model, ds, epochs_per_phase)
    train_phase2(model, ds, epochs_per_phase)
    train_phase3(model, ds, epochs_per_phase)
    return model.history


def generate(model: TimeganModel, n: int, seed: int = 0) -> WindowedDataset:
    """Sample n windows via recovery(supervisor(generator(noise)))."""
    _require_phase(model, "phase3", "generate")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    cfg = model.config
    label = model.class_label if model.class_label is not None else "synthetic"
    if n == 0:
        return WindowedDataset(
            data=np.zeros((0, cfg.seq_len, cfg.n_features)),
            labels=np.array([], dtype=object),
            scaled=True,
        )
    z = uniform_noise((n, cfg.seq_len, cfg.noise_dim), derive_seed(seed, "timegan", "gen"))
    with torch.no_grad():
        x = model.recovery(model.supervisor(model.generator(z)))
    data = np.clip(x.double().numpy(), 0.0, 1.0)
    return WindowedDataset(
        data=data, labels=np.array([label] * n, dtype=object), scaled=True
    )
