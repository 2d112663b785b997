"""1-D CNN gesture classifier and the shared evaluation metrics.

Architecture (fixed shape, configurable widths): conv, conv, max-pool,
conv, conv, global average pool, dropout, flatten, dense softmax head.
Convolutions are unpadded, so windows must be long enough to survive the
stack: width >= 4 * (kernel - 1) * 1.5-ish; the constructor checks this
exactly. Dropout is off at inference; predict_proba can instead average
several stochastic passes when asked.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import torch
from sklearn.metrics import accuracy_score, f1_score, recall_score
from torch import nn

from ..errors import DataFormatError
from ..pipeline.datasets import WindowedDataset
from ..seeding import derive_seed


@dataclass(frozen=True)
class Cnn1dConfig:
    n_classes: int = 4
    conv_filters: int = 64
    kernel_size: int = 5
    dropout: float = 0.5
    learning_rate: float = 1e-4
    batch_size: int = 256
    epochs: int = 30
    seed: int = 0

    def __post_init__(self):
        for name in ("n_classes", "conv_filters", "kernel_size", "batch_size", "epochs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1), got {self.dropout}")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


def min_window_size(kernel_size: int) -> int:
    """Smallest window the unpadded conv stack can process."""
    # two convs, halving pool, two convs, and at least one position left
    return 2 * (2 * (kernel_size - 1) + 1) + 2 * (kernel_size - 1)


def build_cnn1d(n_features: int, window_size: int, cfg: Cnn1dConfig) -> nn.Module:
    if window_size < min_window_size(cfg.kernel_size):
        raise ValueError(
            f"window of {window_size} steps is too short for kernel "
            f"{cfg.kernel_size}; need at least {min_window_size(cfg.kernel_size)}"
        )
    c, k = cfg.conv_filters, cfg.kernel_size
    return nn.Sequential(
        nn.Conv1d(n_features, c, k),
        nn.ReLU(),
        nn.Conv1d(c, c, k),
        nn.ReLU(),
        nn.MaxPool1d(2),
        nn.Conv1d(c, c, k),
        nn.ReLU(),
        nn.Conv1d(c, c, k),
        nn.ReLU(),
        nn.AdaptiveAvgPool1d(1),
        nn.Dropout(cfg.dropout),
        nn.Flatten(),
        nn.Linear(c, cfg.n_classes),
    )


@dataclass
class Cnn1dClassifier:
    model: nn.Module
    classes: tuple[str, ...]
    config: Cnn1dConfig
    history: list[float] = field(default_factory=list)


def _to_inputs(ds: WindowedDataset) -> torch.Tensor:
    # (N, W, F) -> (N, F, W) channels-first
    return torch.from_numpy(np.ascontiguousarray(ds.data.transpose(0, 2, 1))).float()


def _class_indices(labels: np.ndarray, classes: tuple[str, ...]) -> torch.Tensor:
    lookup = {c: i for i, c in enumerate(classes)}
    unknown = sorted({l for l in labels if l not in lookup})
    if unknown:
        raise DataFormatError(f"labels outside the trained classes: {unknown}")
    return torch.tensor([lookup[l] for l in labels], dtype=torch.long)


def train_cnn1d(
    train: WindowedDataset,
    cfg: Cnn1dConfig,
    classes: list[str] | None = None,
) -> Cnn1dClassifier:
    """Train the classifier; ``classes`` pins the expected label set."""
    if train.n_instances == 0:
        raise DataFormatError("empty training set")
    present = train.classes()
    expected = tuple(classes) if classes is not None else tuple(present)
    missing = [c for c in expected if c not in present]
    if missing:
        raise DataFormatError(f"training data is missing classes: {missing}")
    if len(expected) < cfg.n_classes:
        raise DataFormatError(
            f"configured for {cfg.n_classes} classes but only "
            f"{len(expected)} present: {list(expected)}"
        )

    torch.manual_seed(derive_seed(cfg.seed, "cnn", "init"))
    model = build_cnn1d(train.n_features, train.window_size, cfg)
    x = _to_inputs(train)
    y = _class_indices(train.labels, expected)
    opt = torch.optim.Adam(model.parameters(), lr=cfg.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    rng = np.random.default_rng(derive_seed(cfg.seed, "cnn", "batches"))

    model.train()
    history = []
    n = len(x)
    for _ in range(cfg.epochs):
        perm = torch.from_numpy(rng.permutation(n))
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = perm[start : start + cfg.batch_size]
            opt.zero_grad()
            loss = loss_fn(model(x[idx]), y[idx])
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(idx)
        history.append(total / n)
    model.eval()
    return Cnn1dClassifier(model=model, classes=expected, config=cfg, history=history)


def predict_proba(
    clf: Cnn1dClassifier,
    ds: WindowedDataset,
    mc_passes: int = 0,
    seed: int | None = None,
) -> np.ndarray:
    """Class probabilities; mc_passes > 0 averages stochastic dropout passes."""
    if ds.n_instances == 0:
        raise DataFormatError("empty dataset")
    x = _to_inputs(ds)
    if mc_passes <= 0:
        clf.model.eval()
        with torch.no_grad():
            probs = torch.softmax(clf.model(x), dim=1)
        return probs.double().numpy()

    torch.manual_seed(derive_seed(seed if seed is not None else clf.config.seed, "mc"))
    clf.model.train()
    with torch.no_grad():
        acc = torch.zeros((len(x), len(clf.classes)), dtype=torch.float64)
        for _ in range(mc_passes):
            acc += torch.softmax(clf.model(x), dim=1).double()
    clf.model.eval()
    return (acc / mc_passes).numpy()


def predict_labels(clf: Cnn1dClassifier, ds: WindowedDataset, **kwargs) -> np.ndarray:
    probs = predict_proba(clf, ds, **kwargs)
    return np.array([clf.classes[i] for i in probs.argmax(axis=1)], dtype=object)


def evaluate_predictions(y_true, y_pred, classes) -> dict[str, float]:
    """Accuracy plus macro recall and macro F1 over the given class set."""
    y_true = np.asarray(y_true, dtype=object)
    y_pred = np.asarray(y_pred, dtype=object)
    if len(y_true) == 0:
        raise DataFormatError("empty test set")
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} vs {len(y_pred)}")
    classes = list(classes)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # sklearn chatters about unseen labels
        return {
            "accuracy": float(accuracy_score(y_true, y_pred)),
            "recall": float(
                recall_score(y_true, y_pred, labels=classes, average="macro", zero_division=0)
            ),
            "f1": float(
                f1_score(y_true, y_pred, labels=classes, average="macro", zero_division=0)
            ),
        }


def evaluate_classifier(clf: Cnn1dClassifier, test: WindowedDataset) -> dict[str, float]:
    """Single deterministic pass with dropout disabled."""
    if test.n_instances == 0:
        raise DataFormatError("empty test set")
    return evaluate_predictions(test.labels, predict_labels(clf, test), clf.classes)
