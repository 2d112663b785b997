import numpy as np
import pytest

from gesturegan.pipeline import RawRecording, WindowedDataset


def make_recording(label="01a", length=300, seed=0, sample_rate=100.0, source_id=""):
    rng = np.random.default_rng(seed)
    t = np.arange(length) / sample_rate
    base = np.stack([np.sin(2 * np.pi * (1.0 + 0.3 * k) * t) for k in range(6)], axis=1)
    samples = base + 0.05 * rng.standard_normal((length, 6))
    return RawRecording(label=label, samples=samples, sample_rate=sample_rate, source_id=source_id)


def make_dataset(n=20, window=100, features=6, seed=0, scaled=False, labels=None):
    rng = np.random.default_rng(seed)
    if scaled:
        data = rng.uniform(0.0, 1.0, size=(n, window, features))
    else:
        data = rng.normal(0.0, 2.0, size=(n, window, features))
    if labels is None:
        labels = np.array(["01a"] * n, dtype=object)
    return WindowedDataset(data=data, labels=np.asarray(labels, dtype=object), scaled=scaled)


@pytest.fixture
def four_class_recordings():
    recs = []
    for label in ("01a", "02a", "03a", "03b"):
        for i in range(10):
            recs.append(
                make_recording(
                    label=label,
                    length=260 + 10 * i,
                    seed=hash((label, i)) % (2**32),
                    source_id=f"{label}/rec_{i:04d}.csv",
                )
            )
    return recs
