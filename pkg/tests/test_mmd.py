import math

import numpy as np
import pytest

from gesturegan.metrics import mmd
from tests.conftest import make_dataset


def brute_force_mmd(x, y, sigma):
    """Double-loop V-statistic, diagonal terms included."""

    def k(a, b):
        return math.exp(-sum((ai - bi) ** 2 for ai, bi in zip(a, b)) / (2 * sigma**2))

    sxx = sum(k(a, b) for a in x for b in x) / (len(x) ** 2)
    syy = sum(k(a, b) for a in y for b in y) / (len(y) ** 2)
    sxy = sum(k(a, b) for a in x for b in y) / (len(x) * len(y))
    return sxx + syy - 2 * sxy


def test_matches_brute_force_oracle():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(12, 5))
    y = rng.normal(loc=0.5, size=(9, 5))
    for sigma in (0.5, 1.0, 3.0):
        got = mmd(x, y, bandwidth=sigma)
        want = brute_force_mmd(x.tolist(), y.tolist(), sigma)
        assert abs(got - want) < 1e-12


def test_zero_on_identical_multisets():
    rng = np.random.default_rng(3)
    x = rng.uniform(size=(20, 4))
    assert abs(mmd(x, x.copy())) < 1e-12


def test_one_dimensional_closed_form():
    # Single points 0 and 1 with sigma 1: both within-set means are
    # exp(0) = 1, the cross mean is exp(-1/2), so 2 - 2 exp(-1/2).
    got = mmd(np.array([[0.0]]), np.array([[1.0]]), bandwidth=1.0)
    assert abs(got - (2.0 - 2.0 * math.exp(-0.5))) < 1e-12


def test_symmetric():
    rng = np.random.default_rng(11)
    x = rng.normal(size=(8, 3))
    y = rng.normal(size=(10, 3))
    assert abs(mmd(x, y) - mmd(y, x)) < 1e-12


def test_nonnegative_on_random_inputs():
    rng = np.random.default_rng(23)
    for _ in range(10):
        x = rng.normal(size=(rng.integers(2, 15), 4))
        y = rng.normal(size=(rng.integers(2, 15), 4))
        assert mmd(x, y) >= -1e-12


def test_windowed_dataset_inputs():
    ds = make_dataset(n=6, window=10, features=2, seed=5)
    assert abs(mmd(ds, ds)) < 1e-12


def test_degenerate_pooled_sample_falls_back():
    x = np.zeros((3, 2))
    with pytest.warns(UserWarning, match="falling back"):
        value = mmd(x, x.copy())
    assert abs(value) < 1e-12


def test_too_few_instances_for_heuristic():
    with pytest.raises(ValueError, match="explicit bandwidth"):
        mmd(np.array([[0.0]]), np.array([[1.0]]))


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError, match="mismatch"):
        mmd(np.zeros((3, 2)), np.zeros((3, 3)))


def test_bad_bandwidth_rejected():
    with pytest.raises(ValueError, match="positive"):
        mmd(np.zeros((3, 2)), np.ones((3, 2)), bandwidth=0.0)
