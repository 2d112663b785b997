import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gesturegan.errors import ConfigError
from gesturegan.pipeline import RawRecording, WindowConfig, dataset_from_windows, sliding_window


def brute_force_window_count(length, window, step):
    """Enumerate start offsets directly instead of using the closed form."""
    count = 0
    start = 0
    while start + window <= length:
        count += 1
        start += step
    return count


def make_rec(length):
    samples = np.arange(length * 6, dtype=float).reshape(length, 6)
    return RawRecording(label="02a", samples=samples, sample_rate=100.0)


def test_paper_overlap_configs():
    assert WindowConfig(window_size=100, overlap=0.99).step == 1
    assert WindowConfig(window_size=100, overlap=0.50).step == 50
    assert len(sliding_window(make_rec(300), WindowConfig(100, 0.50))) == 5
    assert len(sliding_window(make_rec(300), WindowConfig(100, 0.99))) == 201


def test_single_window_boundary():
    windows = sliding_window(make_rec(100), WindowConfig(100, 0.50))
    assert len(windows) == 1
    np.testing.assert_array_equal(windows[0].values, make_rec(100).samples)


def test_windows_preserve_order_and_label():
    rec = make_rec(220)
    windows = sliding_window(rec, WindowConfig(100, 0.50))
    assert [w.label for w in windows] == ["02a", "02a", "02a"]
    np.testing.assert_array_equal(windows[1].values, rec.samples[50:150])
    np.testing.assert_array_equal(windows[2].values, rec.samples[100:200])


def test_short_recording_warns_and_returns_empty():
    with pytest.warns(UserWarning, match="shorter than window"):
        assert sliding_window(make_rec(60), WindowConfig(100, 0.50)) == []


def test_bad_configs_rejected():
    with pytest.raises(ConfigError):
        WindowConfig(window_size=1, overlap=0.5)
    with pytest.raises(ConfigError):
        WindowConfig(window_size=100, overlap=1.0)
    with pytest.raises(ConfigError):
        WindowConfig(window_size=100, overlap=-0.1)


@settings(max_examples=200, deadline=None)
@given(
    length=st.integers(min_value=2, max_value=800),
    window=st.integers(min_value=2, max_value=200),
    overlap=st.floats(min_value=0.0, max_value=0.99),
)
def test_window_count_matches_enumerator(length, window, overlap):
    cfg = WindowConfig(window_size=window, overlap=overlap)
    rec = RawRecording(label="01a", samples=np.zeros((length, 6)), sample_rate=100.0)
    if length < window:
        with pytest.warns(UserWarning):
            windows = sliding_window(rec, cfg)
    else:
        windows = sliding_window(rec, cfg)
    assert len(windows) == brute_force_window_count(length, window, cfg.step)
    if length >= window:
        assert len(windows) == (length - window) // cfg.step + 1


def test_dataset_assembly():
    windows = sliding_window(make_rec(300), WindowConfig(100, 0.50))
    ds = dataset_from_windows(windows)
    assert ds.data.shape == (5, 100, 6)
    assert ds.labels.tolist() == ["02a"] * 5
    assert not ds.scaled
