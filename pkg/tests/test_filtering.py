import numpy as np
import pytest

from gesturegan.errors import ConfigError
from gesturegan.pipeline import FilterSpec, RawRecording, butterworth_lowpass


def sine_recording(freq_hz, fs=100.0, seconds=10.0, amplitude=1.0):
    t = np.arange(int(seconds * fs)) / fs
    x = amplitude * np.sin(2 * np.pi * freq_hz * t)
    return RawRecording(label="01a", samples=np.tile(x[:, None], (1, 6)), sample_rate=fs)


def steady_state_amplitude(y, fs, settle_seconds=3.0):
    tail = y[int(settle_seconds * fs) :]
    return np.sqrt(2.0 * np.mean(tail**2))


@pytest.mark.parametrize("mode", ["causal", "zero_phase"])
def test_constant_signal_passes_through(mode):
    rec = RawRecording(label="01a", samples=np.full((200, 6), 3.7), sample_rate=100.0)
    out = butterworth_lowpass(rec, FilterSpec(mode=mode))
    assert out.label == rec.label
    assert len(out) == len(rec)
    np.testing.assert_allclose(out.samples, 3.7, atol=1e-8)


def test_gain_at_cutoff_is_minus_3db():
    rec = sine_recording(5.0)
    out = butterworth_lowpass(rec, FilterSpec(mode="causal"))
    gain = steady_state_amplitude(out.samples[:, 0], rec.sample_rate)
    assert abs(gain - 1.0 / np.sqrt(2.0)) < 0.01


def test_stopband_attenuation_at_25hz():
    rec = sine_recording(25.0)
    out = butterworth_lowpass(rec, FilterSpec(mode="causal"))
    gain = steady_state_amplitude(out.samples[:, 0], rec.sample_rate)
    # Analytic 4th-order law at 5x cutoff: 1/sqrt(1 + 5^8) ~ -56 dB.
    assert 20 * np.log10(gain) < -50.0


def test_zero_phase_has_no_lag_and_squared_magnitude():
    rec = sine_recording(5.0, seconds=20.0)
    out = butterworth_lowpass(rec, FilterSpec(mode="zero_phase"))
    x = rec.samples[:, 0]
    y = out.samples[:, 0]
    mid = slice(500, 1500)
    # Amplitude halves (|H|^2 = 1/2 at cutoff), phase stays aligned.
    gain = np.sqrt(2.0 * np.mean(y[mid] ** 2))
    assert abs(gain - 0.5) < 0.01
    lag = np.argmax(np.correlate(y[mid], x[mid], mode="full")) - (len(x[mid]) - 1)
    assert lag == 0


def test_causal_filter_is_linear():
    rng = np.random.default_rng(3)
    a, b = 1.7, -0.4
    x = RawRecording(label="01a", samples=rng.normal(size=(400, 6)), sample_rate=100.0)
    y = RawRecording(label="01a", samples=rng.normal(size=(400, 6)), sample_rate=100.0)
    combo = RawRecording(label="01a", samples=a * x.samples + b * y.samples, sample_rate=100.0)
    spec = FilterSpec(mode="causal")
    lhs = butterworth_lowpass(combo, spec).samples
    rhs = a * butterworth_lowpass(x, spec).samples + b * butterworth_lowpass(y, spec).samples
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


def test_cutoff_at_or_above_nyquist_rejected():
    rec = sine_recording(5.0)
    with pytest.raises(ConfigError):
        butterworth_lowpass(rec, FilterSpec(cutoff_hz=50.0))
    with pytest.raises(ConfigError):
        butterworth_lowpass(rec, FilterSpec(cutoff_hz=60.0))


def test_short_recording_zero_phase_still_works():
    rec = RawRecording(label="01a", samples=np.ones((5, 6)), sample_rate=100.0)
    out = butterworth_lowpass(rec, FilterSpec(mode="zero_phase"))
    assert out.samples.shape == (5, 6)
