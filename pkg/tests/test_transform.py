import math
import warnings

import numpy as np
import pytest

from causalgabor.cascade import run_batch
from causalgabor.errors import ConfigurationError, InputError
from causalgabor.kernel import SQRT2
from causalgabor.transform import (CausalGaborStream, FrequencyGrid, Spectrogram, TransformConfig,
                                   causal_transform, config_from_metadata,
                                   discrete_gaussian_window, gabor_transform, midi_axis, modulate,
                                   sampled_gaussian_window, to_db, truncated_shifted_gabor,
                                   truncation_delays, transform)

FS = 8000.0


def small_config(kind="time-causal-limit", c=2.0, N=4, **grid):
    grid = FrequencyGrid(**{"f_min": 200.0, "f_max": 1000.0, "per_octave": 12, "N": N, **grid})
    return TransformConfig(grid, FS, c=c, window_kind=kind)


def test_grid_spacing_and_proportional_region():
    grid = FrequencyGrid()
    f = grid.freqs_hz
    assert f[0] == 20.0 and f[-1] <= 16000.0
    assert np.allclose(f[1:] / f[:-1], 2 ** (1 / 48), rtol=1e-12, atol=0)
    sig = grid.sigmas()
    interior = (sig > grid.sigma_min) & (sig < grid.sigma_max)
    assert np.allclose(sig[interior] * 2 * np.pi * f[interior], 2 * np.pi * grid.N, rtol=1e-15)
    assert grid.sigma_min == pytest.approx(1e-3) and grid.sigma_max == pytest.approx(40e-3)
    g4 = FrequencyGrid(N=4)
    assert (g4.sigma_min, g4.sigma_max) == pytest.approx((0.5e-3, 20e-3))


@pytest.mark.parametrize("kwargs", [dict(f_min=0), dict(f_min=100, f_max=50), dict(per_octave=0),
                                    dict(N=0), dict(threshold="medium"),
                                    dict(sigma_min=2e-3, sigma_max=1e-3)])
def test_grid_validation(kwargs):
    with pytest.raises(ConfigurationError):
        FrequencyGrid(**kwargs)


def test_soft_threshold_monotone_and_bounded():
    grid = FrequencyGrid(threshold="soft", N=8)
    f = np.geomspace(1, 20000, 400)
    tau = grid.tau_ref(FS, f)
    assert np.all(np.diff(tau[::-1]) > 0)  # tau_ref grows as f falls
    assert np.all(tau < FS ** 2 * grid.sigma_inf ** 2)
    # floor: at very high frequencies the scale approaches sigma0
    assert math.sqrt(grid.tau_ref(FS, [1e9])[0]) / FS == pytest.approx(grid.sigma0, rel=1e-6)


def test_nyquist_warning():
    with pytest.warns(RuntimeWarning):
        TransformConfig(FrequencyGrid(f_max=5000), sample_rate=8000)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        TransformConfig(window_kind="hann")
    with pytest.raises(ConfigurationError):
        TransformConfig(c=1.0)


def test_modulate_examples():
    c, s = modulate(np.ones(16), 0.0, 1.0)
    assert np.all(c == 1) and np.all(s == 0)
    c, s = modulate(np.ones(6), math.pi, 1.0)
    assert np.allclose(c, [1, -1, 1, -1, 1, -1], atol=1e-12)
    n = np.arange(20000)
    f = np.cos(0.37 * n)
    c, _ = modulate(f, 0.37, 1.0)
    assert np.allclose(c, f ** 2)
    assert c.mean() == pytest.approx(0.5, abs=1e-3)


def test_causal_transform_zero_and_empty():
    cfg = small_config()
    spec = causal_transform(np.zeros(100), cfg)
    assert not np.any(spec.cos_part) and not np.any(spec.sin_part)
    with pytest.raises(InputError):
        causal_transform([], cfg)
    with pytest.raises(ConfigurationError):
        causal_transform(np.zeros(4), small_config("gabor-sampled"))


@pytest.mark.parametrize("kind", ["time-causal-limit", "gabor-sampled", "gabor-discrete",
                                  "gabor-truncated-shifted"])
def test_linearity(kind):
    rng = np.random.default_rng(3)
    a, b = rng.standard_normal(1500), rng.standard_normal(1500)
    cfg = small_config(kind)
    lhs = transform(2.5 * a - 0.75 * b, cfg).values
    rhs = 2.5 * transform(a, cfg).values - 0.75 * transform(b, cfg).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * np.max(np.abs(rhs))
    spec = transform(np.zeros(50), cfg)
    assert not np.any(spec.magnitude)


def test_magnitude_definition():
    spec = causal_transform(np.random.default_rng(0).standard_normal(200), small_config())
    assert np.array_equal(spec.magnitude, np.sqrt(spec.cos_part ** 2 + spec.sin_part ** 2))


def test_shift_covariance():
    cfg = small_config()
    shift = 37
    n = np.arange(9000)
    signal = lambda m: np.sin(0.31 * m) + 0.5 * np.cos(0.123 * m + 1.0)
    a = causal_transform(signal(n), cfg).magnitude
    b = causal_transform(signal(n + shift), cfg).magnitude
    assert np.max(np.abs(a[6000 + shift:8000 + shift] - b[6000:8000])) < 1e-8


def test_peak_at_nearest_bin_440():
    grid = FrequencyGrid(f_min=200.0, f_max=1000.0, per_octave=48, N=8)
    cfg = TransformConfig(grid, 44100.0, c=2.0)
    t = np.arange(22050) / 44100.0
    spec = causal_transform(np.sin(2 * np.pi * 440 * t), cfg)
    column = spec.magnitude[15000:20000].mean(axis=0)
    nearest = np.argmin(np.abs(np.log(grid.freqs_hz / 440)))
    assert np.argmax(column) == nearest


def test_cascade_property_on_exposed_layers():
    cfg = small_config()
    x = np.random.default_rng(9).standard_normal(600)
    spec = causal_transform(x, cfg, record_layers=True)
    mu = cfg.time_constants()
    for j in (0, 5):
        for k in range(cfg.K - 1):
            for q in range(2):
                nxt = run_batch([mu[j, k + 1]], spec.layers[:, j, k, q])
                assert np.array_equal(nxt, spec.layers[:, j, k + 1, q])


def test_stream_matches_one_shot():
    cfg = small_config()
    x = np.random.default_rng(4).standard_normal(1000)
    whole = causal_transform(x, cfg)
    stream = CausalGaborStream(cfg)
    parts = [stream.process(x[a:b]) for a, b in [(0, 1), (1, 333), (333, 334), (334, 1000)]]
    assert np.array_equal(np.concatenate([p.cos_part for p in parts]), whole.cos_part)
    assert np.array_equal(np.concatenate([p.sin_part for p in parts]), whole.sin_part)
    assert np.array_equal(np.concatenate([p.times for p in parts]), whole.times)
    assert stream.n_processed == 1000


def test_sampled_gaussian_window():
    w = sampled_gaussian_window(12.5)
    M = (w.size - 1) // 2
    assert w.sum() == pytest.approx(1.0, abs=1e-15)
    assert np.argmax(w) == M and np.allclose(w, w[::-1])


@pytest.mark.parametrize("s", [0.5, 2.0, 40.0, 900.0])
def test_discrete_gaussian_window_mass(s):
    w = discrete_gaussian_window(s)
    assert abs(w.sum() - 1.0) < 1e-8
    n = np.arange(w.size) - (w.size - 1) // 2
    assert np.sum(n ** 2 * w) == pytest.approx(s, rel=1e-6)


def test_discrete_gaussian_semigroup():
    w2 = discrete_gaussian_window(2.0)
    w4 = discrete_gaussian_window(4.0)
    conv = np.convolve(w2, w2)
    m_conv, m4 = (conv.size - 1) // 2, (w4.size - 1) // 2
    half = min(m_conv, m4)
    diff = conv[m_conv - half:m_conv + half + 1] - w4[m4 - half:m4 + half + 1]
    assert np.max(np.abs(diff)) < 1e-8


def test_gabor_matches_direct_sum():
    cfg = small_config("gabor-sampled")
    x = np.random.default_rng(8).standard_normal(400)
    spec = gabor_transform(x, cfg)
    j = 3
    tau = cfg.grid.tau_ref(FS)[j]
    w = sampled_gaussian_window(math.sqrt(tau))
    M = (w.size - 1) // 2
    omega_dt = 2 * np.pi * cfg.grid.freqs_hz[j] / FS
    n = np.arange(400)
    for t in (0, 57, 399):
        m = np.arange(max(0, t - M), min(400, t + M + 1))
        direct = np.sum(x[m] * w[t - m + M] * np.exp(-1j * omega_dt * m))
        assert abs(spec.values[t, j] - direct) < 1e-12


def test_truncated_delay_is_t_max_sigma():
    cfg = small_config("gabor-truncated-shifted", c=2.0)
    sig = np.sqrt(cfg.grid.tau_ref(FS)) / FS
    assert np.allclose(truncation_delays(cfg) / sig, 1.125, atol=1e-3)
    assert np.allclose(truncation_delays(cfg, c=SQRT2) / sig, 1.904, atol=1e-3)


def test_truncated_with_large_delay_is_shifted_gabor():
    tau_max = small_config().grid.tau_ref(FS).max()
    delay = sampled_gaussian_window(math.sqrt(tau_max)).size  # beyond every half-width
    x = np.random.default_rng(6).standard_normal(3 * delay)
    g = gabor_transform(x, small_config("gabor-sampled")).values
    tr = truncated_shifted_gabor(x, small_config("gabor-truncated-shifted"), window="gabor-sampled",
                                 delay_samples=delay)
    assert np.max(np.abs(tr.values[delay:] - g[:-delay])) < 1e-10
    assert np.all(tr.delays == delay)


def test_truncated_is_causal():
    cfg = small_config("gabor-truncated-shifted")
    x = np.zeros(500)
    x[250] = 1.0
    spec = truncated_shifted_gabor(x, cfg)
    # zero up to the round-off of the FFT convolution
    assert np.max(spec.magnitude[:250]) < 1e-15 * np.max(spec.magnitude)
    assert spec.metadata["truncation_c"] == 2.0


def test_truncated_argument_checks():
    with pytest.raises(ConfigurationError):
        truncated_shifted_gabor(np.zeros(5), small_config())
    with pytest.raises(ConfigurationError):
        truncated_shifted_gabor(np.zeros(5), small_config("gabor-truncated-shifted"), window="box")
    with pytest.raises(ConfigurationError):
        gabor_transform(np.zeros(5), small_config())


def test_to_db_examples():
    spec = Spectrogram(np.arange(1), np.arange(3.0), np.array([[2.0, 1.0, 0.0]]),
                       np.zeros((1, 3)), FS)
    db = to_db(spec)
    assert db[0, 0] == 0.0
    assert db[0, 1] == pytest.approx(-6.0206, abs=1e-4)
    assert db[0, 2] == -60.0
    assert np.all(to_db(np.zeros((2, 2)), -40.0) == -40.0)
    with pytest.raises(ConfigurationError):
        to_db(spec, 0.0)


def test_midi_axis():
    assert np.allclose(midi_axis([440.0, 880.0, 220.0]), [69.0, 81.0, 57.0], atol=1e-12)
    with pytest.raises(ConfigurationError):
        midi_axis([0.0])


def test_config_round_trip_through_metadata():
    cfg = small_config(threshold="soft")
    spec = causal_transform(np.zeros(10), cfg)
    assert config_from_metadata(spec.metadata) == cfg
    with pytest.raises(ConfigurationError):
        config_from_metadata({"f_min": 1.0})
