import math

import numpy as np
import pytest

from causalgabor.analysis import (band_width, frequency_offset, frequency_offset_bound,
                                  perturbation_at, perturbation_measures,
                                  perturbation_measures_gabor, selectivity_causal,
                                  selectivity_gabor, sine_spectrogram_model, _causal_log_power)
from causalgabor.errors import AnalysisError, ConfigurationError
from causalgabor.kernel import SQRT2
from causalgabor.transform import FrequencyGrid, TransformConfig, causal_transform

RATIOS = np.exp(np.linspace(-0.7, 0.7, 141))


def test_gabor_selectivity():
    curve = selectivity_gabor(RATIOS, 4)
    assert curve.values_db[70] == 0.0
    assert np.all(curve.values_db <= 0)
    assert float(selectivity_gabor(2.0, 4).values_db) == pytest.approx(-685.8, abs=0.1)
    with pytest.raises(ConfigurationError):
        selectivity_gabor(1.0, 0.5)


@pytest.mark.parametrize("c", [SQRT2, 2.0])
@pytest.mark.parametrize("N", [4, 8])
def test_causal_selectivity_is_wider_than_gabor(N, c):
    causal = selectivity_causal(RATIOS, N, c).values_db
    gabor = selectivity_gabor(RATIOS, N).values_db
    off = np.abs(np.log(RATIOS)) > 1e-9
    assert causal[70] == 0.0
    assert np.all(causal <= 0)
    assert np.all(causal[off] > gabor[off])


def test_causal_selectivity_example_and_error():
    assert float(selectivity_causal(2.0, 4, 2.0).values_db) == pytest.approx(-51.7, abs=0.05)
    with pytest.raises(ConfigurationError):
        selectivity_causal(1.0, 4, 1.0)


def test_log_power_truncation():
    x = np.array([0.1, 0.5])
    full = _causal_log_power(x, 4, 2.0)
    eight = _causal_log_power(x, 4, 2.0, K_factors=8)
    assert np.all(full >= eight)
    assert np.all(full - eight < 1e-3 * full)


def test_sine_model_bounds_and_average():
    omega0 = 2 * np.pi * 440
    t = np.linspace(0, 2 * np.pi / omega0, 4001)
    for ratio in (0.97, 1.0, 1.05):
        mag, R, T, O = sine_spectrogram_model(t, ratio * omega0, omega0, 4, 2.0, return_terms=True)
        assert np.all(np.abs(O) <= 2 * R * T * (1 + 1e-12))
        avg = np.trapezoid(mag ** 2, t) / (t[-1] - t[0])
        assert avg == pytest.approx((R ** 2 + T ** 2) / 4, rel=1e-6)


def test_sine_model_matches_transform_at_peak():
    fs, f0 = 44100.0, 440.0
    grid = FrequencyGrid(f_min=400.0, f_max=480.0, per_octave=48, N=8)
    cfg = TransformConfig(grid, fs, c=2.0)
    n = np.arange(int(fs))
    spec = causal_transform(np.sin(2 * np.pi * f0 * n / fs), cfg)
    keep = slice(30000, 40000)
    mag = spec.magnitude[keep]
    j = int(np.argmax(mag.mean(axis=0)))
    model = sine_spectrogram_model(n[keep] / fs, 2 * np.pi * grid.freqs_hz[j], 2 * np.pi * f0, 8, 2.0)
    assert np.max(np.abs(mag[:, j] - model) / model) < 0.01


@pytest.mark.parametrize("N, c, eps", [(4, SQRT2, -77.3), (4, 2.0, -51.7),
                                       (8, SQRT2, -118.8), (8, 2.0, -78.4)])
def test_perturbation_table(N, c, eps):
    e, b = perturbation_measures(N, c)
    assert e == pytest.approx(eps, abs=0.1)
    assert b == 2 * e


@pytest.mark.parametrize("N, eps", [(4, -685.8), (8, -2743.2)])
def test_perturbation_gabor(N, eps):
    e, b = perturbation_measures_gabor(N)
    assert e == pytest.approx(eps, abs=0.2)
    assert b == 2 * e


def test_perturbation_independent_of_omega0():
    a = perturbation_at(100.0, 4, 2.0)
    b = perturbation_at(1000.0, 4, 2.0)
    assert abs(a - b) < 1e-12
    assert a == pytest.approx(perturbation_measures(4, 2.0)[0], abs=1e-9)


CAUSAL_BANDS = {
    (4, SQRT2): (-0.0511, 0.0539), (4, 2.0): (-0.0556, 0.0589),
    (8, SQRT2): (-0.0258, 0.0265), (8, 2.0): (-0.0281, 0.0289),
}


@pytest.mark.parametrize("key", list(CAUSAL_BANDS))
def test_causal_band_width_and_edges(key):
    N, c = key
    rep = band_width("time-causal", N, c)
    lo, hi = CAUSAL_BANDS[key]
    assert rep.gamma_minus == pytest.approx(lo, abs=5e-4)
    assert rep.gamma_plus == pytest.approx(hi, abs=5e-4)
    assert rep.omega_ratio_minus < 1 < rep.omega_ratio_plus
    for g in (rep.gamma_minus, rep.gamma_plus):
        r = 10 ** (float(selectivity_causal(math.exp(g), N, c, K_factors=8).values_db) / 20)
        assert abs(r - 0.5) < 1e-10


@pytest.mark.parametrize("N, lo, hi", [(4, -0.0458, 0.0480), (8, -0.0231, 0.0237)])
def test_gabor_band_width(N, lo, hi):
    rep = band_width("gabor", N)
    assert rep.gamma_minus == pytest.approx(lo, abs=5e-4)
    assert rep.gamma_plus == pytest.approx(hi, abs=5e-4)
    for g in (rep.gamma_minus, rep.gamma_plus):
        r = 10 ** (float(selectivity_gabor(math.exp(g), N).values_db) / 20)
        assert abs(r - 0.5) < 1e-10


def test_band_width_orderings():
    for kind, c in (("gabor", None), ("time-causal", 2.0)):
        assert band_width(kind, 8, c).delta_gamma < band_width(kind, 4, c).delta_gamma
    for N in (4, 8):
        assert band_width("time-causal", N, SQRT2).delta_gamma < band_width("time-causal", N, 2.0).delta_gamma


def test_band_width_errors():
    with pytest.raises(ConfigurationError):
        band_width("hann", 4, 2.0)
    with pytest.raises(AnalysisError):
        band_width("gabor", 0.1)
    with pytest.raises(AnalysisError):
        band_width("time-causal", 0.05, 2.0)


def test_offset_without_perturbations_is_zero():
    gamma = frequency_offset(4, 2.0, 1.0, include_perturbations=False)
    assert abs(gamma) < 1e-20


@pytest.mark.parametrize("N, c, ref", [(4, SQRT2, 3.6e-11), (4, 2.0, 1.3e-8),
                                       (8, SQRT2, 3.9e-14), (8, 2.0, 4.6e-11)])
def test_offset_bound_order_of_magnitude(N, c, ref):
    value = frequency_offset_bound(N, c)
    assert ref / 10 < value < ref * 10


def test_offset_sign_follows_time_factor():
    assert frequency_offset(4, 2.0, -1.0) > 0 > frequency_offset(4, 2.0, 1.0)
