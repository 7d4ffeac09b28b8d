"""Forward time-frequency transforms.

All transforms share one phase convention: a channel at angular frequency
omega holds sum_n f(n) w(t - n) exp(-i omega n dt), stored as a cosine part
(real) and a sine part (imaginary).  Magnitudes are therefore comparable
across the time-causal and the Gabor transforms.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy import fft as sp_fft
from scipy import signal as sps
from scipy import special

from .cascade import ModulatedCascadeBank
from .errors import ConfigurationError, InputError
from .kernel import KernelParams, delay_estimates, discrete_time_constants

WINDOW_KINDS = ("time-causal-limit", "gabor-sampled", "gabor-discrete", "gabor-truncated-shifted")
THRESHOLD_MODES = ("hard", "soft")
DEFAULT_TAIL_EPS = 1e-8


@dataclass(frozen=True)
class FrequencyGrid:
    """Logarithmically spaced analysis frequencies with per-frequency window scales.

    The window standard deviation is ``N`` wavelengths, ``sigma = N / f``.
    In ``"hard"`` mode it is clamped to ``[sigma_min, sigma_max]``; when the
    bounds are left as ``None`` they default to ``N/8`` ms and ``5 N`` ms,
    which keeps 200 Hz - 8 kHz in the proportional range.  ``"soft"`` mode
    uses a smooth lower floor ``sigma0`` and a smooth upper bound
    ``sigma_inf`` with sharpness ``p``.
    """

    f_min: float = 20.0
    f_max: float = 16000.0
    per_octave: int = 48
    N: float = 8.0
    threshold: str = "hard"
    sigma_min: float = None
    sigma_max: float = None
    sigma0: float = 1e-3
    sigma_inf: float = 40e-3
    p: float = 2.0

    def __post_init__(self):
        if not (0 < self.f_min <= self.f_max):
            raise ConfigurationError("need 0 < f_min <= f_max")
        if int(self.per_octave) != self.per_octave or self.per_octave < 1:
            raise ConfigurationError("per_octave must be a positive integer")
        if self.N <= 0:
            raise ConfigurationError("N must be positive")
        if self.threshold not in THRESHOLD_MODES:
            raise ConfigurationError(f"threshold must be one of {THRESHOLD_MODES}")
        if self.sigma_min is None:
            object.__setattr__(self, "sigma_min", self.N * 0.125e-3)
        if self.sigma_max is None:
            object.__setattr__(self, "sigma_max", self.N * 5e-3)
        if not (0 < self.sigma_min <= self.sigma_max):
            raise ConfigurationError("need 0 < sigma_min <= sigma_max")
        if self.sigma0 < 0 or self.sigma_inf <= 0 or self.p <= 0:
            raise ConfigurationError("invalid soft threshold parameters")

    @property
    def freqs_hz(self):
        n_bins = int(math.floor(self.per_octave * math.log2(self.f_max / self.f_min) + 1e-9)) + 1
        return self.f_min * 2.0 ** (np.arange(n_bins) / self.per_octave)

    @property
    def omegas(self):
        return 2 * np.pi * self.freqs_hz

    def sigmas(self, freqs_hz=None):
        """Window standard deviations in seconds (hard mode)."""
        f = self.freqs_hz if freqs_hz is None else np.asarray(freqs_hz, dtype=float)
        return np.clip(self.N / f, self.sigma_min, self.sigma_max)

    def tau_ref(self, sample_rate, freqs_hz=None):
        """Window variances in samples squared, one per frequency."""
        f = self.freqs_hz if freqs_hz is None else np.asarray(freqs_hz, dtype=float)
        r2 = float(sample_rate) ** 2
        if self.threshold == "hard":
            return r2 * self.sigmas(f) ** 2
        tau = r2 * (self.sigma0 ** 2 + (self.N / f) ** 2)
        tau_inf = r2 * self.sigma_inf ** 2
        return tau / (1.0 + (tau / tau_inf) ** self.p) ** (1.0 / self.p)


@dataclass(frozen=True)
class TransformConfig:
    grid: FrequencyGrid = field(default_factory=FrequencyGrid)
    sample_rate: float = 44100.0
    c: float = 2.0
    K: int = 8
    window_kind: str = "time-causal-limit"

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ConfigurationError("sample_rate must be positive")
        if self.window_kind not in WINDOW_KINDS:
            raise ConfigurationError(f"window_kind must be one of {WINDOW_KINDS}")
        KernelParams(tau=1.0, c=self.c, K=self.K)
        if self.sample_rate <= 2 * self.grid.f_max:
            warnings.warn(
                f"f_max={self.grid.f_max} Hz is not below the Nyquist frequency "
                f"{self.sample_rate / 2} Hz", RuntimeWarning, stacklevel=3)

    @property
    def dt(self):
        return 1.0 / self.sample_rate

    def time_constants(self):
        """Discrete time constants, shape (n_freqs, K), in samples."""
        return np.array([
            discrete_time_constants(KernelParams(tau=t, c=self.c, K=self.K))
            for t in self.grid.tau_ref(self.sample_rate)
        ])


@dataclass
class Spectrogram:
    """Quadrature channels over (time, frequency)."""

    times: np.ndarray
    freqs_hz: np.ndarray
    cos_part: np.ndarray
    sin_part: np.ndarray
    sample_rate: float
    metadata: dict = field(default_factory=dict)

    @property
    def magnitude(self):
        return np.sqrt(self.cos_part ** 2 + self.sin_part ** 2)

    @property
    def values(self):
        return self.cos_part + 1j * self.sin_part

    @property
    def times_s(self):
        return np.asarray(self.times) / self.sample_rate


def _as_signal(signal):
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InputError("signal must be a non-empty 1-D sequence")
    return x


def modulate(signal, omega, dt):
    """Cosine and negated sine modulation of ``signal`` at ``omega`` rad/s."""
    x = np.asarray(signal, dtype=float)
    phase = (omega * dt) * np.arange(x.shape[0])
    return x * np.cos(phase), -x * np.sin(phase)


def _metadata(config, **extra):
    meta = {
        "window_kind": config.window_kind,
        "sample_rate": config.sample_rate,
        "c": config.c,
        "K": config.K,
        "N": config.grid.N,
        "per_octave": config.grid.per_octave,
        "f_min": config.grid.f_min,
        "f_max": config.grid.f_max,
        "threshold": config.grid.threshold,
        "sigma_min": config.grid.sigma_min,
        "sigma_max": config.grid.sigma_max,
        "sigma0": config.grid.sigma0,
        "sigma_inf": config.grid.sigma_inf,
        "p": config.grid.p,
    }
    meta.update(extra)
    return meta


class CausalGaborStream:
    """Chunk-wise time-causal transform.

    Each call to :meth:`process` consumes the next samples of the stream and
    returns their spectrogram rows; concatenating the rows of all chunks
    reproduces :func:`causal_transform` of the whole signal exactly.
    """

    def __init__(self, config):
        self.config = config
        self.freqs_hz = config.grid.freqs_hz
        self.mu = config.time_constants()
        self.bank = ModulatedCascadeBank(2 * np.pi * self.freqs_hz * config.dt, self.mu)

    @property
    def n_processed(self):
        return self.bank.n

    def process(self, chunk, record_layers=False):
        start = self.bank.n
        result = self.bank.process(chunk, record_layers=record_layers)
        times = np.arange(start, self.bank.n)
        spec = Spectrogram(times, self.freqs_hz, result[0], result[1],
                           self.config.sample_rate, _metadata(self.config))
        if record_layers:
            spec.layers = result[2]
        return spec


def causal_transform(signal, config, record_layers=False):
    """Time-causal analogue of the Gabor transform, one row per input sample.

    With ``record_layers`` the returned spectrogram carries a ``layers``
    array of shape (T, J, K, 2) holding every intermediate cascade output.
    """
    x = _as_signal(signal)
    if config.window_kind != "time-causal-limit":
        raise ConfigurationError("causal_transform needs window_kind='time-causal-limit'")
    return CausalGaborStream(config).process(x, record_layers=record_layers)


def _gaussian_halfwidth(sigma, eps):
    return max(1, int(math.ceil(sigma * math.sqrt(2.0) * special.erfcinv(eps))))


def sampled_gaussian_window(sigma, eps=DEFAULT_TAIL_EPS):
    """Sampled Gaussian on [-M, M], tail mass beyond M below ``eps``, unit sum."""
    M = _gaussian_halfwidth(sigma, eps)
    n = np.arange(-M, M + 1)
    w = np.exp(-0.5 * (n / sigma) ** 2)
    return w / w.sum()


def discrete_gaussian_window(s, eps=DEFAULT_TAIL_EPS):
    """Discrete analogue of the Gaussian, T(n; s) = exp(-s) I_n(s), on [-M, M].

    M is the smallest half-width whose two-sided tail mass is below ``eps``.
    The truncated kernel is not renormalized.
    """
    if s <= 0:
        return np.array([1.0])
    M = _gaussian_halfwidth(math.sqrt(s), eps)
    while True:
        n = np.arange(0, M + 1)
        half = special.ive(n, s)
        total = half[0] + 2 * half[1:].sum()
        if 1.0 - total < eps:
            break
        M = int(M * 1.25) + 1
    # shrink to the smallest support whose exact outside mass is below eps
    inside = half[0] + 2 * np.concatenate([[0.0], np.cumsum(half[1:])])
    M = int(np.nonzero(1.0 - inside < eps)[0][0])
    half = half[: M + 1]
    return np.concatenate([half[:0:-1], half])


def _window(kind, tau, eps):
    if kind == "gabor-discrete":
        return discrete_gaussian_window(tau, eps)
    return sampled_gaussian_window(math.sqrt(tau), eps)


def gabor_transform(signal, config, eps=DEFAULT_TAIL_EPS):
    """Non-causal Gabor transform by explicit convolution with a Gaussian window.

    ``config.window_kind`` picks the sampled Gaussian (``"gabor-sampled"``)
    or the discrete analogue of the Gaussian (``"gabor-discrete"``).
    """
    x = _as_signal(signal)
    if config.window_kind not in ("gabor-sampled", "gabor-discrete"):
        raise ConfigurationError("gabor_transform needs a gabor-sampled or gabor-discrete window")
    freqs = config.grid.freqs_hz
    taus = config.grid.tau_ref(config.sample_rate)
    T = x.shape[0]
    out = np.empty((freqs.shape[0], T), dtype=complex)
    n = np.arange(T)
    # clamped scales share one window, so its spectrum is cached
    cached_tau, M, L, W = None, 0, 0, None
    for j, (f, tau) in enumerate(zip(freqs, taus)):
        if tau != cached_tau:
            w = _window(config.window_kind, tau, eps)
            M = (w.shape[0] - 1) // 2
            L = sp_fft.next_fast_len(T + 2 * M)
            W = sp_fft.fft(w, L)
            cached_tau = tau
        z = x * np.exp(-1j * (2 * np.pi * f * config.dt) * n)
        out[j] = sp_fft.ifft(sp_fft.fft(z, L) * W)[M:M + T]
    return Spectrogram(n, freqs, out.real.T.copy(), out.imag.T.copy(), config.sample_rate,
                       _metadata(config))


def truncation_delays(config, c=None):
    """Delay (seconds) of the truncated shifted Gabor window per frequency.

    Uses the continuous estimate of the peak position of the limit kernel
    for the same window scale.
    """
    c = config.c if c is None else c
    sigmas = np.sqrt(config.grid.tau_ref(config.sample_rate)) / config.sample_rate
    factor = delay_estimates(KernelParams(tau=1.0, c=c)).max_pos_delay
    return factor * sigmas


def truncated_shifted_gabor(signal, config, c=None, window="gabor-discrete",
                            delay_samples=None, eps=DEFAULT_TAIL_EPS):
    """Gabor transform with a delayed Gaussian window cut off at the present.

    The window is delayed by the limit kernel's peak-position estimate for
    distribution parameter ``c`` (rounded to whole samples), and every
    coefficient that would reach into the future is set to zero without
    renormalizing.  ``delay_samples`` overrides the delay for all
    frequencies.
    """
    x = _as_signal(signal)
    if config.window_kind != "gabor-truncated-shifted":
        raise ConfigurationError("truncated_shifted_gabor needs window_kind='gabor-truncated-shifted'")
    if window not in ("gabor-sampled", "gabor-discrete"):
        raise ConfigurationError("window must be 'gabor-sampled' or 'gabor-discrete'")
    freqs = config.grid.freqs_hz
    taus = config.grid.tau_ref(config.sample_rate)
    if delay_samples is None:
        delays = np.rint(truncation_delays(config, c) * config.sample_rate).astype(int)
    else:
        delays = np.full(freqs.shape[0], int(delay_samples))
    T = x.shape[0]
    out = np.empty((T, freqs.shape[0]), dtype=complex)
    n = np.arange(T)
    for j, (f, tau, delay) in enumerate(zip(freqs, taus, delays)):
        w = _window(window, tau, eps)
        M = (w.shape[0] - 1) // 2
        # lag m >= 0 takes window value w[m - delay]; lags below zero are dropped
        first = max(0, delay - M)
        h = np.zeros(delay + M + 1)
        h[first:] = w[M + first - delay:]
        z = x * np.exp(-1j * (2 * np.pi * f * config.dt) * n)
        out[:, j] = sps.oaconvolve(z, h, mode="full")[:T]
    meta = _metadata(config, truncation_c=config.c if c is None else c, window=window)
    spec = Spectrogram(n, freqs, out.real.copy(), out.imag.copy(), config.sample_rate, meta)
    spec.delays = delays
    return spec


def config_from_metadata(meta):
    """Rebuild the :class:`TransformConfig` echoed in spectrogram metadata."""
    keys = ("f_min", "f_max", "per_octave", "N", "threshold", "sigma_min", "sigma_max",
            "sigma0", "sigma_inf", "p")
    try:
        grid = FrequencyGrid(**{k: meta[k] for k in keys})
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return TransformConfig(grid, meta["sample_rate"], meta["c"], meta["K"],
                                   meta["window_kind"])
    except KeyError as exc:
        raise ConfigurationError(f"metadata lacks {exc}") from exc


def transform(signal, config):
    """Dispatch on ``config.window_kind``."""
    if config.window_kind == "time-causal-limit":
        return causal_transform(signal, config)
    if config.window_kind == "gabor-truncated-shifted":
        return truncated_shifted_gabor(signal, config)
    return gabor_transform(signal, config)


def to_db(spectrogram, clip_db=-60.0):
    """Magnitude in dB relative to the global maximum, floored at ``clip_db``."""
    if clip_db >= 0:
        raise ConfigurationError("clip_db must be negative")
    mag = spectrogram.magnitude if isinstance(spectrogram, Spectrogram) else np.abs(np.asarray(spectrogram))
    peak = mag.max() if mag.size else 0.0
    if peak <= 0:
        return np.full(mag.shape, float(clip_db))
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag / peak)
    return np.maximum(db, clip_db)


def midi_axis(freqs_hz):
    """MIDI note numbers, 69 at 440 Hz and 12 per octave."""
    f = np.asarray(freqs_hz, dtype=float)
    if np.any(f <= 0):
        raise ConfigurationError("frequencies must be positive")
    return 69.0 + 12.0 / math.log(2.0) * np.log(f / 440.0)
