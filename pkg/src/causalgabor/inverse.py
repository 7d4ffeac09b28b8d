"""Reconstruction of a signal from its time-causal transform.

Writing h for the discrete cascade impulse response (unit sum, so the
continuous kernel is h / dt), the reconstruction at time u is

    f(u) ~ (1/pi) Re sum_j dw_j exp(i w_j u) dt sum_v h_j(v) H(u + v, w_j) / sum_v h_j(v)^2

over lags 0 <= v <= delta_u.  The lag sums are normalized separately for
every frequency, which is exact for a constant window scale and stays a
good approximation when the scale varies slowly with frequency.  Only
rows at times t >= u are read, so the inverse is anti-causal.  Near the
end of the record fewer lags exist and the estimate fades towards zero;
``complete`` marks the samples whose whole horizon was seen.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import signal as sps

from .cascade import impulse_response
from .errors import ConfigurationError, IllConditionedInverseError, InputError
from .kernel import KernelParams, discrete_time_constants
from .transform import Spectrogram, TransformConfig

ILL_CONDITIONED_RATIO = 1e-12


@dataclass(frozen=True)
class InverseConfig:
    """Settings of the inverse transform.

    delta_u : lag horizon in seconds; ``math.inf`` uses the whole future
    omega_band : (low, high) in rad/s; channels outside are ignored, ``None`` keeps all
    quadrature_step : stride over the frequency channels of the omega sum
    """

    delta_u: float = math.inf
    omega_band: tuple = None
    quadrature_step: int = 1

    def __post_init__(self):
        if not self.delta_u > 0:
            raise ConfigurationError("delta_u must be positive")
        if self.omega_band is not None:
            lo, hi = self.omega_band
            if not 0 <= lo < hi:
                raise ConfigurationError("omega_band must satisfy 0 <= low < high")
        if int(self.quadrature_step) != self.quadrature_step or self.quadrature_step < 1:
            raise ConfigurationError("quadrature_step must be a positive integer")


@dataclass
class InverseResult:
    samples: np.ndarray
    imag_residue: float       # L2 norm of the imaginary part of the symmetric sum
    complete: np.ndarray      # True where the whole lag horizon lies inside the record
    horizon: int              # lag horizon in samples


def limit_kernel_impulse(kernel, length):
    """Impulse response of the discrete cascade for ``kernel`` (tau in samples^2)."""
    if length < 1:
        raise InputError("length must be positive")
    return impulse_response(discrete_time_constants(kernel), int(length))


def _full_energy_length(mu):
    # long enough for the tail of h^2 to be negligible
    return int(60 * (np.sum(mu) + 1)) + 64


def _time_constants(spectrogram, kernel):
    J = spectrogram.freqs_hz.shape[0]
    if isinstance(kernel, TransformConfig):
        freqs = kernel.grid.freqs_hz
        if freqs.shape != spectrogram.freqs_hz.shape or not np.allclose(
                freqs, spectrogram.freqs_hz, rtol=1e-12, atol=0):
            raise ConfigurationError("transform config does not match the spectrogram grid")
        return kernel.time_constants()
    if isinstance(kernel, KernelParams):
        return np.tile(discrete_time_constants(kernel), (J, 1))
    raise ConfigurationError("kernel must be a TransformConfig or KernelParams")


def _trapezoid_weights(x):
    x = np.asarray(x, dtype=float)
    w = np.zeros_like(x)
    if x.size > 1:
        d = np.diff(x)
        w[:-1] += d / 2
        w[1:] += d / 2
    return w


def _lag_weights(V):
    w = np.ones(V + 1)
    if V > 0:
        w[0] = w[-1] = 0.5
    return w


def inverse_transform(spectrogram, kernel, config=None):
    """Reconstruct the signal behind a time-causal spectrogram.

    kernel : the :class:`TransformConfig` used for the forward transform, or a
        single :class:`KernelParams` (tau in samples^2) shared by all channels
    config : :class:`InverseConfig`

    Raises :class:`IllConditionedInverseError` when the lag horizon holds
    less than 1e-12 of the kernel energy for some channel.
    """
    config = InverseConfig() if config is None else config
    if not isinstance(spectrogram, Spectrogram):
        raise InputError("expected a Spectrogram")
    times = np.asarray(spectrogram.times)
    T = times.shape[0]
    if T == 0:
        raise InputError("spectrogram has no rows")
    if np.any(np.diff(times) != 1):
        raise InputError("spectrogram rows must be consecutive samples")
    values = spectrogram.cos_part + 1j * spectrogram.sin_part
    mu = _time_constants(spectrogram, kernel)

    omegas = 2 * np.pi * np.asarray(spectrogram.freqs_hz, dtype=float)
    keep = np.arange(omegas.shape[0])
    if config.omega_band is not None:
        lo, hi = config.omega_band
        keep = keep[(omegas >= lo) & (omegas <= hi)]
    keep = keep[::config.quadrature_step]
    if keep.size == 0:
        raise ConfigurationError("no frequency channel inside omega_band")
    omegas = omegas[keep]
    dw = _trapezoid_weights(omegas) if keep.size > 1 else np.ones(1)

    fs = spectrogram.sample_rate
    dt = 1.0 / fs
    V = T - 1 if math.isinf(config.delta_u) else min(T - 1, int(math.floor(config.delta_u * fs)))
    lag_w = _lag_weights(V)
    u = np.arange(T)
    t0 = times[0]
    total = np.zeros(T, dtype=complex)
    for idx, j in enumerate(keep):
        full = impulse_response(mu[j], max(_full_energy_length(mu[j]), V + 1))
        energy_full = float(np.sum(full * full))
        h = full[:V + 1]
        hw = h * lag_w
        energy = float(np.sum(hw * h))
        if energy < ILL_CONDITIONED_RATIO * energy_full:
            raise IllConditionedInverseError(
                f"lag horizon of {V} samples holds too little kernel energy at "
                f"{omegas[idx] / (2 * np.pi):.6g} Hz")
        # correlation: acc[u] = sum_v hw[v] H[u + v], reading rows u..u+V only
        acc = sps.oaconvolve(values[:, j], hw[::-1], mode="full")[V:V + T]
        inner = (dt / energy) * acc
        total += dw[idx] * np.exp(1j * omegas[idx] * (t0 + u) * dt) * inner
    # the negative-frequency half is the complex conjugate for real input
    symmetric = (total + np.conj(total)) / (2 * np.pi)
    samples = symmetric.real
    complete = u + V <= T - 1
    return InverseResult(samples, float(np.linalg.norm(symmetric.imag)), complete, V)
