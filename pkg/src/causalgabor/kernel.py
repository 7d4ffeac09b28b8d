"""Parameters of the time-causal limit kernel.

The limit kernel is an infinite cascade of truncated exponential kernels
whose time constants follow a geometric distribution with ratio ``c``.
Everything here is unit agnostic: ``tau`` may be given in seconds squared
or in samples squared, and results come out in the matching unit.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigurationError

SQRT2 = math.sqrt(2.0)
DEFAULT_LAYERS = 8
DEFAULT_FOURIER_TOL = 1e-14


@dataclass(frozen=True)
class KernelParams:
    """Limit kernel configuration.

    tau : variance of the kernel (time squared)
    c : distribution parameter, ratio between adjacent scale levels (> 1)
    K : number of recursive filter layers used to approximate the kernel
    """

    tau: float
    c: float = 2.0
    K: int = DEFAULT_LAYERS

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ConfigurationError(f"tau must be positive and finite, got {self.tau!r}")
        if not (math.isfinite(self.c) and self.c > 1):
            raise ConfigurationError(f"c must be > 1, got {self.c!r}")
        if int(self.K) != self.K or self.K < 1:
            raise ConfigurationError(f"K must be a positive integer, got {self.K!r}")

    @property
    def sigma(self):
        return math.sqrt(self.tau)


@dataclass(frozen=True)
class DelayEstimates:
    mean_delay: float
    max_pos_delay: float


def scale_ladder(params):
    """Temporal variances tau_1 < ... < tau_K with tau_K == params.tau."""
    K, c = params.K, params.c
    ladder = [c ** (2 * (k - K)) * params.tau for k in range(1, K + 1)]
    ladder[-1] = params.tau
    return ladder


def continuous_time_constants(params):
    """Time constants of the K truncated exponential kernels.

    The first layer absorbs all the finer scales, so the squared time
    constants telescope to ``params.tau``.
    """
    K, c = params.K, params.c
    sigma = math.sqrt(params.tau)
    mus = [c ** (1 - K) * sigma]
    mus.extend(c ** (k - K - 1) * math.sqrt(c * c - 1) * sigma for k in range(2, K + 1))
    return mus


def discrete_time_constant(delta_tau):
    """Recursive filter time constant whose variance mu^2 + mu equals ``delta_tau``."""
    if delta_tau < 0:
        raise ConfigurationError(f"scale increment must be non-negative, got {delta_tau!r}")
    # (sqrt(1 + 4 d) - 1) / 2 rewritten to avoid cancellation for small d
    return 2.0 * delta_tau / (math.sqrt(1.0 + 4.0 * delta_tau) + 1.0)


def discrete_time_constants(params):
    """Discrete time constants for ``params`` expressed in sample units."""
    ladder = scale_ladder(params)
    previous = 0.0
    mus = []
    for tau_k in ladder:
        mus.append(discrete_time_constant(tau_k - previous))
        previous = tau_k
    return mus


def limit_kernel_fourier(omega, params, tol=DEFAULT_FOURIER_TOL, n_factors=None):
    """Fourier transform of the limit kernel at angular frequency ``omega``.

    Evaluates prod_k 1 / (1 + i c^-k sqrt(c^2 - 1) sqrt(tau) omega).  The
    infinite product is cut once every remaining factor is within ``tol``
    of one; pass ``n_factors`` to keep exactly that many factors instead.
    ``params.K`` plays no role here.
    """
    if tol <= 0:
        raise ConfigurationError("tol must be positive")
    omega_arr = np.asarray(omega, dtype=float)
    c = params.c
    base = math.sqrt(c * c - 1) * math.sqrt(params.tau) * omega_arr
    result = np.ones(omega_arr.shape, dtype=complex)
    k = 1
    while True:
        if n_factors is not None and k > n_factors:
            break
        a = base * c ** (-k)
        if n_factors is None:
            # |1/(1 + ia) - 1| = |a| / sqrt(1 + a^2)
            if np.all(np.abs(a) / np.sqrt(1.0 + a * a) < tol):
                break
        result = result / (1.0 + 1j * a)
        k += 1
    if np.ndim(omega) == 0:
        return complex(result)
    return result


def delay_estimates(params):
    """Temporal mean and approximate position of the maximum of the kernel.

    The position of the maximum comes from Koenderink's scale-time
    approximation and slightly overestimates the true peak location.
    """
    c, sigma = params.c, math.sqrt(params.tau)
    mean_delay = math.sqrt((c + 1) / (c - 1)) * sigma
    max_pos = (c + 1) ** 2 * sigma / (2 * SQRT2 * math.sqrt((c - 1) * c ** 3))
    return DelayEstimates(mean_delay=mean_delay, max_pos_delay=max_pos)
