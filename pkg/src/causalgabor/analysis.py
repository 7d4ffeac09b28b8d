"""Closed-form characterizations of both spectrograms for a pure sine wave.

The window scale follows the analysed frequency, sigma(omega) = 2 pi N / omega,
so every quantity here depends on omega only through the ratio omega/omega0.
Band widths and frequency offsets use the first ``K_factors`` factors of
the limit kernel's Fourier product, as do the tabulated reference values.
"""

from dataclasses import dataclass
import math

import mpmath
import numpy as np

from .errors import AnalysisError, ConfigurationError
from .kernel import DEFAULT_FOURIER_TOL, KernelParams, limit_kernel_fourier

DB_PER_LOG = 10.0 / math.log(10.0)  # 10 / ln 10 converts ln(power) to dB
DEFAULT_K_FACTORS = 8


@dataclass
class SelectivityCurve:
    omegas: np.ndarray      # omega / omega0
    values_db: np.ndarray
    kind: str
    N: float
    c: float = None


@dataclass
class BandWidthReport:
    gamma_minus: float
    gamma_plus: float

    @property
    def delta_gamma(self):
        return self.gamma_plus - self.gamma_minus

    @property
    def omega_ratio_minus(self):
        return math.exp(self.gamma_minus)

    @property
    def omega_ratio_plus(self):
        return math.exp(self.gamma_plus)


def _check_c(c):
    if not c > 1:
        raise ConfigurationError(f"c must be > 1, got {c!r}")


def _causal_log_power(x, N, c, K_factors=None, tol=DEFAULT_FOURIER_TOL):
    """sum_k log(1 + 4 pi^2 N^2 c^-2k (c^2 - 1) x^2), x = 1 - omega0/omega.

    Without ``K_factors`` the sum runs until the next term is negligible.
    """
    x = np.asarray(x, dtype=float)
    base = 4 * math.pi ** 2 * N ** 2 * (c * c - 1) * x * x
    total = np.zeros_like(x)
    k = 1
    while True:
        if K_factors is not None and k > K_factors:
            break
        term = np.log1p(base * c ** (-2 * k))
        if K_factors is None and np.all(term < tol):
            break
        total = total + term
        k += 1
    return total


def selectivity_gabor(omega_ratio, N):
    """R in dB of the Gabor spectrogram against omega/omega0."""
    if N < 1:
        raise ConfigurationError("N must be >= 1")
    r = np.asarray(omega_ratio, dtype=float)
    values = -(40 * math.pi ** 2 * N ** 2 / math.log(10.0)) * (1.0 - 1.0 / r) ** 2
    return SelectivityCurve(r, values, "gabor", N)


def selectivity_causal(omega_ratio, N, c, tol=DEFAULT_FOURIER_TOL, K_factors=None):
    """R in dB of the time-causal spectrogram against omega/omega0."""
    _check_c(c)
    r = np.asarray(omega_ratio, dtype=float)
    values = -DB_PER_LOG * _causal_log_power(1.0 - 1.0 / r, N, c, K_factors, tol)
    return SelectivityCurve(r, values, "time-causal", N, c)


def _tau_for(omega, N):
    return (2 * math.pi * N / omega) ** 2


def sine_spectrogram_model(t, omega, omega0, N, c, tol=DEFAULT_FOURIER_TOL, K_factors=None,
                           return_terms=False):
    """Magnitude of the time-causal transform of sin(omega0 t) at ``omega``.

    |H|^2 = (R^2 + T^2 + O(t)) / 4 with R = |Psi(omega - omega0)|,
    T = |Psi(omega + omega0)| and O(t) = -2 R T cos(2 omega0 t + dphi).
    With ``return_terms`` the tuple ``(magnitude, R, T, O)`` is returned.
    """
    params = KernelParams(tau=_tau_for(omega, N), c=c)
    lo = limit_kernel_fourier(omega - omega0, params, tol, K_factors)
    hi = limit_kernel_fourier(omega + omega0, params, tol, K_factors)
    R, T = abs(lo), abs(hi)
    dphi = np.angle(hi) - np.angle(lo)
    O = -2 * R * T * np.cos(2 * omega0 * np.asarray(t, dtype=float) + dphi)
    mag = 0.5 * np.sqrt(R * R + T * T + O)
    if return_terms:
        return mag, R, T, O
    return mag


def perturbation_measures(N, c, K_factors=DEFAULT_K_FACTORS):
    """Relative size of the oscillatory and the bias term for a sine wave, in dB.

    Read off the time-causal selectivity curve at omega = 2 omega0; the bias
    measure is the square of the oscillatory one, i.e. twice as many dB.
    Returns ``(eps_db, b_db)``.
    """
    eps_db = float(selectivity_causal(2.0, N, c, K_factors=K_factors).values_db)
    return eps_db, 2 * eps_db


def perturbation_measures_gabor(N):
    """Gabor counterpart of :func:`perturbation_measures`."""
    eps_db = float(selectivity_gabor(2.0, N).values_db)
    return eps_db, 2 * eps_db


def perturbation_at(omega0, N, c, K_factors=DEFAULT_K_FACTORS):
    """Oscillatory perturbation in dB evaluated at a concrete omega0.

    Direct evaluation of |Psi(omega - omega0; tau(omega))| at omega = 2 omega0;
    it agrees with :func:`perturbation_measures` for every omega0.
    """
    omega = 2.0 * omega0
    params = KernelParams(tau=_tau_for(omega, N), c=c)
    value = abs(limit_kernel_fourier(omega - omega0, params, n_factors=K_factors))
    return 20 * math.log10(value)


def _bisect(fun, lo, hi, max_iter=200):
    f_lo = fun(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = fun(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def band_width(kind, N, c=None, K_factors=DEFAULT_K_FACTORS, level=0.5):
    """Log-frequency edges where the selectivity R drops to ``level`` of its peak.

    kind : ``"gabor"`` or ``"time-causal"`` (alias ``"causal"``)
    """
    if kind == "gabor":
        # exp(-2 pi^2 N^2 (1 - e^-gamma)^2) = level  =>  1 - e^-gamma = +-a
        a = math.sqrt(-math.log(level) / 2.0) / (math.pi * N)
        if a >= 1:
            raise AnalysisError("no lower band edge for this N")
        return BandWidthReport(-math.log1p(a), -math.log1p(-a))
    if kind not in ("time-causal", "causal"):
        raise ConfigurationError(f"unknown kind {kind!r}")
    _check_c(c)
    log_level = math.log(level)

    def excess(gamma):
        x = -math.expm1(-gamma)
        return -0.5 * float(_causal_log_power(x, N, c, K_factors)) - log_level

    edges = []
    for side in (-1.0, 1.0):
        probe = side * np.linspace(1e-6, 1.0, 401)
        vals = np.array([excess(g) for g in probe])
        if np.any(np.diff(vals) > 0):
            raise AnalysisError("selectivity is not monotone on the search interval")
        crossing = np.nonzero(vals < 0)[0]
        if crossing.size == 0:
            raise AnalysisError("band edge not bracketed within |gamma| <= 1")
        i = crossing[0]
        lo = 0.0 if i == 0 else probe[i - 1]
        edges.append(float(_bisect(excess, float(lo), float(probe[i]))))
    return BandWidthReport(edges[0], edges[1])


def _golden_max(fun, a, b, tol):
    inv_phi = (mpmath.sqrt(5) - 1) / 2
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = fun(x1), fun(x2)
    while b - a > tol:
        if f1 > f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = fun(x2)
    return (a + b) / 2


def frequency_offset(N, c, C, K_factors=DEFAULT_K_FACTORS, tol=1e-22, bracket=0.01,
                     dps=50, include_perturbations=True):
    """Location gamma of the spectral peak for a fixed value C of the time factor.

    Maximizes (R^2 + T^2 - 2 R T C) / 4 over omega = omega0 exp(gamma) by a
    golden-section search in ``dps``-digit arithmetic; the offsets of
    interest are far below double precision resolution of the peak.
    """
    _check_c(c)
    with mpmath.workdps(dps):
        N_ = mpmath.mpf(N)
        c_ = mpmath.mpf(c)
        coef = [(2 * mpmath.pi * N_) ** 2 * c_ ** (-2 * k) * (c_ * c_ - 1)
                for k in range(1, K_factors + 1)]
        C_ = mpmath.mpf(C)

        def mag2(x):
            p = mpmath.mpf(1)
            for a in coef:
                p *= 1 + a * x * x
            return 1 / p

        def power(gamma):
            e = mpmath.exp(-gamma)
            R2 = mag2(1 - e)
            if not include_perturbations:
                return R2
            T2 = mag2(1 + e)
            return R2 + T2 - 2 * mpmath.sqrt(R2 * T2) * C_

        gamma = _golden_max(power, -mpmath.mpf(bracket), mpmath.mpf(bracket), mpmath.mpf(tol))
        return float(gamma)


def frequency_offset_bound(N, c, K_factors=DEFAULT_K_FACTORS, **kwargs):
    """max |gamma_hat| over the extreme values C = -1 and C = +1."""
    return max(abs(frequency_offset(N, c, C, K_factors, **kwargs)) for C in (-1.0, 1.0))
