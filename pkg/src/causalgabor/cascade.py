"""First-order recursive filters coupled in cascade.

Every layer performs the normalized update

    out(t) = out(t-1) + (in(t) - out(t-1)) * a,    a = 1 / (1 + mu)

where the input of layer k is the output of layer k-1 from the *same* time
step.  The scalar :func:`step` and the compiled batch kernels below use the
identical sequence of floating point operations, so streaming and batch
processing agree bit for bit.
"""

from dataclasses import dataclass, field
import math

import numba
import numpy as np

from .errors import ConfigurationError, InputError

INIT_POLICIES = ("zero", "first-sample")


@dataclass
class CascadeState:
    """State of one channel: current and previous output of every layer."""

    mu: tuple
    levels: tuple = None
    levels_prev: tuple = None

    def __post_init__(self):
        self.mu = tuple(float(m) for m in self.mu)
        if any(not (m >= 0) for m in self.mu):
            raise ConfigurationError("time constants must be non-negative")
        K = len(self.mu)
        if self.levels is None:
            self.levels = (0.0,) * K
        if self.levels_prev is None:
            self.levels_prev = tuple(self.levels)
        self.levels = tuple(float(v) for v in self.levels)
        self.levels_prev = tuple(float(v) for v in self.levels_prev)
        if len(self.levels) != K or len(self.levels_prev) != K:
            raise ConfigurationError("levels must have one entry per layer")

    @classmethod
    def initial(cls, mu, value=0.0):
        K = len(mu)
        return cls(mu=mu, levels=(value,) * K, levels_prev=(value,) * K)

    @property
    def output(self):
        return self.levels[-1]


@dataclass(frozen=True)
class StreamSample:
    value: float
    index: int = field(default=0)


def step(state, value):
    """Advance ``state`` by one input sample; returns ``(new_state, output)``."""
    inp = float(value)
    new = []
    for mu, prev in zip(state.mu, state.levels_prev):
        level = prev + (inp - prev) * (1.0 / (1.0 + mu))
        new.append(level)
        inp = level
    levels = tuple(new)
    return CascadeState(mu=state.mu, levels=levels, levels_prev=levels), levels[-1]


@numba.njit(cache=True)
def _cascade_kernel(x, mu, prev, out):
    K = mu.shape[0]
    gain = 1.0 / (1.0 + mu)
    for n in range(x.shape[0]):
        inp = x[n]
        for k in range(K):
            level = prev[k] + (inp - prev[k]) * gain[k]
            prev[k] = level
            inp = level
        out[n] = inp


def _validated_mu(mu):
    mu = np.ascontiguousarray(mu, dtype=float)
    if mu.ndim != 1:
        raise ConfigurationError("mu must be one-dimensional")
    if np.any(~(mu >= 0)):
        raise ConfigurationError("time constants must be non-negative")
    return mu


def run_batch(mu, signal, init="zero"):
    """Filter a whole signal through the cascade with time constants ``mu``.

    ``init`` selects the starting state: ``"zero"`` (all layers at 0) or
    ``"first-sample"`` (all layers at ``signal[0]``, which removes the onset
    transient for signals that start away from zero).
    """
    x = np.ascontiguousarray(signal, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InputError("signal must be a non-empty 1-D sequence")
    if init not in INIT_POLICIES:
        raise ConfigurationError(f"unknown init policy {init!r}; expected one of {INIT_POLICIES}")
    mu = _validated_mu(mu)
    prev = np.full(mu.shape[0], x[0] if init == "first-sample" else 0.0)
    out = np.empty_like(x)
    if mu.size == 0:
        out[:] = x
        return out
    _cascade_kernel(x, mu, prev, out)
    return out


def impulse_response(mu, length):
    """Response of the cascade to a unit impulse, ``length`` samples long."""
    if length < 1:
        raise InputError("length must be positive")
    x = np.zeros(int(length))
    x[0] = 1.0
    return run_batch(mu, x)


def sign_changes(signal):
    """Number of strict sign alternations, zeros skipped."""
    s = np.sign(np.asarray(signal, dtype=float))
    s = s[s != 0]
    if s.size < 2:
        return 0
    return int(np.count_nonzero(s[1:] != s[:-1]))


@numba.njit(cache=True)
def _modulated_bank_kernel(x, n0, wdt, gain, state, out_cos, out_sin, layers, record):
    # state[0, k, j] / state[1, k, j]: cosine / sine channel of layer k at frequency j;
    # the inner loop runs over frequencies so it vectorizes
    K, J = gain.shape
    inc = np.empty(J)
    ins = np.empty(J)
    for i in range(x.shape[0]):
        n = n0 + i
        xi = x[i]
        for j in range(J):
            phase = wdt[j] * n
            inc[j] = xi * math.cos(phase)
            ins[j] = -xi * math.sin(phase)
        for k in range(K):
            for j in range(J):
                pc = state[0, k, j]
                ps = state[1, k, j]
                lc = pc + (inc[j] - pc) * gain[k, j]
                ls = ps + (ins[j] - ps) * gain[k, j]
                state[0, k, j] = lc
                state[1, k, j] = ls
                inc[j] = lc
                ins[j] = ls
            if record:
                for j in range(J):
                    layers[i, j, k, 0] = inc[j]
                    layers[i, j, k, 1] = ins[j]
        for j in range(J):
            out_cos[i, j] = inc[j]
            out_sin[i, j] = ins[j]


class ModulatedCascadeBank:
    """Cosine/sine modulation followed by one cascade per frequency and channel.

    The bank keeps its state and a running sample counter between calls to
    :meth:`process`, so a signal can be fed in chunks of any size.

    wdt : angular frequency times sampling interval, one per channel (rad/sample)
    mu : discrete time constants, shape (n_freqs, n_layers)
    """

    def __init__(self, wdt, mu):
        self.wdt = np.ascontiguousarray(wdt, dtype=float)
        self.mu = np.ascontiguousarray(mu, dtype=float)
        if self.mu.ndim != 2 or self.mu.shape[0] != self.wdt.shape[0]:
            raise ConfigurationError("mu must have shape (n_freqs, n_layers)")
        if np.any(~(self.mu >= 0)):
            raise ConfigurationError("time constants must be non-negative")
        self.gain = np.ascontiguousarray((1.0 / (1.0 + self.mu)).T)
        self.reset()

    def reset(self):
        J, K = self.mu.shape
        self.state = np.zeros((2, K, J))
        self.n = 0

    def levels(self):
        """Current layer outputs, shape (n_freqs, n_layers, 2)."""
        return self.state.transpose(2, 1, 0).copy()

    def process(self, chunk, record_layers=False):
        """Filter the next chunk; returns ``(cos, sin[, layers])`` arrays of shape (T, J)."""
        x = np.ascontiguousarray(chunk, dtype=float)
        if x.ndim != 1:
            raise InputError("chunk must be one-dimensional")
        T = x.shape[0]
        J, K = self.mu.shape
        out_cos = np.empty((T, J))
        out_sin = np.empty((T, J))
        layers = np.empty((T, J, K, 2)) if record_layers else np.empty((0, 0, 0, 2))
        _modulated_bank_kernel(x, self.n, self.wdt, self.gain, self.state,
                               out_cos, out_sin, layers, record_layers)
        self.n += T
        if record_layers:
            return out_cos, out_sin, layers
        return out_cos, out_sin
