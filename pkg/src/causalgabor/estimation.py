"""Local frequency estimation from spectrograms and the noise benchmark.

A frequency estimate is the global maximum of a spectrogram column,
refined by fitting a parabola over log frequency through the maximum and
its two neighbours.  Accuracy is summarized by a multiplicative bias
``b = exp(mean log(f_hat / f_ref))`` and spread ``s = exp(std log(f_hat / f_ref))``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import InputError
from .kernel import SQRT2
from .report import AnalysisReport
from .transform import FrequencyGrid, TransformConfig, causal_transform, gabor_transform

INTERIOR_FRACTION = 0.1


@dataclass(frozen=True)
class FrequencyEstimate:
    time_index: int
    f_disc_hz: float
    f_hat_hz: float
    boundary: bool = False


@dataclass(frozen=True)
class BiasSpread:
    b: float
    s: float

    def __str__(self):
        return f"{self.b:.4f} */ {self.s:.4f}"


def _vertex(xm, x0, xp, ym, y0, yp):
    """Abscissa of the parabola through three points (x0 if degenerate)."""
    d0m, d0p = x0 - xm, x0 - xp
    num = d0m ** 2 * (y0 - yp) - d0p ** 2 * (y0 - ym)
    den = d0m * (y0 - yp) - d0p * (y0 - ym)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = x0 - 0.5 * num / den
    return np.where(den == 0, x0, v)


def peak_frequency(column, freqs_hz, time_index=0):
    """Interpolated peak of one spectrogram column, or ``None`` if it is all zero.

    Ties go to the lowest frequency.  A maximum on the first or last bin is
    returned uninterpolated with ``boundary=True``.
    """
    y = np.asarray(column, dtype=float)
    f = np.asarray(freqs_hz, dtype=float)
    if y.shape[0] < 3 or y.shape != f.shape:
        raise InputError("need at least three bins and one frequency per bin")
    if not np.any(y):
        return None
    j = int(np.argmax(y))
    if j == 0 or j == y.shape[0] - 1:
        return FrequencyEstimate(time_index, float(f[j]), float(f[j]), True)
    x = np.log(f[j - 1:j + 2])
    v = _vertex(x[0], x[1], x[2], y[j - 1], y[j], y[j + 1])
    return FrequencyEstimate(time_index, float(f[j]), float(np.exp(v)), False)


def peak_frequencies(magnitude, freqs_hz):
    """Vectorized :func:`peak_frequency` over the rows of a (T, J) magnitude array.

    Returns ``(f_hat, boundary)``; rows that are identically zero give NaN.
    """
    mag = np.asarray(magnitude, dtype=float)
    f = np.asarray(freqs_hz, dtype=float)
    J = f.shape[0]
    j = np.argmax(mag, axis=1)
    boundary = (j == 0) | (j == J - 1)
    jc = np.clip(j, 1, J - 2)
    rows = np.arange(mag.shape[0])
    x = np.log(f)
    v = _vertex(x[jc - 1], x[jc], x[jc + 1],
                mag[rows, jc - 1], mag[rows, jc], mag[rows, jc + 1])
    f_hat = np.where(boundary, f[j], np.exp(v))
    f_hat = np.where(mag.max(axis=1) > 0, f_hat, np.nan)
    return f_hat, boundary


def interior(n, fraction=INTERIOR_FRACTION):
    """Slice dropping ``fraction`` of the samples at each end."""
    cut = int(math.floor(n * fraction))
    return slice(cut, n - cut)


def bias_spread(estimates, f_ref):
    """Multiplicative bias and spread of frequency estimates around ``f_ref``."""
    f_hat = np.asarray(estimates, dtype=float)
    f_hat = f_hat[np.isfinite(f_hat)]
    if f_hat.size == 0:
        raise InputError("no frequency estimates to summarize")
    logs = np.log(f_hat / f_ref)
    return BiasSpread(float(np.exp(logs.mean())), float(np.exp(logs.std())))


def _bias_spread_from_logs(logs):
    logs = np.asarray(logs, dtype=float)
    if logs.size == 0:
        raise InputError("no frequency estimates to summarize")
    return BiasSpread(float(np.exp(logs.mean())), float(np.exp(logs.std())))


@dataclass(frozen=True)
class Variant:
    kind: str          # "time-causal" or "gabor"
    N: float
    c: float = None

    @property
    def label(self):
        if self.kind == "gabor":
            return f"non-causal N={self.N:g}"
        c = "sqrt2" if abs(self.c - SQRT2) < 1e-12 else f"{self.c:g}"
        return f"time-causal N={self.N:g} c={c}"


DEFAULT_VARIANTS = (
    Variant("time-causal", 4, SQRT2),
    Variant("time-causal", 4, 2.0),
    Variant("time-causal", 8, SQRT2),
    Variant("time-causal", 8, 2.0),
    Variant("gabor", 4),
    Variant("gabor", 8),
)

PAPER_INTERVALS = ((240.0, 480.0), (480.0, 960.0), (960.0, 1920.0),
                   (1920.0, 3840.0), (3840.0, 7680.0))
NOISE_LEVELS = (0.0, 0.01, 0.0316, 0.1, 0.316, 1.0)


@dataclass(frozen=True)
class BenchConfig:
    """Setup of the noise benchmark.

    ``desk`` runs two of the five octave intervals with three tones each
    over 0.5 s; ``full`` is five intervals with ten 3 s tones each.
    """

    intervals: tuple = ((480.0, 960.0), (1920.0, 3840.0))
    per_interval: int = 3
    duration: float = 0.5
    noise_levels: tuple = NOISE_LEVELS
    variants: tuple = DEFAULT_VARIANTS
    seed: int = 0
    sample_rate: float = 44100.0
    per_octave: int = 48
    f_min: float = 20.0
    f_max: float = 16000.0
    K: int = 8
    scale: str = "desk"

    @classmethod
    def desk(cls, seed=0, **kwargs):
        return cls(seed=seed, **kwargs)

    @classmethod
    def full(cls, seed=0, **kwargs):
        return cls(intervals=PAPER_INTERVALS, per_interval=10, duration=3.0,
                   seed=seed, scale="full", **kwargs)

    def transform_config(self, variant):
        grid = FrequencyGrid(f_min=self.f_min, f_max=self.f_max, per_octave=self.per_octave,
                             N=variant.N, threshold="hard")
        if variant.kind == "gabor":
            return TransformConfig(grid, self.sample_rate, K=self.K, window_kind="gabor-sampled")
        return TransformConfig(grid, self.sample_rate, c=variant.c, K=self.K)


def bench_frequencies(config):
    """Log-uniform random test frequencies, one array per interval."""
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    return [np.exp(rng.uniform(math.log(lo), math.log(hi), config.per_interval))
            for lo, hi in config.intervals]


def _noise(config, index, n):
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 1, index]))
    return rng.standard_normal(n)


def _interior_values(signal, config, variant):
    cfg = config.transform_config(variant)
    spec = causal_transform(signal, cfg) if variant.kind == "time-causal" else gabor_transform(signal, cfg)
    keep = interior(signal.shape[0])
    return spec.values[keep], spec.freqs_hz


def _log_errors(values, freqs_hz, f_ref):
    f_hat, _ = peak_frequencies(np.abs(values), freqs_hz)
    f_hat = f_hat[np.isfinite(f_hat)]
    return np.log(f_hat / f_ref)


def noise_benchmark(config=None, progress=None):
    """Bias and spread of frequency estimates for noisy sine waves.

    Each tone has amplitude 1; the noise at level ``nu`` is ``nu`` times one
    fixed white Gaussian realization per tone, so all levels and variants see
    the same noise shape.  Since the transforms are linear, the tone and the
    noise are transformed once and combined per level.  Log ratios from the
    central 80 % of every run are pooled with equal weight per time sample.
    """
    config = BenchConfig() if config is None else config
    freqs = np.concatenate(bench_frequencies(config))
    n = int(round(config.duration * config.sample_rate))
    t = np.arange(n) / config.sample_rate
    pooled = {(v, nu): [] for v in config.variants for nu in config.noise_levels}
    for i, f_ref in enumerate(freqs):
        tone = np.sin(2 * np.pi * f_ref * t)
        noise = _noise(config, i, n)
        for variant in config.variants:
            h_tone, fq = _interior_values(tone, config, variant)
            h_noise, _ = _interior_values(noise, config, variant)
            for nu in config.noise_levels:
                values = h_tone if nu == 0 else h_tone + nu * h_noise
                pooled[variant, nu].append(_log_errors(values, fq, f_ref))
                if progress is not None:
                    progress(i, nu, variant)
    cols = {"variant": [], "nu": [], "b": [], "s": [], "n_estimates": []}
    for variant in config.variants:
        for nu in config.noise_levels:
            logs = np.concatenate(pooled[variant, nu])
            bs = _bias_spread_from_logs(logs)
            cols["variant"].append(variant.label)
            cols["nu"].append(nu)
            cols["b"].append(bs.b)
            cols["s"].append(bs.s)
            cols["n_estimates"].append(int(logs.size))
    meta = {
        "scale": config.scale,
        "seed": config.seed,
        "intervals": [list(iv) for iv in config.intervals],
        "per_interval": config.per_interval,
        "duration": config.duration,
        "sample_rate": config.sample_rate,
        "per_octave": config.per_octave,
        "f_min": config.f_min,
        "f_max": config.f_max,
        "K": config.K,
        "noise_levels": list(config.noise_levels),
        "frequencies": freqs.tolist(),
    }
    return AnalysisReport("noise_benchmark", cols, meta)


def format_table(report):
    """Render a benchmark report as ``b */ s`` rows, one per variant."""
    levels = report.metadata.get("noise_levels") or sorted(set(report.columns["nu"]))
    header = "variant".ljust(28) + "".join(f"nu={nu:<17g}" for nu in levels)
    lines = [header]
    by_variant = {}
    for row in report.rows():
        by_variant.setdefault(row["variant"], {})[row["nu"]] = row
    for label, cells in by_variant.items():
        text = "".join(f"{cells[nu]['b']:.4f} */ {cells[nu]['s']:.4f}   " for nu in levels)
        lines.append(label.ljust(28) + text.rstrip())
    return "\n".join(lines)
