"""Spectrograms of a synthetic chord with three window choices.

Writes PGM images (time left to right, low frequencies at the bottom,
-60 dB to 0 dB mapped to black to white) into the current directory.

Run:  python demos/02_spectrograms.py
"""

import numpy as np

from causalgabor.io import write_spectrogram
from causalgabor.transform import FrequencyGrid, TransformConfig, transform

fs = 44100.0
t = np.arange(int(1.5 * fs)) / fs

# A-major triad entering one note at a time, then a click.
signal = np.zeros_like(t)
for k, f in enumerate((440.0, 554.37, 659.26)):
    signal += np.where(t >= 0.25 * k, np.sin(2 * np.pi * f * t), 0.0)
signal[int(1.2 * fs)] += 5.0

grid = FrequencyGrid(f_min=110.0, f_max=3520.0, per_octave=24, N=8)
for kind, name in (("time-causal-limit", "causal"), ("gabor-sampled", "gabor"),
                   ("gabor-truncated-shifted", "gabor_truncated")):
    spec = transform(signal, TransformConfig(grid, fs, c=2.0, window_kind=kind))
    path = f"chord_{name}.pgm"
    write_spectrogram(spec, path, "pgm", decimate=128)
    print(f"{name:16s} -> {path}  ({spec.cos_part.shape[0]} samples x {grid.freqs_hz.size} bins)")

# The causal spectrogram reacts to each note only after it has begun, with
# a delay that grows with the window scale; the non-causal Gabor spectrogram
# smears every onset symmetrically into the past; the truncated shifted
# window is causal too but spreads each onset over a wide frequency band.
