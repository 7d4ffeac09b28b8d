"""Reconstructing a signal from its time-causal spectrogram.

The inverse needs both quadrature channels and reads the spectrogram a
short while into the future of every reconstructed sample; a longer
horizon gathers more evidence.

Run:  python demos/05_inverse.py
"""

import math

import numpy as np

from causalgabor.inverse import InverseConfig, inverse_transform
from causalgabor.transform import FrequencyGrid, TransformConfig, causal_transform

fs = 8000.0
n = np.arange(int(fs))
x = np.sin(2 * np.pi * 440 * n / fs) + 0.5 * np.sin(2 * np.pi * 660 * n / fs + 1.0)

grid = FrequencyGrid(f_min=100.0, f_max=2000.0, per_octave=48, N=4)
config = TransformConfig(grid, fs, c=2.0)
spec = causal_transform(x, config)
sigma_max = math.sqrt(grid.tau_ref(fs).max()) / fs

centre = slice(2000, 6000)
for m in (1, 2, 4, 8):
    rec = inverse_transform(spec, config, InverseConfig(delta_u=m * sigma_max)).samples
    err = np.linalg.norm(rec[centre] - x[centre]) / np.linalg.norm(x[centre])
    print(f"horizon {m} x sigma_max = {m * sigma_max * 1e3:5.1f} ms   relative error {err:.2e}")
