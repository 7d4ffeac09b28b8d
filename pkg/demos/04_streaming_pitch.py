"""Sample-by-sample frequency tracking of a gliding tone.

The transform is fed in blocks of 256 samples, as an audio callback would
deliver them, and the interpolated spectral peak is read off after every
block.  No look-ahead is involved.

Run:  python demos/04_streaming_pitch.py
"""

import numpy as np

from causalgabor.estimation import peak_frequency
from causalgabor.kernel import SQRT2
from causalgabor.transform import CausalGaborStream, FrequencyGrid, TransformConfig

fs = 16000.0
t = np.arange(int(2.0 * fs)) / fs
f_true = 300.0 * 2 ** (t / 2.0)                     # one octave up in two seconds
signal = np.sin(2 * np.pi * np.cumsum(f_true) / fs)
signal += 0.05 * np.random.default_rng(0).standard_normal(t.size)

grid = FrequencyGrid(f_min=150.0, f_max=1200.0, per_octave=48, N=4)
stream = CausalGaborStream(TransformConfig(grid, fs, c=SQRT2))

block = 256
for start in range(0, t.size, block):
    spec = stream.process(signal[start:start + block])
    if start % (block * 8):
        continue
    est = peak_frequency(spec.magnitude[-1], grid.freqs_hz, start + block - 1)
    now = (start + block - 1) / fs
    print(f"t = {now:5.3f} s   true {f_true[start + block - 1]:7.2f} Hz   "
          f"estimate {est.f_hat_hz:7.2f} Hz")

# The estimates trail the glide by roughly the delay of the kernel at each
# frequency, which is the price of never looking into the future.
