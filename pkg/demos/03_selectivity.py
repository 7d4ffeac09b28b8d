"""Frequency selectivity of the two spectrograms for a pure sine wave.

Run:  python demos/03_selectivity.py
"""

import numpy as np

from causalgabor.analysis import (band_width, frequency_offset_bound, perturbation_measures,
                                  perturbation_measures_gabor, selectivity_causal,
                                  selectivity_gabor)
from causalgabor.kernel import SQRT2

ratios = np.array([0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.25])
print("omega/omega0 :", "  ".join(f"{r:7.2f}" for r in ratios))
for N in (4, 8):
    print(f"gabor  N={N}   :", "  ".join(f"{v:7.1f}" for v in selectivity_gabor(ratios, N).values_db))
    for c, name in ((SQRT2, "sqrt2"), (2.0, "2")):
        vals = selectivity_causal(ratios, N, c).values_db
        print(f"causal N={N} c={name:5s}:", "  ".join(f"{v:7.1f}" for v in vals))

print("\nhalf-power band edges (log frequency)")
for N in (4, 8):
    g = band_width("gabor", N)
    print(f"  gabor  N={N}: [{g.gamma_minus:+.4f}, {g.gamma_plus:+.4f}]")
    for c, name in ((SQRT2, "sqrt2"), (2.0, "2")):
        b = band_width("time-causal", N, c)
        print(f"  causal N={N} c={name}: [{b.gamma_minus:+.4f}, {b.gamma_plus:+.4f}]"
              f"  width ratio to gabor {b.delta_gamma / g.delta_gamma:.3f}")

print("\nsize of the interference with the mirrored frequency")
for N in (4, 8):
    print(f"  gabor  N={N}: {perturbation_measures_gabor(N)[0]:9.1f} dB")
    for c, name in ((SQRT2, "sqrt2"), (2.0, "2")):
        eps, _ = perturbation_measures(N, c)
        print(f"  causal N={N} c={name}: {eps:8.1f} dB, peak offset <= {frequency_offset_bound(N, c):.1e}")
