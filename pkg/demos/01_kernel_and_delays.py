"""The time-causal limit kernel: scale ladder, time constants and delays.

Run:  python demos/01_kernel_and_delays.py
"""

import numpy as np

from causalgabor.inverse import limit_kernel_impulse
from causalgabor.kernel import (SQRT2, KernelParams, continuous_time_constants, delay_estimates,
                                discrete_time_constants, scale_ladder)

# A window of standard deviation 10 ms at 44.1 kHz, expressed in samples.
fs = 44100.0
sigma = 0.010 * fs

for c, name in ((SQRT2, "sqrt2"), (2.0, "2")):
    params = KernelParams(tau=sigma ** 2, c=c, K=8)
    print(f"--- c = {name}")
    print("scale ladder sqrt(tau_k) [samples]:", np.round(np.sqrt(scale_ladder(params)), 2))
    print("continuous time constants:       ", np.round(continuous_time_constants(params), 2))
    print("discrete time constants:         ", np.round(discrete_time_constants(params), 2))

    # The kernel has no closed form in the time domain, so read it off the
    # impulse response of the recursive filters and compare with the
    # continuous delay estimates.
    h = limit_kernel_impulse(params, int(20 * sigma))
    n = np.arange(h.size)
    est = delay_estimates(params)
    print(f"mean delay: measured {np.sum(n * h) / fs * 1e3:.2f} ms, "
          f"estimate {est.mean_delay / fs * 1e3:.2f} ms")
    print(f"peak position: measured {np.argmax(h) / fs * 1e3:.2f} ms, "
          f"estimate {est.max_pos_delay / fs * 1e3:.2f} ms (slight overestimate)")
