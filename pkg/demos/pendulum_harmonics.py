"""A pendulum released from 90 degrees is periodic but not sinusoidal.

The odd harmonics of the fundamental show up as DMD modes. At 0.1 s
sampling the 7th harmonic lies above the Nyquist rate and folds back
below the 5th.
"""
import numpy as np

from hankeldmd import TruncationPolicy, fit_trajectory, frequencies_mhz
from hankeldmd import dynamics as dyn
from hankeldmd.experiments import samples_for

amp, dt = np.pi / 2, 0.1
T = dyn.pendulum_period(amp)
f0 = 1 / T
print(f"period {T:.6f} s (small-angle value 1 s), fundamental {f0:.4f} Hz")

traj = dyn.pendulum_trajectory(amp, dt, periods=10)
n = samples_for(10, T, dt)
for energy in (1 - 1e-8, 1 - 1e-10):
    model = fit_trajectory(traj.window(0, n), 11, TruncationPolicy(energy))
    nu = [f / 1000 for f, _ in frequencies_mhz(model)]
    print(f"energy 1 - {1 - energy:.0e}: rank {model.rank}, modes at " + ", ".join(f"{f:.4f}" for f in nu) + " Hz")

nyquist = 0.5 / dt
for h in (1, 3, 5, 7):
    f = h * f0
    folded = f if f < nyquist else 2 * nyquist - f
    print(f"  harmonic {h}: {f:.4f} Hz, seen at {folded:.4f} Hz")
