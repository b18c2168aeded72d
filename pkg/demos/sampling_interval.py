"""Sampling-interval sensitivity: fine while the top frequency is resolved, broken once it aliases."""
import numpy as np

from hankeldmd import Trajectory, TruncationPolicy
from hankeldmd import dynamics as dyn
from hankeldmd.experiments import sweep_sampling

# synthetic: two tones, 1 s base sampling
k = np.arange(3000.0)
x = np.stack([np.cos(0.05 * k) + 0.2 * np.cos(0.45 * k + 1), np.sin(0.05 * k) - 0.1 * np.sin(0.45 * k)], axis=1)
res = sweep_sampling(Trajectory(1.0, x), 4, [1, 2, 4, 6, 8, 10], 8, 2 * np.pi / 0.05)
print("two tones, aliasing above dt = pi/0.45 = 7.0 s")
for dt, e, et in zip(res.axis, res.eps, res.eps_train):
    print(f"  dt {dt:4.0f} s  eps on the fine grid {e:.1e}  on the samples {et:.1e}")

# ISS with J2 from 1-minute data. Short intervals leave 20 delays spanning
# too little of the orbit; long ones undersample it.
period = dyn.ISS_ELEMENTS.period()
fine = dyn.orbit_trajectory(dyn.ISS_ELEMENTS, "j2", 60.0, periods=11)
res = sweep_sampling(fine, 20, range(3, 19, 2), 10, period, TruncationPolicy(1 - 1e-10), max_workers=4)
print("ISS J2, 20 delays")
for dt, e, r in zip(res.axis, res.eps, res.rank):
    print(f"  dt {dt / 60:4.0f} min  rank {r:2d}  eps {e:.2e}")
