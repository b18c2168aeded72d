"""J2 and drag break exact periodicity, so more delays are needed and predictions degrade with horizon."""
import numpy as np

from hankeldmd import TruncationPolicy
from hankeldmd import dynamics as dyn
from hankeldmd.experiments import sweep_delays, sweep_horizon, sweep_window

period = dyn.ISS_ELEMENTS.period()
policy = TruncationPolicy(1 - 1e-10)

j2 = dyn.orbit_trajectory(dyn.ISS_ELEMENTS, "j2", 420.0, periods=20)
# B* ten times a typical ISS value so the decay is visible over ten orbits
drag = dyn.orbit_trajectory(dyn.ISS_ELEMENTS, dyn.DragConfig(bstar=3e-3), 1080.0, periods=20)

for name, traj, ls in (("J2, 7 min", j2, range(2, 17)), ("drag, 18 min", drag, range(2, 11))):
    res = sweep_delays(traj, ls, 10, period, policy, max_workers=4)
    print(name)
    for l, e, r in zip(res.axis, res.eps, res.rank):
        print(f"  l = {l:2d}  rank {r:2d}  eps {e:.2e}")

res = sweep_window(j2, 12, np.round(np.arange(7.0, 10.01, 0.3), 1), period, policy)
print("J2 with 12 delays, rank versus training window (periods):")
print("  " + "  ".join(f"{w:.1f}:{r}" for w, r in zip(res.axis, res.rank)))

for name, traj, l, w in (("J2", j2, 12, 8.9), ("drag", drag, 7, 9.4)):
    res = sweep_horizon(traj, l, w, np.arange(1, 11), period, policy)
    print(f"{name} prediction error by horizon: " + " ".join(f"{e:.1e}" for e in res.eps))
