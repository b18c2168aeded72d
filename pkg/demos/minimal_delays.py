"""How many delays does a sum of sinusoids need?

Each real frequency contributes a conjugate pair of modes, so a scalar
signal with M frequencies needs 2M delays before the Hankel matrix stops
gaining rank. An offset adds one more (real) mode.
"""
import numpy as np

from hankeldmd import Trajectory, TruncationPolicy, fit_trajectory
from hankeldmd.ar import ar_fit, companion
from hankeldmd.experiments import evaluate
from hankeldmd.hankel import minimal_delays

rng = np.random.default_rng(1)
k = np.arange(120)

for omegas, bias in (([0.4], 0.0), ([0.4, 1.1], 0.0), ([0.4, 1.1, 2.3], 0.0), ([0.4, 1.1], 0.5)):
    x = bias + sum(rng.uniform(0.5, 1.5) * np.cos(w * k + rng.uniform(0, 6)) for w in omegas)
    traj = Trajectory(1.0, x[:, None])
    res = minimal_delays(traj, l_max=12)
    print(f"M = {len(omegas)}, bias = {bias}: ranks {res.ranks.tolist()} -> l* = {res.l_star}")
    for l in range(max(1, res.l_star - 1), res.l_star + 2):
        eps = evaluate(fit_trajectory(traj, l, TruncationPolicy(1 - 1e-10)), traj, len(traj)).eps_train
        print(f"    l = {l:2d}: eps_train = {eps:.1e}")

# the AR view of the same fact: companion eigenvalues sit on the unit circle at the input frequencies
x = np.cos(0.4 * k) + 0.3 * np.cos(1.1 * k + 1.0)
lam = np.linalg.eigvals(companion(ar_fit(x, 4)))
print("AR(4) companion angles:", np.sort(np.abs(np.angle(lam))).round(6), "moduli:", np.abs(lam).round(9))
