"""ISS on a two-body orbit: what Hankel-DMD finds in ten periods of 11-minute samples."""
import numpy as np

from hankeldmd import dynamics as dyn
from hankeldmd import fit_trajectory, frequencies_mhz, predict
from hankeldmd.experiments import evaluate, samples_for
from hankeldmd.spectral import dominant_peaks, fft_spectrum

dt = 660.0
period = dyn.ISS_ELEMENTS.period()
traj = dyn.orbit_trajectory(dyn.ISS_ELEMENTS, None, dt, periods=20)
n_train = samples_for(10, period, dt)
print(f"orbital period {period:.1f} s, {n_train} training samples")

model = fit_trajectory(traj.window(0, n_train), delays=5)
print(f"rank of the reduced operator: {model.rank}")
for lam in model.eigenvalues:
    print(f"  lambda = {lam.real:+.5f} {lam.imag:+.5f}j   |lambda| = {abs(lam):.6f}")

# one entry per conjugate pair; the real mode sits at 0 mHz
for nu, mag in frequencies_mhz(model):
    print(f"  {nu:.4f} mHz  (|lambda| {mag:.5f})")

# the FFT's second peak is a sidelobe of the fundamental, not the harmonic
spec = fft_spectrum(traj.window(0, n_train), pad_factor=8)
print("FFT peaks:", ", ".join(f"{f:.4f} mHz" for f, _ in dominant_peaks(spec, 2)))

rep = evaluate(model, traj, n_train, horizon=len(traj) - n_train)
print(f"eps over training {rep.eps_train:.2e}, over the next 10 periods {rep.eps_pred:.2e}")

k = len(traj) - 1
err = np.linalg.norm(predict(model, k)[:3] - traj.states[k, :3])
print(f"position error after 20 periods: {err * 1000:.1f} m")
