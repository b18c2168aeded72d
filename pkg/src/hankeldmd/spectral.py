"""Zero-padded FFT magnitude spectra and peak picking."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .trajectory import Trajectory


@dataclass(frozen=True, eq=False)
class Spectrum:
    freqs: np.ndarray  # Hz, ascending, n_fft // 2 + 1 entries
    magnitudes: np.ndarray  # (len(freqs), n) per component
    pad_factor: int
    window: str | None
    n_fft: int
    n_samples: int

    @property
    def aggregate(self) -> np.ndarray:
        """Root-sum-square of the component magnitudes."""
        return np.sqrt(np.sum(self.magnitudes ** 2, axis=1))

    @property
    def bin_width(self) -> float:
        return float(self.freqs[1] - self.freqs[0]) if self.freqs.size > 1 else np.inf


def next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def fft_spectrum(traj: Trajectory, pad_factor: int = 8, window: str | None = None) -> Spectrum:
    """One-sided magnitude spectrum of every component.

    Each component is (optionally) Hamming-windowed and zero-padded to
    ``pad_factor * next_pow2(T)`` samples before the transform.
    """
    if pad_factor < 1:
        raise DataError(f"pad_factor must be >= 1, got {pad_factor}")
    x = traj.states
    T = x.shape[0]
    if T < 1:
        raise DataError("cannot take the spectrum of an empty trajectory")
    if window not in (None, "none", "hamming"):
        raise DataError(f"unsupported window {window!r}")
    if window == "hamming":
        x = x * np.hamming(T)[:, None]
    else:
        window = None
    n_fft = pad_factor * next_pow2(T)
    mags = np.abs(np.fft.rfft(x, n=n_fft, axis=0))
    freqs = np.fft.rfftfreq(n_fft, d=traj.dt)
    return Spectrum(freqs, mags, pad_factor, window, n_fft, T)


def dominant_peaks(spec: Spectrum, count: int = 1, magnitudes=None, rel_floor: float = 1e-10):
    """The ``count`` largest local maxima as ``(freq_mHz, magnitude)``, largest first.

    A peak is a strict maximum over its two neighbours (edge bins compare with
    their single neighbour). Interior peaks are refined by fitting a parabola
    to the log-magnitudes of the three bins. Maxima below ``rel_floor`` times
    the global maximum are round-off and ignored.
    """
    if count < 1:
        raise DataError(f"count must be >= 1, got {count}")
    mag = spec.aggregate if magnitudes is None else np.asarray(magnitudes, dtype=float)
    top = float(mag.max()) if mag.size else 0.0
    if top <= 0:
        return []
    df = spec.bin_width
    found = []
    last = mag.size - 1
    for k in range(mag.size):
        left = mag[k - 1] if k > 0 else -np.inf
        right = mag[k + 1] if k < last else -np.inf
        if not (mag[k] > left and mag[k] > right) or mag[k] <= rel_floor * top:
            continue
        freq, amp = spec.freqs[k], mag[k]
        if 0 < k < last:
            # log fit inside a main lobe; near a null the log blows up, so
            # fall back to a parabola on the magnitudes themselves
            log_fit = min(left, right) > 1e-3 * mag[k]
            a, b, c = (np.log([left, mag[k], right]) if log_fit else (left, mag[k], right))
            denom = a - 2 * b + c
            if denom < 0:
                delta = 0.5 * (a - c) / denom
                freq = spec.freqs[k] + delta * df
                peak = b - 0.25 * (a - c) * delta
                amp = np.exp(peak) if log_fit else peak
        found.append((float(freq) * 1000.0, float(amp)))
    found.sort(key=lambda p: -p[1])
    return found[:count]



def dominant_period(traj: Trajectory, pad_factor: int = 8) -> float:
    """Period (s) of the strongest non-DC spectral peak, for data without a known period."""
    spec = fft_spectrum(traj.with_states(traj.states - traj.states.mean(axis=0)), pad_factor)
    peaks = [p for p in dominant_peaks(spec, count=8) if p[0] > 0]
    if not peaks:
        raise DataError("no oscillatory peak found to estimate the period")
    return 1000.0 / peaks[0][0]
