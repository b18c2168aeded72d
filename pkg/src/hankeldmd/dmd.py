"""Exact DMD on delay-embedded snapshot pairs."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, NumericalError
from .hankel import HankelPair, build_hankel
from .numerics import DEFAULT_RANK_TOL, eig, numerical_rank, pseudoinverse, svd

DEFAULT_ENERGY = 1.0 - 1e-8


@dataclass(frozen=True)
class TruncationPolicy:
    """SVD energy thresholding: keep the fewest singular values whose squared
    sum reaches ``energy_fraction`` of the total, optionally capped at ``max_rank``.

    Singular values below ``rank_tol * s[0]`` are never kept, whatever the
    energy fraction says, since inverting them only amplifies round-off.
    """

    energy_fraction: float = DEFAULT_ENERGY
    max_rank: int | None = None
    rank_tol: float = DEFAULT_RANK_TOL
    modes: str = "exact"  # or "projected"
    amplitudes: str = "first"  # or "lstsq"

    def __post_init__(self):
        if not 0.0 < self.energy_fraction <= 1.0:
            raise DataError(f"energy_fraction must lie in (0, 1], got {self.energy_fraction}")
        if self.max_rank is not None and self.max_rank < 1:
            raise DataError(f"max_rank must be >= 1, got {self.max_rank}")
        if self.modes not in ("exact", "projected"):
            raise DataError(f"unknown mode variant {self.modes!r}")
        if self.amplitudes not in ("first", "lstsq"):
            raise DataError(f"unknown amplitude variant {self.amplitudes!r}")

    def rank(self, s) -> int:
        s = np.asarray(s, dtype=float)
        energy = s ** 2
        total = energy.sum()
        if total <= 0.0:
            return 0
        cumulative = np.cumsum(energy) / total
        r = int(np.searchsorted(cumulative, self.energy_fraction * (1 - 1e-15)) + 1)
        r = min(r, s.size, numerical_rank(s, self.rank_tol))
        if self.max_rank is not None:
            r = min(r, self.max_rank)
        return r


@dataclass(frozen=True, eq=False)
class DmdModel:
    """Fitted Hankel-DMD surrogate.

    ``modes`` has one column per eigenvalue and ``n * delays`` rows; the first
    ``state_dim`` rows describe the current state, the rest its delayed copies.
    """

    modes: np.ndarray
    eigenvalues: np.ndarray
    amplitudes: np.ndarray
    dt: float
    delays: int
    state_dim: int
    train_start: float = 0.0
    energy_threshold: float = DEFAULT_ENERGY
    singular_values: np.ndarray = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return self.eigenvalues.size

    @property
    def omega(self) -> np.ndarray:
        """Continuous-time frequencies ``ln(lambda) / dt`` in rad/s (principal branch)."""
        with np.errstate(divide="ignore"):
            return np.log(self.eigenvalues) / self.dt

    def dynamics(self, steps) -> np.ndarray:
        """Time coefficients ``b * lambda**k``, shape ``(r, len(steps))``."""
        steps = np.atleast_1d(np.asarray(steps))
        return self.amplitudes[:, None] * self.eigenvalues[:, None] ** steps[None, :]

    def reconstruct(self, steps) -> np.ndarray:
        """Complex embedded reconstruction ``Z diag(lambda**k) b``, shape ``(len(steps), n*l)``."""
        return (self.modes @ self.dynamics(steps)).T


def fit(pair: HankelPair, policy: TruncationPolicy | None = None, dt: float = 1.0,
        train_start: float = 0.0) -> DmdModel:
    """Fit exact DMD to a Hankel pair.

    The reduced operator is ``U_r^H H_{k+1} V_r S_r^{-1}``; its eigenvectors are
    lifted to exact modes ``H_{k+1} V_r S_r^{-1} W`` (or projected modes
    ``U_r W``). Amplitudes solve ``Z b = h_k[:, 0]`` in the least-squares sense.
    """
    policy = policy or TruncationPolicy()
    if not dt > 0:
        raise DataError(f"dt must be positive, got {dt}")
    u, s, v = svd(pair.h_k)
    r = policy.rank(s)
    if r == 0:
        raise NumericalError("empty model: all singular values are zero within tolerance")
    u_r, s_r, v_r = u[:, :r], s[:r], v[:, :r]
    lifted = pair.h_k1 @ v_r / s_r
    a_tilde = u_r.conj().T @ lifted
    eigenvalues, w = eig(a_tilde)
    modes = lifted @ w if policy.modes == "exact" else u_r @ w
    if policy.amplitudes == "first":
        amplitudes = pseudoinverse(modes) @ pair.h_k[:, 0]
    else:
        amplitudes = _lstsq_amplitudes(modes, eigenvalues, pair.h_k)
    return DmdModel(modes, eigenvalues, amplitudes, float(dt), pair.delays, pair.state_dim,
                    float(train_start), policy.energy_fraction, s)


def _lstsq_amplitudes(modes, eigenvalues, h_k):
    # min_b sum_j |Z diag(lambda^j) b - h_k[:, j]|^2, stacked over all columns
    cols = h_k.shape[1]
    powers = eigenvalues[None, :] ** np.arange(cols)[:, None]
    system = (modes[None, :, :] * powers[:, None, :]).reshape(-1, eigenvalues.size)
    return pseudoinverse(system) @ h_k.T.reshape(-1)


def fit_trajectory(traj, delays: int, policy: TruncationPolicy | None = None) -> DmdModel:
    """Convenience wrapper: embed ``traj`` with ``delays`` delays and fit."""
    return fit(build_hankel(traj, delays), policy, traj.dt, traj.t0)


def predict(model: DmdModel, k, return_imag: bool = False):
    """Predicted state at step(s) ``k`` counted from the start of training.

    Returns the real part of the leading ``state_dim`` rows of the embedded
    reconstruction; shape ``(n,)`` for scalar ``k`` and ``(len(k), n)``
    otherwise. With ``return_imag`` the largest discarded imaginary part is
    also returned, which should be round-off for conjugate-closed models.
    """
    scalar = np.ndim(k) == 0
    full = model.reconstruct(k)[:, :model.state_dim]
    out = full.real[0] if scalar else full.real
    if return_imag:
        return out, float(np.max(np.abs(full.imag))) if full.size else 0.0
    return out


def frequencies_mhz(model: DmdModel):
    """``(nu_mHz, |lambda|)`` per mode, one entry per conjugate pair, ascending in frequency."""
    out = []
    for lam, om in zip(model.eigenvalues, model.omega):
        if lam.imag < 0:
            continue
        nu = 0.0 if lam.imag == 0 else abs(om.imag) / (2 * np.pi) * 1000.0
        out.append((float(nu), float(abs(lam))))
    out.sort()
    return out


def _pairs(z):
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag], axis=-1).tolist()


def _unpairs(a):
    a = np.asarray(a, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def model_to_dict(model: DmdModel) -> dict:
    return {
        "format": "hankel-dmd-model",
        "version": 1,
        "dt": model.dt,
        "delays": model.delays,
        "state_dim": model.state_dim,
        "rank": model.rank,
        "train_start": model.train_start,
        "energy_threshold": model.energy_threshold,
        "eigenvalues": _pairs(model.eigenvalues),
        "amplitudes": _pairs(model.amplitudes),
        "modes": _pairs(model.modes),
        "singular_values": None if model.singular_values is None else np.asarray(model.singular_values).tolist(),
    }


def model_from_dict(doc: dict) -> DmdModel:
    try:
        eigenvalues = _unpairs(doc["eigenvalues"]).reshape(-1)
        modes = _unpairs(doc["modes"]).reshape(-1, eigenvalues.size)
        amplitudes = _unpairs(doc["amplitudes"]).reshape(-1)
        sv = doc.get("singular_values")
        model = DmdModel(modes, eigenvalues, amplitudes, float(doc["dt"]), int(doc["delays"]),
                         int(doc["state_dim"]), float(doc.get("train_start", 0.0)),
                         float(doc.get("energy_threshold", DEFAULT_ENERGY)),
                         None if sv is None else np.asarray(sv, dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed model document: {exc}") from exc
    if model.rank != int(doc["rank"]) or modes.shape[0] != model.delays * model.state_dim:
        raise DataError("model document dimensions are inconsistent")
    return model


def save_model(model: DmdModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1) + "\n")


def load_model(path) -> DmdModel:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return model_from_dict(doc)
