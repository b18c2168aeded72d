"""Autoregressive model of a periodic signal, built two independent ways.

From a known set of frequencies (Vandermonde least squares) or directly from
data (stacked least squares over every shift). The companion matrix of the
coefficients carries the discrete-time eigenvalues ``exp(j*omega)``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError, TrajectoryTooShortError
from .numerics import DEFAULT_RANK_TOL, numerical_rank, pseudoinverse
from .trajectory import Trajectory


@dataclass(frozen=True)
class SpectralBasis:
    """Normalized angular frequencies in rad/step.

    Conjugate frequencies are listed explicitly, e.g. ``(0.3, -0.3)``. A zero
    frequency is the constant (bias) mode.
    """

    omegas: tuple

    def __post_init__(self):
        omegas = tuple(float(w) for w in self.omegas)
        if not omegas:
            raise DataError("spectral basis is empty")
        wrapped = np.angle(np.exp(1j * np.array(omegas)))
        for i in range(len(wrapped)):
            for j in range(i):
                if abs(np.exp(1j * wrapped[i]) - np.exp(1j * wrapped[j])) < 1e-12:
                    raise DataError(f"duplicate frequency {omegas[i]} (mod 2*pi)")
        object.__setattr__(self, "omegas", omegas)

    @property
    def includes_dc(self) -> bool:
        return any(abs(np.exp(1j * w) - 1.0) < 1e-12 for w in self.omegas)

    @property
    def size(self) -> int:
        return len(self.omegas)

    @classmethod
    def from_frequencies(cls, freqs, dc: bool = False) -> "SpectralBasis":
        """Build ``(+w1, -w1, +w2, -w2, ...)`` from positive frequencies."""
        omegas = [s * w for w in freqs for s in (1.0, -1.0)]
        return cls(tuple(([0.0] if dc else []) + omegas))


@dataclass(frozen=True, eq=False)
class ArModel:
    """``x(k+l) = sum_i coefficients[i] * x(k+i)`` with scalar coefficients shared across components."""

    coefficients: np.ndarray
    state_dim: int = 1
    residual: float = 0.0

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).reshape(-1)
        if c.size < 1 or not np.all(np.isfinite(c)):
            raise DataError("AR coefficients must be a non-empty finite vector")
        object.__setattr__(self, "coefficients", c)

    @property
    def order(self) -> int:
        return self.coefficients.size


@dataclass(frozen=True, eq=False)
class FourierFit:
    coefficients: np.ndarray  # (n, 2M)
    residual: float
    condition: float
    warning: str | None = None


def vandermonde(basis: SpectralBasis, k0: int = 0, cols: int | None = None) -> np.ndarray:
    """Matrix with entry ``(m, j) = exp(1j * omega_m * (k0 + j))``."""
    cols = basis.size if cols is None else cols
    if cols < basis.size:
        raise DataError(f"Vandermonde matrix needs at least {basis.size} columns, got {cols}")
    k = k0 + np.arange(cols)
    return np.exp(1j * np.outer(basis.omegas, k))


def _window(x):
    if isinstance(x, Trajectory):
        x = x.states
    x = np.asarray(x, dtype=float)
    return x[:, None] if x.ndim == 1 else x


def fourier_coefficients(window, basis: SpectralBasis, k0: int = 0,
                         rel_tol: float = DEFAULT_RANK_TOL) -> FourierFit:
    """Least-squares Fourier coefficients ``a = X V^+`` for samples starting at step ``k0``."""
    x = _window(window).T  # (n, T)
    if x.shape[1] < basis.size:
        raise TrajectoryTooShortError(basis.size, x.shape[1], "window")
    v = vandermonde(basis, k0, x.shape[1])
    s = np.linalg.svd(v, compute_uv=False)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else np.inf
    a = x @ pseudoinverse(v, rel_tol)
    resid = float(np.linalg.norm(a @ v - x))
    msg = None
    if cond > 1e12:
        msg = f"Vandermonde matrix is ill-conditioned (condition number {cond:.3g})"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return FourierFit(a, resid, cond, msg)


def ar_from_basis(basis: SpectralBasis, order: int, rel_tol: float = DEFAULT_RANK_TOL) -> ArModel:
    """AR coefficients ``alpha = V^+ y`` implied by a frequency set.

    ``V`` has rows ``exp(j*omega_m*i)`` for ``i < order`` and ``y`` holds
    ``exp(j*omega_m*order)``. The solution is unique for ``order == 2M`` and
    minimum-norm beyond that.
    """
    if order < basis.size:
        raise DataError(f"AR order {order} is below the basis size {basis.size}")
    v = vandermonde(basis, 0, order)
    if numerical_rank(np.linalg.svd(v, compute_uv=False), rel_tol) < basis.size:
        raise NumericalError("Vandermonde matrix is rank deficient")
    y = np.exp(1j * np.array(basis.omegas) * order)
    # row m: sum_i alpha_i exp(j w_m i) = exp(j w_m l)
    alpha = pseudoinverse(v, rel_tol) @ y
    if np.max(np.abs(alpha.imag), initial=0.0) > 1e-8 * max(1.0, np.max(np.abs(alpha))):
        raise NumericalError("basis is not closed under conjugation; AR coefficients are complex")
    return ArModel(alpha.real, 1)


def _shift_system(x, order):
    T, n = x.shape
    rows = T - order
    lhs = np.empty((rows * n, order))
    for i in range(order):
        lhs[:, i] = x[i:i + rows].reshape(-1)
    rhs = x[order:order + rows].reshape(-1)
    return lhs, rhs


def ar_fit(window, order: int, rel_tol: float = DEFAULT_RANK_TOL) -> ArModel:
    """Fit shared scalar AR coefficients by least squares over every shift and component."""
    x = _window(window)
    T, n = x.shape
    if order < 1:
        raise DataError(f"AR order must be >= 1, got {order}")
    if T < 2 * order + 1:
        raise TrajectoryTooShortError(2 * order + 1, T, "window")
    lhs, rhs = _shift_system(x, order)
    alpha = pseudoinverse(lhs, rel_tol) @ rhs
    resid = float(np.linalg.norm(lhs @ alpha - rhs))
    return ArModel(alpha, n, resid)


def ar_predict(model: ArModel, history, steps: int) -> np.ndarray:
    """Iterate the recurrence ``steps`` times from the last ``order`` states in ``history``.

    Returns the ``steps`` new states, shape ``(steps, n)``.
    """
    h = _window(history)
    l = model.order
    if h.shape[0] != l:
        raise DataError(f"history must hold exactly {l} states, got {h.shape[0]}")
    buf = np.empty((l + steps, h.shape[1]))
    buf[:l] = h
    alpha = model.coefficients
    for k in range(steps):
        buf[l + k] = alpha @ buf[k:k + l]
    return buf[l:]


def ar_one_step(model: ArModel, window) -> np.ndarray:
    """One-step-ahead predictions over a window: row ``k`` estimates ``x(k + order)``."""
    x = _window(window)
    lhs, _ = _shift_system(x, model.order)
    return (lhs @ model.coefficients).reshape(-1, x.shape[1])


def companion(model: ArModel) -> np.ndarray:
    """``l x l`` companion matrix: ones on the sub-diagonal, coefficients in the last column."""
    l = model.order
    c = np.zeros((l, l))
    c[np.arange(1, l), np.arange(l - 1)] = 1.0
    c[:, -1] = model.coefficients
    return c
