"""Error metric and parameter sweeps (delays, training window, horizon, sampling interval).

Window sizes are counted in periods of the dominant motion (orbital or
pendulum period) supplied by the caller.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dmd import DmdModel, TruncationPolicy, fit, predict
from .dynamics import resample
from .errors import DataError, HankelDmdError, TrajectoryTooShortError
from .hankel import build_hankel
from .trajectory import Trajectory


# normalized errors closer than this are round-off and count as ties
ROUNDOFF_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class ErrorReport:
    eps_train: float
    eps_pred: float | None
    eps_series: np.ndarray
    groups_used: tuple


def _groups(n, groups):
    groups = tuple(tuple(g) for g in (groups or ()) if len(g))
    return groups or (tuple(range(n)),)


def epsilon_series(truth, estimate, groups=()) -> np.ndarray:
    """Per-step normalized 2-norm error, averaged over component groups.

    For each group the error at step ``k`` is ``||xhat_g(k) - x_g(k)||_2``
    divided by the largest absolute truth component of that group over the
    window.
    """
    x = np.asarray(truth.states if isinstance(truth, Trajectory) else truth, dtype=float)
    xh = np.asarray(estimate, dtype=float)
    x = x[:, None] if x.ndim == 1 else x
    xh = xh[:, None] if xh.ndim == 1 else xh
    if x.shape != xh.shape:
        raise DataError(f"truth {x.shape} and estimate {xh.shape} differ in shape")
    per_group = []
    for g in _groups(x.shape[1], groups):
        g = list(g)
        scale = np.max(np.abs(x[:, g])) if x.size else 0.0
        if scale == 0:
            raise DataError(f"undefined normalization: truth group {g} is identically zero")
        per_group.append(np.linalg.norm(xh[:, g] - x[:, g], axis=1) / scale)
    return np.mean(per_group, axis=0)


def epsilon(truth, estimate, groups=None) -> ErrorReport:
    """Error report for a single window; ``groups`` defaults to the truth trajectory's groups."""
    if groups is None:
        groups = truth.groups if isinstance(truth, Trajectory) else ()
    series = epsilon_series(truth, estimate, groups)
    n = np.shape(truth.states if isinstance(truth, Trajectory) else truth)[1:2] or (1,)
    return ErrorReport(float(series.mean()), None, series, _groups(n[0], groups))


def evaluate(model: DmdModel, traj: Trajectory, n_train: int, horizon: int = 0) -> ErrorReport:
    """Training error on the first ``n_train`` samples, prediction error on the next ``horizon``."""
    if n_train + horizon > len(traj):
        raise TrajectoryTooShortError(n_train + horizon, len(traj))
    groups = _groups(traj.n, traj.groups)
    train = epsilon_series(traj.states[:n_train], predict(model, np.arange(n_train)), groups)
    pred = None
    series = train
    if horizon > 0:
        k = np.arange(n_train, n_train + horizon)
        pred_series = epsilon_series(traj.states[k], predict(model, k), groups)
        pred = float(pred_series.mean())
        series = np.concatenate([train, pred_series])
    return ErrorReport(float(train.mean()), pred, series, groups)


def samples_for(periods: float, period: float, dt: float) -> int:
    return int(round(periods * period / dt))


@dataclass(frozen=True, eq=False)
class SweepResult:
    axis_name: str
    axis: np.ndarray
    eps: np.ndarray
    rank: np.ndarray
    eps_train: np.ndarray
    fixed_params: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    @property
    def best(self) -> int:
        """Index of the smallest error; ties within round-off go to the earliest point.

        Failed points are ignored.
        """
        lowest = np.nanmin(self.eps)
        return int(np.flatnonzero(self.eps <= lowest + ROUNDOFF_EPS)[0])

    @property
    def best_value(self):
        return self.axis[self.best]

    def floor_index(self, factor: float = 2.0) -> int:
        """First index whose error is within ``factor`` of the sweep minimum."""
        floor = factor * np.nanmin(self.eps) + ROUNDOFF_EPS
        return int(np.flatnonzero(self.eps <= floor)[0])

    def within_floor(self, value, factor: float = 2.0) -> bool:
        i = int(np.flatnonzero(self.axis == value)[0])
        return bool(self.eps[i] <= factor * np.nanmin(self.eps) + ROUNDOFF_EPS)


def _run(points, fn, max_workers):
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            return list(pool.map(fn, points))
    return [fn(p) for p in points]


def _point(fn):
    # failures at one sweep point are recorded, not raised
    def wrapped(p):
        try:
            return fn(p) + (None,)
        except HankelDmdError as exc:
            return np.nan, 0, np.nan, f"{type(exc).__name__}: {exc}"
    return wrapped


def _collect(name, axis, results, fixed):
    axis = np.asarray(axis)
    if axis.size > 1 and np.any(np.diff(axis) <= 0):
        raise DataError(f"sweep axis {name!r} must be strictly increasing")
    eps = np.array([r[0] for r in results], dtype=float)
    rank = np.array([r[1] for r in results], dtype=int)
    eps_train = np.array([r[2] for r in results], dtype=float)
    errors = {axis[i].item(): r[3] for i, r in enumerate(results) if r[3] is not None}
    return SweepResult(name, axis, eps, rank, eps_train, dict(fixed), errors)


def _fit_window(traj, delays, n_train, policy):
    if n_train > len(traj):
        raise TrajectoryTooShortError(n_train, len(traj))
    window = traj.window(0, n_train)
    return fit(build_hankel(window, delays), policy, traj.dt, traj.t0)


def sweep_delays(traj: Trajectory, delays, train_periods: float, period: float,
                 policy: TruncationPolicy | None = None, max_workers: int | None = None) -> SweepResult:
    """Training error and rank of the reduced operator for each delay count (no extrapolation)."""
    policy = policy or TruncationPolicy()
    n_train = samples_for(train_periods, period, traj.dt)

    @_point
    def run(l):
        model = _fit_window(traj, int(l), n_train, policy)
        e = evaluate(model, traj, n_train).eps_train
        return e, model.rank, e

    fixed = {"train_periods": train_periods, "period": period, "dt": traj.dt,
             "energy_fraction": policy.energy_fraction}
    return _collect("delays", delays, _run(list(delays), run, max_workers), fixed)


def sweep_window(traj: Trajectory, delays: int, train_periods, period: float,
                 policy: TruncationPolicy | None = None, max_workers: int | None = None) -> SweepResult:
    """Training error and rank versus training-window length (in periods) at fixed delays."""
    policy = policy or TruncationPolicy()

    @_point
    def run(p):
        n_train = samples_for(p, period, traj.dt)
        model = _fit_window(traj, delays, n_train, policy)
        e = evaluate(model, traj, n_train).eps_train
        return e, model.rank, e

    fixed = {"delays": delays, "period": period, "dt": traj.dt,
             "energy_fraction": policy.energy_fraction}
    return _collect("train_periods", train_periods, _run(list(train_periods), run, max_workers), fixed)


def sweep_horizon(traj: Trajectory, delays: int, train_periods: float, horizon_periods, period: float,
                  policy: TruncationPolicy | None = None, max_workers: int | None = None) -> SweepResult:
    """Prediction error over ``[end of training, end of training + horizon)`` per horizon.

    A zero horizon has no prediction error (``nan``); its training error is
    still reported in ``eps_train``.
    """
    policy = policy or TruncationPolicy()
    n_train = samples_for(train_periods, period, traj.dt)
    horizons = list(horizon_periods)
    needed = n_train + samples_for(max(horizons), period, traj.dt)
    if needed > len(traj):
        raise TrajectoryTooShortError(needed, len(traj))
    model = _fit_window(traj, delays, n_train, policy)

    @_point
    def run(h):
        rep = evaluate(model, traj, n_train, samples_for(h, period, traj.dt))
        return (np.nan if rep.eps_pred is None else rep.eps_pred), model.rank, rep.eps_train

    fixed = {"delays": delays, "train_periods": train_periods, "period": period, "dt": traj.dt,
             "energy_fraction": policy.energy_fraction}
    return _collect("horizon_periods", horizons, _run(horizons, run, max_workers), fixed)


def predict_times(model: DmdModel, times) -> np.ndarray:
    """Evaluate the continuous-time model ``Z exp(Omega t) b`` at absolute times."""
    k = (np.asarray(times, dtype=float) - model.train_start) / model.dt
    return predict(model, k)


def sweep_sampling(traj_fine: Trajectory, delays: int, dt_multiples, train_periods: float, period: float,
                   policy: TruncationPolicy | None = None, max_workers: int | None = None) -> SweepResult:
    """Error versus sampling interval.

    For each multiple the fine trajectory is decimated, the model is fitted on
    the training span, and the continuous-time reconstruction is scored
    against every fine sample of that span. Aliasing therefore shows up as
    error even when the coarse samples are reproduced exactly.
    """
    policy = policy or TruncationPolicy()
    multiples = [int(m) for m in dt_multiples]
    n_fine = samples_for(train_periods, period, traj_fine.dt)
    if n_fine > len(traj_fine):
        raise TrajectoryTooShortError(n_fine, len(traj_fine))
    truth = traj_fine.window(0, n_fine)

    @_point
    def run(mult):
        coarse = resample(traj_fine, mult * traj_fine.dt)
        n_train = samples_for(train_periods, period, coarse.dt)
        model = _fit_window(coarse, delays, n_train, policy)
        e_coarse = evaluate(model, coarse, n_train).eps_train
        est = predict_times(model, truth.times)
        e = float(epsilon_series(truth, est, truth.groups).mean())
        return e, model.rank, e_coarse

    fixed = {"delays": delays, "train_periods": train_periods, "period": period,
             "base_dt": traj_fine.dt, "energy_fraction": policy.energy_fraction}
    axis = np.array(multiples, dtype=float) * traj_fine.dt
    return _collect("dt", axis, _run(multiples, run, max_workers), fixed)
