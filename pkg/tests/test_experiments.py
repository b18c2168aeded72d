import numpy as np
import pytest

from hankeldmd import Trajectory, TruncationPolicy, fit_trajectory
from hankeldmd.errors import DataError
from hankeldmd.experiments import (epsilon, epsilon_series, evaluate, samples_for, sweep_delays, sweep_horizon,
                                   sweep_sampling, sweep_window)
from conftest import signal_traj

TIGHT = TruncationPolicy(1 - 1e-10)


def non_decreasing(e, wiggle=0.1):
    return all(e[i + 1] >= (1 - wiggle) * np.max(e[:i + 1]) for i in range(len(e) - 1))


def test_epsilon_examples():
    x = np.random.default_rng(0).normal(size=(10, 6))
    assert epsilon(x, x, ((0, 1, 2), (3, 4, 5))).eps_train == 0.0
    series = epsilon_series(np.array([1.0, 2.0]), np.array([1.0, 3.0]))
    assert series[1] == pytest.approx(0.5)
    assert series[0] == 0.0


def test_epsilon_averages_groups():
    truth = np.array([[10.0, 0.0, 1.0], [0.0, 10.0, 1.0]])
    est = truth + np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.5]])
    # group (0,1) scale 10, group (2,) scale 1
    series = epsilon_series(truth, est, ((0, 1), (2,)))
    assert series == pytest.approx([0.5 * (0.1 + 0.0), 0.5 * (0.0 + 0.5)])


def test_epsilon_undefined_normalization():
    with pytest.raises(DataError, match="undefined normalization"):
        epsilon_series(np.zeros((3, 2)), np.ones((3, 2)), ((0,), (1,)))


def test_epsilon_shape_mismatch():
    with pytest.raises(DataError):
        epsilon_series(np.zeros((3, 2)), np.zeros((3, 3)))


def test_iss_training_error(iss_kepler, iss_period):
    n = samples_for(10, iss_period, 660.0)
    model = fit_trajectory(iss_kepler.window(0, n), 5)
    rep = evaluate(model, iss_kepler, n)
    assert rep.eps_train < 1e-6
    assert rep.eps_pred is None
    assert rep.groups_used == ((0, 1, 2), (3, 4, 5))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_train_error_drops_exactly_at_2m(m):
    omegas = [0.29, 0.97, 1.9][:m]
    traj = signal_traj(omegas, 120, seed=10 + m)
    period = 2 * np.pi / omegas[0]
    res = sweep_delays(traj, range(1, 2 * m + 3), 100 / period, period, TIGHT)
    eps = dict(zip(res.axis, res.eps))
    assert eps[2 * m] < 1e-8
    assert all(eps[l] > 1e-3 for l in range(1, 2 * m))


def test_sweep_delays_iss(iss_kepler, iss_period):
    res = sweep_delays(iss_kepler, range(1, 9), 10, iss_period)
    assert res.within_floor(5)
    assert res.rank[res.axis == 5][0] == 5
    assert res.eps[res.axis == 3][0] > 100 * np.nanmin(res.eps)


def test_sweep_window_kepler_saturates_early(iss_kepler, iss_period):
    w = np.round(np.arange(0.8, 4.01, 0.1), 2)
    res = sweep_window(iss_kepler, 5, w, iss_period)
    assert res.axis[res.floor_index()] <= 1.5
    assert np.all(np.diff(res.rank) >= 0)


def test_sweep_window_j2_rank_reaches_12(iss_j2, iss_period):
    w = np.round(np.arange(6.0, 12.01, 0.1), 2)
    res = sweep_window(iss_j2, 12, w, iss_period, TIGHT)
    first12 = res.axis[np.argmax(res.rank >= 12)]
    assert first12 == pytest.approx(8.9, abs=0.3)
    assert np.all(np.diff(res.rank) >= 0)


def test_sweep_window_single_sinusoid_flat():
    traj = signal_traj([0.4], 200, n=2, seed=1)
    period = 2 * np.pi / 0.4
    res = sweep_window(traj, 2, [1.0, 2.0, 3.0, 4.0, 5.0], period)
    assert np.all(res.eps < 1e-10)
    assert np.all(res.rank == 2)


def test_sweep_horizon_kepler_flat(iss_kepler, iss_period):
    res = sweep_horizon(iss_kepler, 5, 10, np.arange(1, 11), iss_period)
    assert np.all(res.eps <= 2 * res.eps_train)


def test_sweep_horizon_zero(iss_kepler, iss_period):
    res = sweep_horizon(iss_kepler, 5, 10, [0, 1], iss_period)
    assert np.isnan(res.eps[0]) and not np.isnan(res.eps[1])
    assert res.eps_train[0] == res.eps_train[1] > 0


def test_sweep_horizon_perturbed_grows(iss_j2, iss_drag, iss_period):
    for traj, l, p in ((iss_j2, 12, 8.9), (iss_drag, 7, 9.4)):
        res = sweep_horizon(traj, l, p, np.arange(1, 11), iss_period, TIGHT)
        assert non_decreasing(res.eps)
        assert res.eps[-1] > res.eps[0]


def test_sweep_sampling_sinusoid_and_aliasing():
    w = 0.2
    traj = signal_traj([w], 1400, n=2, seed=5)
    period = 2 * np.pi / w
    res = sweep_sampling(traj, 2, [1, 2, 4, 8, 12, 20], 40, period)
    ok = res.axis < np.pi / w
    assert np.all(res.eps[ok] < 1e-8)
    # above the Nyquist limit the coarse samples are still fitted but the
    # continuous-time model picks the alias
    aliased = res.eps[~ok]
    assert aliased.size and np.all(aliased > 10 * np.max(res.eps[ok]))
    assert np.all(res.eps_train < 1e-8)


def test_sweeps_are_deterministic(iss_kepler, iss_period):
    a = sweep_delays(iss_kepler, range(1, 8), 10, iss_period)
    b = sweep_delays(iss_kepler, range(1, 8), 10, iss_period, max_workers=4)
    assert a.eps.tobytes() == b.eps.tobytes()
    assert a.rank.tobytes() == b.rank.tobytes()
    c = sweep_delays(iss_kepler, range(1, 8), 10, iss_period)
    assert a.eps.tobytes() == c.eps.tobytes()


def test_sweep_rejects_unsorted_axis(iss_kepler, iss_period):
    with pytest.raises(DataError):
        sweep_delays(iss_kepler, [3, 2], 10, iss_period)


def test_sweep_records_point_failures():
    traj = signal_traj([0.3], 30)
    res = sweep_delays(traj, [2, 40], 25 / (2 * np.pi / 0.3), 2 * np.pi / 0.3)
    assert np.isnan(res.eps[1]) and 40 in res.errors
    assert res.best_value == 2
