import numpy as np
import pytest

from hankeldmd import Trajectory
from hankeldmd import dynamics as dyn


def sinusoids(omegas, T, n=1, bias=0.0, seed=0):
    """Sum of cosines at the given rad/step frequencies with random amplitudes and phases per component."""
    rng = np.random.default_rng(seed)
    k = np.arange(T)[:, None]
    x = np.full((T, n), float(bias))
    for w in omegas:
        amp = rng.uniform(0.5, 1.5, n)
        phase = rng.uniform(0, 2 * np.pi, n)
        x += amp * np.cos(w * k + phase)
    return x


def signal_traj(omegas, T, n=1, bias=0.0, seed=0, dt=1.0):
    return Trajectory(dt, sinusoids(omegas, T, n, bias, seed))


ISS_DT = 660.0  # 11 min


@pytest.fixture(scope="session")
def iss_period():
    return dyn.ISS_ELEMENTS.period()


@pytest.fixture(scope="session")
def iss_kepler():
    """ISS two-body orbit at 11 min sampling, 21 periods (10 train + up to 10 predict)."""
    return dyn.orbit_trajectory(dyn.ISS_ELEMENTS, None, ISS_DT, periods=21)


@pytest.fixture(scope="session")
def iss_j2():
    return dyn.orbit_trajectory(dyn.ISS_ELEMENTS, "j2", 420.0, periods=20)


@pytest.fixture(scope="session")
def iss_drag():
    return dyn.orbit_trajectory(dyn.ISS_ELEMENTS, dyn.DragConfig(bstar=3e-3), 1080.0, periods=20)


@pytest.fixture(scope="session")
def pendulum():
    return dyn.pendulum_trajectory(np.pi / 2, 0.1, periods=10)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in test_acceptance.summary_lines():
        terminalreporter.write_line(line)
