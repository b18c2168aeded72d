"""Training-data generators: nonlinear pendulum and perturbed two-body orbits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import ellipk

from .errors import DataError, PropagationError
from .trajectory import Trajectory

# WGS-84
MU_EARTH = 398600.4418  # km^3/s^2
J2_EARTH = 1.08262668e-3
R_EARTH = 6378.137  # km
OMEGA_EARTH = 7.292115e-5  # rad/s
TLE_EARTH_RADIUS = 6378.135  # km, unit of B*

ORBIT_LABELS = ("x", "y", "z", "vx", "vy", "vz")
ORBIT_GROUPS = ((0, 1, 2), (3, 4, 5))


@dataclass(frozen=True)
class GravityModel:
    mu: float = MU_EARTH
    j2: float = J2_EARTH
    radius: float = R_EARTH

    def __post_init__(self):
        if not (self.mu > 0 and self.radius > 0):
            raise DataError("gravity model needs mu > 0 and radius > 0")


EARTH = GravityModel()


@dataclass(frozen=True)
class OrbitalElements:
    """Osculating Keplerian elements; distances in km, angles in degrees."""

    a: float
    e: float
    i: float
    raan: float
    argp: float
    true_anomaly: float

    def __post_init__(self):
        if not self.a > 0:
            raise DataError(f"semi-major axis must be positive, got {self.a}")
        if not 0 <= self.e < 1:
            raise DataError(f"only elliptic orbits are supported (0 <= e < 1), got e = {self.e}")
        if not np.all(np.isfinite([self.i, self.raan, self.argp, self.true_anomaly])):
            raise DataError("orbital angles must be finite")

    def period(self, g: GravityModel = EARTH) -> float:
        return 2 * np.pi * np.sqrt(self.a ** 3 / g.mu)


# Initial element sets of the two case-study satellites.
ISS_ELEMENTS = OrbitalElements(6796.9, 0.0007, 51.639, 113.73, 51.197, 358.89)
MOLNIYA_ELEMENTS = OrbitalElements(26555.94, 0.7294, 63.324, 295.46, 282.69, 357.32)


@dataclass(frozen=True)
class DragConfig:
    """Exponential-atmosphere drag driven by the TLE ballistic coefficient.

    The acceleration is ``-(rho/rho0) * B* * |v_rel| * v_rel`` with ``B*`` in
    inverse earth radii and ``rho0`` the density the B* convention refers to.
    ``rho(h) = rho_ref * exp(-(h - ref_altitude) / scale_height)``.
    """

    bstar: float = 3.0e-4  # 1/ER
    rho0: float = 2.461e-8  # kg/m^3
    rho_ref: float = 3.725e-12  # kg/m^3 at ref_altitude
    ref_altitude: float = 400.0  # km
    scale_height: float = 58.0  # km
    atmosphere_rotates: bool = True

    def __post_init__(self):
        if not self.scale_height > 0:
            raise DataError("scale_height must be positive")
        if not (self.rho0 > 0 and self.rho_ref >= 0):
            raise DataError("densities must be positive")

    def density(self, altitude):
        return self.rho_ref * np.exp(-(altitude - self.ref_altitude) / self.scale_height)


def _rot3(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot1(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def elements_to_state(el: OrbitalElements, g: GravityModel = EARTH):
    """Inertial position (km) and velocity (km/s) for the given elements."""
    i, raan, argp, f = np.radians([el.i, el.raan, el.argp, el.true_anomaly])
    p = el.a * (1 - el.e ** 2)
    r_pf = p / (1 + el.e * np.cos(f)) * np.array([np.cos(f), np.sin(f), 0.0])
    v_pf = np.sqrt(g.mu / p) * np.array([-np.sin(f), el.e + np.cos(f), 0.0])
    rot = _rot3(raan) @ _rot1(i) @ _rot3(argp)
    return rot @ r_pf, rot @ v_pf


def state_to_elements(r, v, g: GravityModel = EARTH) -> OrbitalElements:
    """Inverse of :func:`elements_to_state` (elliptic orbits only).

    Undefined angles of circular or equatorial orbits are set to zero and
    absorbed into the next angle, so the state round-trips.
    """
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    rn, vn = np.linalg.norm(r), np.linalg.norm(v)
    h = np.cross(r, v)
    hn = np.linalg.norm(h)
    energy = vn ** 2 / 2 - g.mu / rn
    if energy >= 0:
        raise DataError("state is not on an elliptic orbit")
    a = -g.mu / (2 * energy)
    e_vec = np.cross(v, h) / g.mu - r / rn
    e = np.linalg.norm(e_vec)
    i = np.arccos(np.clip(h[2] / hn, -1, 1))
    node = np.cross([0.0, 0.0, 1.0], h)
    nn = np.linalg.norm(node)
    tol = 1e-11
    if nn > tol * hn:
        raan = np.arctan2(node[1], node[0])
        n_hat = node / nn
    else:
        raan = 0.0
        n_hat = np.array([1.0, 0.0, 0.0])
    m_hat = np.cross(h / hn, n_hat)
    if e > tol:
        argp = np.arctan2(e_vec @ m_hat, e_vec @ n_hat)
        p_hat = e_vec / e
        q_hat = np.cross(h / hn, p_hat)
        f = np.arctan2(r @ q_hat, r @ p_hat)
    else:
        e = 0.0
        argp = 0.0
        f = np.arctan2(r @ m_hat, r @ n_hat)
    deg = np.degrees([i, raan, argp, f]) % 360.0
    deg[0] = np.degrees(i)
    return OrbitalElements(a, e, *deg)


def orbital_energy(r, v, mu: float = MU_EARTH):
    r = np.atleast_2d(r)
    v = np.atleast_2d(v)
    return 0.5 * np.sum(v ** 2, axis=1) - mu / np.linalg.norm(r, axis=1)


def pendulum_rhs(theta, theta_dot, omega0_sq=(2 * np.pi) ** 2):
    """``(theta_dot, -omega0_sq * sin(theta))``."""
    return theta_dot, -omega0_sq * np.sin(theta)


def pendulum_energy(theta, theta_dot, omega0_sq=(2 * np.pi) ** 2):
    return 0.5 * np.asarray(theta_dot) ** 2 - omega0_sq * np.cos(theta)


def pendulum_period(amplitude, omega0_sq=(2 * np.pi) ** 2):
    """Exact period ``4 K(sin(amplitude/2)) / omega0`` of a pendulum released from rest."""
    return 4.0 * ellipk(np.sin(amplitude / 2.0) ** 2) / np.sqrt(omega0_sq)


def j2_acceleration(r, g: GravityModel = EARTH):
    x, y, z = r
    rn = np.sqrt(x * x + y * y + z * z)
    k = 1.5 * g.j2 * g.mu * g.radius ** 2 / rn ** 4
    zr2 = 5.0 * z * z / (rn * rn)
    return k * np.array([x / rn * (zr2 - 1.0), y / rn * (zr2 - 1.0), z / rn * (zr2 - 3.0)])


def drag_acceleration(r, v, drag: DragConfig, g: GravityModel = EARTH):
    rn = np.linalg.norm(r)
    if drag.atmosphere_rotates:
        v_rel = v - np.cross([0.0, 0.0, OMEGA_EARTH], r)
    else:
        v_rel = np.asarray(v)
    rho = drag.density(rn - g.radius)
    bstar_km = drag.bstar / TLE_EARTH_RADIUS
    return -(rho / drag.rho0) * bstar_km * np.linalg.norm(v_rel) * v_rel


def _perturbations(perturbation):
    if perturbation is None:
        return ()
    if isinstance(perturbation, (str, DragConfig)):
        return (perturbation,)
    return tuple(perturbation)


def twobody_rhs(r, v, g: GravityModel = EARTH, perturbation=None):
    """``(r_dot, v_dot)`` for point-mass gravity plus optional perturbations.

    ``perturbation`` is ``None``, ``"j2"``, a :class:`DragConfig`, or a
    sequence combining them.
    """
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    rn = np.linalg.norm(r)
    if rn <= g.radius:
        raise PropagationError(f"position radius {rn:.3f} km is below the surface ({g.radius} km)")
    acc = -g.mu * r / rn ** 3
    for p in _perturbations(perturbation):
        if isinstance(p, DragConfig):
            acc = acc + drag_acceleration(r, v, p, g)
        elif p == "j2":
            acc = acc + j2_acceleration(r, g)
        else:
            raise DataError(f"unknown perturbation {p!r}")
    return v, acc


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "DOP853"
    rtol: float = 1e-10
    atol: float = 1e-12


def sample_count(duration: float, dt_sample: float) -> int:
    return int(np.floor(duration / dt_sample + 1e-9)) + 1


def propagate(rhs, y0, dt_sample: float, duration: float, config: IntegratorConfig | None = None,
              t0: float = 0.0, labels=(), groups=()) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` and sample at ``t0 + k * dt_sample``.

    Uses an adaptive embedded Runge-Kutta scheme; intermediate samples come
    from its dense output.
    """
    if not dt_sample > 0:
        raise DataError(f"dt_sample must be positive, got {dt_sample}")
    if duration < 0:
        raise DataError(f"duration must be non-negative, got {duration}")
    config = config or IntegratorConfig()
    y0 = np.asarray(y0, dtype=float)
    count = sample_count(duration, dt_sample)
    t_eval = t0 + dt_sample * np.arange(count)
    if count == 1:
        return Trajectory(dt_sample, y0[None, :], t0, labels, groups)
    sol = solve_ivp(rhs, (t0, t_eval[-1]), y0, method=config.method, t_eval=t_eval,
                    rtol=config.rtol, atol=config.atol)
    if sol.status != 0:
        raise PropagationError(f"integration failed: {sol.message}", sol.t[-1] if sol.t.size else t0)
    return Trajectory(dt_sample, sol.y.T, t0, labels, groups)


def pendulum_trajectory(amplitude=np.pi / 2, dt_sample=0.01, duration=None, periods=None,
                        omega0_sq=(2 * np.pi) ** 2, theta_dot0=0.0,
                        config: IntegratorConfig | None = None) -> Trajectory:
    """Pendulum released at ``amplitude`` (rad) with angular rate ``theta_dot0``."""
    if duration is None:
        duration = (periods or 10) * pendulum_period(amplitude, omega0_sq)

    def rhs(t, y):
        return pendulum_rhs(y[0], y[1], omega0_sq)

    return propagate(rhs, [amplitude, theta_dot0], dt_sample, duration, config,
                     labels=("theta", "theta_dot"), groups=((0,), (1,)))


def orbit_trajectory(elements: OrbitalElements = ISS_ELEMENTS, perturbation=None, dt_sample=60.0,
                     duration=None, periods=None, g: GravityModel = EARTH,
                     config: IntegratorConfig | None = None) -> Trajectory:
    """ECI position/velocity history from the given initial elements."""
    if duration is None:
        duration = (periods or 10) * elements.period(g)
    r0, v0 = elements_to_state(elements, g)

    def rhs(t, y):
        rd, vd = twobody_rhs(y[:3], y[3:], g, perturbation)
        return np.concatenate([rd, vd])

    return propagate(rhs, np.concatenate([r0, v0]), dt_sample, duration, config,
                     labels=ORBIT_LABELS, groups=ORBIT_GROUPS)


def resample(traj: Trajectory, new_dt: float) -> Trajectory:
    """Decimate by an integer stride; ``new_dt`` must be a multiple of ``traj.dt``."""
    stride = int(round(new_dt / traj.dt))
    if stride < 1 or abs(stride * traj.dt - new_dt) > 1e-9 * max(new_dt, traj.dt):
        raise DataError(f"new_dt = {new_dt} is not an integer multiple of dt = {traj.dt}")
    return Trajectory(stride * traj.dt, traj.states[::stride], traj.t0, traj.labels, traj.groups)


def secular_raan_rate(el: OrbitalElements, g: GravityModel = EARTH) -> float:
    """First-order J2 secular nodal rate in rad/s."""
    n = np.sqrt(g.mu / el.a ** 3)
    p = el.a * (1 - el.e ** 2)
    return -1.5 * g.j2 * (g.radius / p) ** 2 * n * np.cos(np.radians(el.i))
