"""Delay embedding and the minimal-delay rank procedure."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError, TrajectoryTooShortError
from .numerics import DEFAULT_RANK_TOL, numerical_rank, svd
from .trajectory import Trajectory


@dataclass(frozen=True, eq=False)
class HankelPair:
    """Delay-embedded snapshot matrices with ``h_k1[:, j] == h_k[:, j + 1]``.

    Row block ``i`` (rows ``i*n:(i+1)*n``) of ``h_k`` holds the trajectory
    shifted by ``i`` steps, so column ``j`` stacks ``x(j), ..., x(j+l-1)``.
    """

    h_k: np.ndarray
    h_k1: np.ndarray
    delays: int
    state_dim: int

    @property
    def columns(self) -> int:
        return self.h_k.shape[1]


def _states(traj):
    if isinstance(traj, Trajectory):
        return traj.states
    x = np.asarray(traj, dtype=float)
    return x[:, None] if x.ndim == 1 else x


def embed(states, delays: int) -> np.ndarray:
    """Full delay matrix with ``T - delays + 1`` columns."""
    x = _states(states)
    T, n = x.shape
    cols = T - delays + 1
    out = np.empty((n * delays, cols))
    for i in range(delays):
        out[i * n:(i + 1) * n] = x[i:i + cols].T
    return out


def build_hankel(traj, delays: int) -> HankelPair:
    """Build the shifted Hankel pair for ``delays`` time delays.

    Both matrices have ``n * delays`` rows and ``T - delays`` columns, so every
    sample is used and the pair stays aligned.
    """
    if delays < 1:
        raise DataError(f"delays must be >= 1, got {delays}")
    x = _states(traj)
    T, n = x.shape
    if T < delays + 2:
        raise TrajectoryTooShortError(delays + 2, T)
    full = embed(x, delays)
    return HankelPair(full[:, :-1], full[:, 1:], delays, n)


@dataclass(frozen=True, eq=False)
class DelayRankResult:
    l_star: int
    delays: np.ndarray
    ranks: np.ndarray


def hankel_rank(traj, delays: int, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    return numerical_rank(svd(build_hankel(traj, delays).h_k).singular_values, rel_tol)


def minimal_delays(traj, l_max: int, rel_tol: float = DEFAULT_RANK_TOL) -> DelayRankResult:
    """Find the minimal number of delays from the rank of ``H_k``.

    The rank of ``H_k`` is computed for ``l = 1, ..., l_max``. Once it stays
    unchanged for two consecutive values of ``l`` the matrix has become row
    rank deficient and the saturated rank is the minimal delay count. A
    constant offset in the data shows up as one extra real mode.
    """
    if l_max < 2:
        raise DataError(f"l_max must be >= 2, got {l_max}")
    x = _states(traj)
    T, n = x.shape
    if T - l_max <= n * l_max:
        raise TrajectoryTooShortError(n * l_max + l_max + 1, T)
    ls, ranks = [], []
    for l in range(1, l_max + 1):
        ls.append(l)
        ranks.append(hankel_rank(x, l, rel_tol))
        if len(ranks) >= 3 and ranks[-1] == ranks[-2] == ranks[-3]:
            return DelayRankResult(ranks[-1], np.array(ls), np.array(ranks))
    raise NumericalError(
        f"rank of H_k still growing at l_max = {l_max} (rank {ranks[-1]}); increase l_max")
