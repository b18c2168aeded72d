"""Uniformly sampled multivariate time series."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States ``x(k)`` sampled at ``t0 + k * dt``.

    ``states`` has shape ``(T, n)``. ``groups`` optionally partitions the
    component indices into position-like and velocity-like sets; the error
    metric normalizes each group separately.
    """

    dt: float
    states: np.ndarray
    t0: float = 0.0
    labels: tuple = ()
    groups: tuple = ()

    def __post_init__(self):
        states = np.array(self.states, dtype=float)
        if states.ndim == 1:
            states = states[:, None]
        if states.ndim != 2 or states.shape[0] < 1:
            raise DataError(f"states must have shape (T, n) with T >= 1, got {states.shape}")
        if not np.all(np.isfinite(states)):
            raise DataError("trajectory contains non-finite states")
        if not (self.dt > 0 and np.isfinite(self.dt)):
            raise DataError(f"dt must be positive, got {self.dt}")
        states.setflags(write=False)
        object.__setattr__(self, "states", states)
        n = states.shape[1]
        labels = tuple(self.labels) or tuple(f"x{i}" for i in range(n))
        if len(labels) != n:
            raise DataError(f"{len(labels)} labels for {n} components")
        object.__setattr__(self, "labels", labels)
        groups = tuple(tuple(int(i) for i in g) for g in self.groups if len(g))
        seen = [i for g in groups for i in g]
        if len(seen) != len(set(seen)):
            raise DataError("trajectory groups overlap")
        if any(i < 0 or i >= n for i in seen):
            raise DataError("group index out of range")
        object.__setattr__(self, "groups", groups)

    def __len__(self):
        return self.states.shape[0]

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def window(self, start: int = 0, stop: int | None = None) -> "Trajectory":
        """Sub-trajectory of samples ``start:stop`` with shifted ``t0``."""
        stop = len(self) if stop is None else stop
        if not 0 <= start < stop <= len(self):
            raise DataError(f"window [{start}, {stop}) outside trajectory of length {len(self)}")
        return Trajectory(self.dt, self.states[start:stop], self.t0 + start * self.dt,
                          self.labels, self.groups)

    def with_states(self, states) -> "Trajectory":
        return Trajectory(self.dt, states, self.t0, self.labels, self.groups)
