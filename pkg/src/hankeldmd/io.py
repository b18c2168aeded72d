"""Delimited-text file formats for trajectories, sweeps and spectra.

Trajectory files look like::

    # dt=60 groups=0,1,2|3,4,5
    t,x,y,z,vx,vy,vz
    0,-4183.6,...

Times are in seconds. Values are written with 17 significant digits, so a
write/read round trip reproduces every finite double exactly.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import DataError
from .experiments import SweepResult
from .spectral import Spectrum
from .trajectory import Trajectory


def _fmt(x) -> str:
    return "%.17g" % x


def _format_groups(groups) -> str:
    return "|".join(",".join(str(i) for i in g) for g in groups)


def _parse_groups(text: str):
    if not text:
        return ()
    return tuple(tuple(int(i) for i in part.split(",") if i) for part in text.split("|"))


def write_trajectory(traj: Trajectory, path, extra_columns=None) -> None:
    lines = [f"# dt={_fmt(traj.dt)} groups={_format_groups(traj.groups)}",
             ",".join(("t",) + traj.labels)]
    for t, row in zip(traj.times, traj.states):
        lines.append(",".join([_fmt(t)] + [_fmt(v) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory(path) -> Trajectory:
    """Parse a trajectory file; ``dt`` falls back to the spacing of the time column."""
    meta = {}
    header = None
    times, rows = [], []
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                key, _, value = token.partition("=")
                meta[key] = value
            continue
        fields = [f.strip() for f in line.split(",")]
        if header is None:
            header = fields
            if len(header) < 2 or header[0] != "t":
                raise DataError(f"{path}:{lineno}: header must start with 't' and name at least one component")
            continue
        if len(fields) != len(header):
            raise DataError(f"{path}:{lineno}: expected {len(header)} fields, found {len(fields)}")
        try:
            values = [float(f) for f in fields]
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
        times.append(values[0])
        rows.append(values[1:])
    if header is None or not rows:
        raise DataError(f"{path}: no data rows")
    times = np.array(times)
    try:
        dt = float(meta["dt"]) if "dt" in meta else float(np.mean(np.diff(times)))
        groups = _parse_groups(meta.get("groups", ""))
    except ValueError as exc:
        raise DataError(f"{path}: bad metadata: {exc}") from None
    # allow for rounding of t0 + k*dt at large absolute times
    tol = 1e-6 * dt + 8 * np.finfo(float).eps * np.max(np.abs(times))
    if times.size > 1 and np.max(np.abs(np.diff(times) - dt)) > tol:
        raise DataError(f"{path}: samples are not uniformly spaced at dt = {dt}")
    return Trajectory(dt, np.array(rows), float(times[0]), tuple(header[1:]), groups)


def write_prediction(traj: Trajectory, predicted, path, steps=None) -> None:
    """Input rows tagged ``data`` followed by predicted rows tagged ``dmd``."""
    predicted = np.atleast_2d(predicted)
    steps = np.arange(predicted.shape[0]) if steps is None else np.asarray(steps)
    lines = [f"# dt={_fmt(traj.dt)} groups={_format_groups(traj.groups)}",
             ",".join(("t",) + traj.labels + ("source",))]
    for t, row in zip(traj.times, traj.states):
        lines.append(",".join([_fmt(t)] + [_fmt(v) for v in row] + ["data"]))
    for k, row in zip(steps, predicted):
        lines.append(",".join([_fmt(traj.t0 + k * traj.dt)] + [_fmt(v) for v in row] + ["dmd"]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_sweep(result: SweepResult, path) -> None:
    fixed = " ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}" for k, v in result.fixed_params.items())
    lines = [f"# sweep={result.axis_name} {fixed}".rstrip(),
             f"{result.axis_name},eps,eps_train,rank,error"]
    for i, a in enumerate(result.axis):
        err = result.errors.get(a.item(), "")
        lines.append(",".join([_fmt(a), _fmt(result.eps[i]), _fmt(result.eps_train[i]),
                               str(int(result.rank[i])), err.replace(",", ";")]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_spectrum(spec: Spectrum, path) -> None:
    lines = [f"# pad_factor={spec.pad_factor} window={spec.window or 'none'} n_fft={spec.n_fft}",
             "freq_mhz,magnitude"]
    for f, m in zip(spec.freqs, spec.aggregate):
        lines.append(f"{_fmt(f * 1000.0)},{_fmt(m)}")
    Path(path).write_text("\n".join(lines) + "\n")
