"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import dynamics as dyn
from .dmd import TruncationPolicy, fit, load_model, predict, save_model, DEFAULT_ENERGY
from .errors import DataError, NumericalError
from .experiments import samples_for, sweep_delays, sweep_horizon, sweep_sampling, sweep_window
from .hankel import build_hankel, minimal_delays
from .io import read_trajectory, write_prediction, write_spectrum, write_sweep, write_trajectory
from .numerics import DEFAULT_RANK_TOL
from .spectral import dominant_peaks, dominant_period, fft_spectrum
from .tle import read_tle_file, tle_to_elements

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4
DEFAULT_DRAG_BSTAR = 3e-3


class UsageError(Exception):
    pass


def parse_range(text: str, cast=float):
    """``"1:20"`` (inclusive, step 1), ``"0.5:10:0.5"`` or ``"1,3,5"``."""
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1.0
            if step <= 0:
                raise ValueError("step must be positive")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            values = [start + i * step for i in range(count)]
        else:
            values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}: {exc}") from None
    if not values:
        raise UsageError(f"empty range {text!r}")
    return [cast(round(v, 12)) for v in values]


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(args.energy, args.max_rank,
                            modes="projected" if getattr(args, "projected", False) else "exact",
                            amplitudes=getattr(args, "amplitudes", "first"))


def _period(args, traj) -> float:
    return args.period if args.period else dominant_period(traj)


def _n_train(args, traj) -> int:
    if getattr(args, "train_samples", None):
        return args.train_samples
    if getattr(args, "train_periods", None):
        return samples_for(args.train_periods, _period(args, traj), traj.dt)
    return len(traj)


def _elements(args):
    if args.elements:
        return dyn.OrbitalElements(*args.elements), None
    if args.tle:
        rec = read_tle_file(args.tle)[0]
        return tle_to_elements(rec), rec.bstar
    return {"iss": dyn.ISS_ELEMENTS, "molniya": dyn.MOLNIYA_ELEMENTS}[args.preset], None


def cmd_generate(args) -> int:
    config = dyn.IntegratorConfig(rtol=args.rtol, atol=args.atol)
    if args.dynamics == "pendulum":
        dt = args.dt or 0.01
        period = dyn.pendulum_period(args.amplitude, args.omega0_sq)
        duration = args.duration if args.duration is not None else args.periods * period
        traj = dyn.pendulum_trajectory(args.amplitude, dt, duration, omega0_sq=args.omega0_sq, config=config)
    else:
        el, tle_bstar = _elements(args)
        dt = args.dt or 60.0
        duration = args.duration if args.duration is not None else args.periods * el.period()
        perturbation = {"kepler": None, "j2": "j2"}.get(args.dynamics)
        if args.dynamics == "drag":
            bstar = args.bstar if args.bstar is not None else (tle_bstar or DEFAULT_DRAG_BSTAR)
            perturbation = dyn.DragConfig(bstar=bstar)
        traj = dyn.orbit_trajectory(el, perturbation, dt, duration, config=config)
    write_trajectory(traj, args.output)
    print(f"wrote {len(traj)} samples to {args.output}")
    return 0


def cmd_fit(args) -> int:
    traj = read_trajectory(args.input)
    n_train = _n_train(args, traj)
    window = traj.window(0, n_train)
    model = fit(build_hankel(window, args.delays), _policy(args), traj.dt, traj.t0)
    save_model(model, args.output)
    print(f"rank {model.rank} model written to {args.output}")
    return 0


def cmd_predict(args) -> int:
    traj = read_trajectory(args.input)
    model = load_model(args.model)
    if model.state_dim != traj.n:
        raise DataError(f"model has state dimension {model.state_dim}, trajectory has {traj.n}")
    steps = np.arange(args.steps if args.steps is not None else len(traj))
    write_prediction(traj, predict(model, steps), args.output, steps)
    print(f"wrote {steps.size} predicted rows to {args.output}")
    return 0


def cmd_rank(args) -> int:
    traj = read_trajectory(args.input)
    window = traj.window(0, _n_train(args, traj))
    # largest delay count the window supports with a wide H_k
    l_max = args.l_max or max(2, (len(window) - 1) // (window.n + 1))
    res = minimal_delays(window, l_max, args.rel_tol)
    print("delays,rank")
    for l, r in zip(res.delays, res.ranks):
        print(f"{l},{r}")
    print(f"l* = {res.l_star}")
    return 0


def cmd_sweep(args) -> int:
    traj = read_trajectory(args.input)
    period = _period(args, traj)
    policy = _policy(args)
    if args.kind == "delays":
        result = sweep_delays(traj, parse_range(args.delays, int), args.train_periods, period, policy)
    elif args.kind == "window":
        result = sweep_window(traj, int(args.delays), parse_range(args.windows), period, policy)
    elif args.kind == "horizon":
        result = sweep_horizon(traj, int(args.delays), args.train_periods, parse_range(args.horizons),
                               period, policy)
    else:
        result = sweep_sampling(traj, int(args.delays), parse_range(args.multiples, int), args.train_periods,
                                period, policy)
    write_sweep(result, args.output)
    print(f"best {result.axis_name} = {result.best_value:g} (eps = {result.eps[result.best]:.3e})")
    return 0


def cmd_spectrum(args) -> int:
    traj = read_trajectory(args.input)
    spec = fft_spectrum(traj, args.pad_factor, args.window)
    write_spectrum(spec, args.output)
    for f, m in dominant_peaks(spec, args.peaks):
        print(f"{f:.6f} mHz  {m:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hankeldmd", description="Hankel-DMD surrogate models of periodic trajectories")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="integrate a pendulum or orbit and write a trajectory file")
    g.add_argument("--dynamics", choices=("pendulum", "kepler", "j2", "drag"), required=True)
    g.add_argument("--output", "-o", required=True)
    g.add_argument("--dt", type=float, help="sample interval in s (default 0.01 pendulum, 60 orbit)")
    span = g.add_mutually_exclusive_group()
    span.add_argument("--duration", type=float, help="seconds")
    span.add_argument("--periods", type=float, default=10.0)
    src = g.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=("iss", "molniya"), default="iss")
    src.add_argument("--tle", help="TLE file; the first element set is used")
    src.add_argument("--elements", type=float, nargs=6, metavar=("A", "E", "I", "RAAN", "ARGP", "F"))
    g.add_argument("--bstar", type=float, help="B* in 1/earth radii for drag")
    g.add_argument("--amplitude", type=float, default=np.pi / 2)
    g.add_argument("--omega0-sq", type=float, default=(2 * np.pi) ** 2)
    g.add_argument("--rtol", type=float, default=1e-10)
    g.add_argument("--atol", type=float, default=1e-12)
    g.set_defaults(func=cmd_generate)

    def model_opts(sp):
        sp.add_argument("--energy", type=float, default=DEFAULT_ENERGY, help="SVD energy fraction kept")
        sp.add_argument("--max-rank", type=int)

    def window_opts(sp):
        w = sp.add_mutually_exclusive_group()
        w.add_argument("--train-samples", type=int)
        w.add_argument("--train-periods", type=float)
        sp.add_argument("--period", type=float, help="period in s (default: dominant FFT peak)")

    f = sub.add_parser("fit", help="fit a Hankel-DMD model and write it as JSON")
    f.add_argument("--input", "-i", required=True)
    f.add_argument("--output", "-o", required=True)
    f.add_argument("--delays", "-l", type=int, required=True)
    f.add_argument("--projected", action="store_true", help="projected instead of exact modes")
    f.add_argument("--amplitudes", choices=("first", "lstsq"), default="first")
    model_opts(f)
    window_opts(f)
    f.set_defaults(func=cmd_fit)

    pr = sub.add_parser("predict", help="evaluate a fitted model and append its rows to the data")
    pr.add_argument("--model", "-m", required=True)
    pr.add_argument("--input", "-i", required=True)
    pr.add_argument("--output", "-o", required=True)
    pr.add_argument("--steps", type=int, help="number of steps from the training start")
    pr.set_defaults(func=cmd_predict)

    r = sub.add_parser("rank", help="print the rank of H_k versus delays")
    r.add_argument("--input", "-i", required=True)
    r.add_argument("--l-max", type=int, help="default: the most the window supports")
    r.add_argument("--rel-tol", type=float, default=DEFAULT_RANK_TOL)
    window_opts(r)
    r.set_defaults(func=cmd_rank)

    s = sub.add_parser("sweep", help="parameter sweeps")
    s.add_argument("kind", choices=("delays", "window", "horizon", "sampling"))
    s.add_argument("--input", "-i", required=True)
    s.add_argument("--output", "-o", required=True)
    s.add_argument("--delays", "-l", required=True, help="range for 'delays', a single count otherwise")
    s.add_argument("--train-periods", type=float, default=10.0)
    s.add_argument("--windows", default="0.5:10:0.5", help="training windows in periods")
    s.add_argument("--horizons", default="0:10:1", help="prediction horizons in periods")
    s.add_argument("--multiples", default="1:15", help="sampling-interval multiples of the input dt")
    s.add_argument("--period", type=float, help="period in s (default: dominant FFT peak)")
    model_opts(s)
    s.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("spectrum", help="zero-padded FFT spectrum")
    sp.add_argument("--input", "-i", required=True)
    sp.add_argument("--output", "-o", required=True)
    sp.add_argument("--pad-factor", type=int, default=8)
    sp.add_argument("--window", choices=("none", "hamming"), default="none")
    sp.add_argument("--peaks", type=int, default=3)
    sp.set_defaults(func=cmd_spectrum)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
