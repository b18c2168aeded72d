import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hankeldmd import Trajectory
from hankeldmd import dynamics as d
from hankeldmd.cli import main, parse_range, UsageError
from hankeldmd.errors import DataError
from hankeldmd.io import read_trajectory, write_trajectory
from hankeldmd.tle import format_tle, parse_tle, record_from_elements, tle_to_elements
from conftest import sinusoids

doubles = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 6), st.integers(1, 4)), elements=doubles),
       st.floats(1e-6, 1e6), st.floats(-1e6, 1e6))
def test_trajectory_file_round_trip_is_exact(tmp_path_factory, states, dt, t0):
    path = tmp_path_factory.mktemp("rt") / "x.csv"
    traj = Trajectory(dt, states, t0)
    write_trajectory(traj, path)
    back = read_trajectory(path)
    assert np.array_equal(back.states, traj.states)
    assert back.dt == traj.dt
    assert back.t0 == traj.t0
    assert back.labels == traj.labels


def test_orbit_groups_survive_round_trip(tmp_path):
    traj = d.orbit_trajectory(d.ISS_ELEMENTS, None, 60.0, duration=600.0)
    write_trajectory(traj, tmp_path / "o.csv")
    back = read_trajectory(tmp_path / "o.csv")
    assert back.groups == d.ORBIT_GROUPS
    assert back.labels == d.ORBIT_LABELS


def test_ingest_external_file_without_metadata(tmp_path):
    path = tmp_path / "ext.csv"
    path.write_text("t,x,y\n0,1,2\n30,1.5,2.5\n60,2,3\n")
    traj = read_trajectory(path)
    assert traj.dt == 30.0 and traj.n == 2 and len(traj) == 3


@pytest.mark.parametrize("text,where", [
    ("t,x\n0,1\n1,abc\n", ":3:"),
    ("t,x\n0,1\n1,2,3\n", ":3:"),
    ("x,y\n0,1\n", ":1:"),
])
def test_parse_errors_name_path_and_line(tmp_path, text, where):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(DataError) as info:
        read_trajectory(path)
    assert str(path) in str(info.value) and where in str(info.value)


def test_non_uniform_sampling_rejected(tmp_path):
    path = tmp_path / "nu.csv"
    path.write_text("t,x\n0,1\n1,2\n3,3\n")
    with pytest.raises(DataError, match="uniformly"):
        read_trajectory(path)


def test_parse_range():
    assert parse_range("1:5", int) == [1, 2, 3, 4, 5]
    assert parse_range("0.5:2:0.5") == [0.5, 1.0, 1.5, 2.0]
    assert parse_range("3,1.5") == [3.0, 1.5]
    with pytest.raises(UsageError):
        parse_range("a:b")


def run(*args):
    return main([str(a) for a in args])


def test_generate_pendulum_row_count(tmp_path):
    out = tmp_path / "p.csv"
    assert run("generate", "--dynamics", "pendulum", "--dt", 0.01, "--periods", 20, "-o", out) == 0
    traj = read_trajectory(out)
    assert len(traj) == int(20 * d.pendulum_period(np.pi / 2) / 0.01) + 1 == 2361
    assert traj.states[0] == pytest.approx([np.pi / 2, 0.0])


def test_generate_kepler_from_tle(tmp_path):
    rec = record_from_elements(d.ISS_ELEMENTS, norad_id=25544, epoch_year=2023, epoch_day=100.5)
    tle = tmp_path / "iss.tle"
    tle.write_text("ISS\n" + "\n".join(format_tle(rec)) + "\n")
    out = tmp_path / "k.csv"
    assert run("generate", "--dynamics", "kepler", "--tle", tle, "--duration", 0, "-o", out) == 0
    row = read_trajectory(out).states[0]
    r, v = d.elements_to_state(tle_to_elements(parse_tle(*format_tle(rec))))
    assert np.array_equal(row, np.concatenate([r, v]))
    # and to the printed precision of the element table
    r0, v0 = d.elements_to_state(d.ISS_ELEMENTS)
    assert np.linalg.norm(row[:3] - r0) < 0.05
    assert np.linalg.norm(row[3:] - v0) < 1e-4


def test_generate_zero_duration(tmp_path):
    out = tmp_path / "z.csv"
    assert run("generate", "--dynamics", "j2", "--duration", 0, "-o", out) == 0
    assert len(read_trajectory(out)) == 1


def write_signal(path, omegas=(0.3, 0.9), T=80, n=2):
    write_trajectory(Trajectory(1.0, sinusoids(omegas, T, n, seed=3)), path)


def test_fit_then_predict_origin(tmp_path):
    data = tmp_path / "s.csv"
    write_signal(data)
    assert run("fit", "-i", data, "-l", 4, "-o", tmp_path / "m.json") == 0
    assert run("predict", "-m", tmp_path / "m.json", "-i", data, "-o", tmp_path / "p.csv", "--steps", 5) == 0
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert lines[1].endswith(",source")
    dmd = [ln.split(",") for ln in lines if ln.endswith(",dmd")]
    assert len(dmd) == 5
    first = np.array(dmd[0][1:-1], dtype=float)
    assert np.allclose(first, read_trajectory(data).states[0], atol=1e-6)


def test_fit_then_predict_origin_iss(tmp_path):
    data = tmp_path / "iss.csv"
    assert run("generate", "--dynamics", "kepler", "--dt", 660, "--periods", 10, "-o", data) == 0
    assert run("fit", "-i", data, "-l", 5, "--train-periods", 10, "-o", tmp_path / "m.json") == 0
    assert run("predict", "-m", tmp_path / "m.json", "-i", data, "-o", tmp_path / "p.csv", "--steps", 1) == 0
    row = [ln for ln in (tmp_path / "p.csv").read_text().splitlines() if ln.endswith(",dmd")][0]
    x0 = read_trajectory(data).states[0]
    pred = np.array(row.split(",")[1:-1], dtype=float)
    assert np.linalg.norm(pred[:3] - x0[:3]) / np.linalg.norm(x0[:3]) < 1e-6
    assert np.linalg.norm(pred[3:] - x0[3:]) / np.linalg.norm(x0[3:]) < 1e-6


def test_rank_on_iss_prints_five(tmp_path, capsys):
    data = tmp_path / "iss.csv"
    assert run("generate", "--dynamics", "kepler", "--dt", 660, "--periods", 10, "-o", data) == 0
    capsys.readouterr()
    assert run("rank", "-i", data, "--rel-tol", 1e-6, "--train-periods", 10) == 0
    out = capsys.readouterr().out
    assert out.strip().splitlines()[-1] == "l* = 5"
    assert out.splitlines()[0] == "delays,rank"


def test_sweep_delays_two_frequencies_best_at_four(tmp_path, capsys):
    data = tmp_path / "s.csv"
    write_signal(data, T=120, n=1)
    period = 2 * np.pi / 0.3
    assert run("sweep", "delays", "-i", data, "-l", "1:8", "--train-periods", 100 / period,
               "--period", period, "-o", tmp_path / "sw.csv") == 0
    assert "best delays = 4 " in capsys.readouterr().out
    rows = (tmp_path / "sw.csv").read_text().splitlines()
    assert rows[0].startswith("# sweep=delays")
    assert rows[1] == "delays,eps,eps_train,rank,error"
    assert len(rows) == 10


@pytest.mark.parametrize("kind,extra", [
    ("window", ["--windows", "2:4"]),
    ("horizon", ["--horizons", "0:2", "--train-periods", 3]),
    ("sampling", ["--multiples", "1:3", "--train-periods", 3]),
])
def test_other_sweeps_write_files(tmp_path, kind, extra):
    data = tmp_path / "s.csv"
    write_signal(data, omegas=(0.3,), T=200)
    out = tmp_path / f"{kind}.csv"
    assert run("sweep", kind, "-i", data, "-l", 2, "-o", out, *extra) == 0
    assert out.read_text().splitlines()[1].endswith(",eps,eps_train,rank,error")


def test_spectrum_command(tmp_path, capsys):
    data = tmp_path / "s.csv"
    write_signal(data, omegas=(2 * np.pi / 16,), T=128)
    assert run("spectrum", "-i", data, "-o", tmp_path / "f.csv", "--peaks", 1) == 0
    line = capsys.readouterr().out.strip()
    assert float(line.split()[0]) == pytest.approx(1000 / 16, rel=1e-3)
    assert (tmp_path / "f.csv").read_text().splitlines()[1] == "freq_mhz,magnitude"


def test_commands_are_byte_reproducible(tmp_path):
    outputs = []
    for tag in ("a", "b"):
        base = tmp_path / tag
        base.mkdir()
        run("generate", "--dynamics", "drag", "--dt", 1080, "--periods", 4, "-o", base / "g.csv")
        run("fit", "-i", base / "g.csv", "-l", 7, "-o", base / "m.json")
        run("predict", "-m", base / "m.json", "-i", base / "g.csv", "-o", base / "p.csv")
        run("sweep", "delays", "-i", base / "g.csv", "-l", "2:5", "--train-periods", 3, "-o", base / "s.csv")
        run("spectrum", "-i", base / "g.csv", "-o", base / "f.csv", "--window", "hamming")
        outputs.append([(base / f).read_bytes() for f in ("g.csv", "m.json", "p.csv", "s.csv", "f.csv")])
    assert outputs[0] == outputs[1]


def test_exit_codes(tmp_path, capsys):
    assert run("fit", "-i", tmp_path / "missing.csv", "-l", 3, "-o", tmp_path / "m.json") == 3
    data = tmp_path / "s.csv"
    write_signal(data, omegas=(0.3, 0.9, 1.4, 2.0), T=100)
    assert run("rank", "-i", data, "--l-max", 4) == 4
    assert run("sweep", "delays", "-i", data, "-l", "x:y", "--period", 20, "-o", tmp_path / "o.csv") == 2
    with pytest.raises(SystemExit) as info:
        run("fit")
    assert info.value.code == 2
    err = capsys.readouterr().err
    assert "missing.csv" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hankeldmd", "generate", "--dynamics", "pendulum",
                           "--duration", "0", "-o", str(tmp_path / "x.csv")], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_ingested_eccentric_orbit_keeps_gaining_rank(tmp_path, capsys):
    # stand-in for an externally propagated long-horizon file: no metadata line
    traj = d.orbit_trajectory(d.MOLNIYA_ELEMENTS, "j2", 420.0, periods=10)
    path = tmp_path / "molniya.csv"
    rows = ["t,x,y,z,vx,vy,vz"] + [",".join(repr(float(v)) for v in (t, *s)) for t, s in zip(traj.times, traj.states)]
    path.write_text("\n".join(rows) + "\n")
    back = read_trajectory(path)
    assert back.dt == 420.0 and back.groups == ()
    from hankeldmd.hankel import hankel_rank
    ranks = [hankel_rank(back, l, 1e-6) for l in (10, 20, 40)]
    assert ranks[0] < ranks[1] < ranks[2]
    assert run("rank", "-i", path, "--l-max", 30, "--rel-tol", 1e-6) == 4
    assert "increase" in capsys.readouterr().err
