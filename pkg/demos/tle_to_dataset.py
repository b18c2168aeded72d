"""From a two-line element set to a trajectory file and a fitted model, through the command line."""
import subprocess
import sys
import tempfile
from pathlib import Path

from hankeldmd import dynamics as dyn
from hankeldmd.tle import format_tle, parse_tle, record_from_elements, tle_to_elements

rec = record_from_elements(dyn.ISS_ELEMENTS, norad_id=25544, epoch_year=2023, epoch_day=100.5,
                           bstar=3.0e-4, intl_designator="98067A", name="ISS (ZARYA)")
line1, line2 = format_tle(rec)
print(line1)
print(line2)
print("elements back from the TLE:", tle_to_elements(parse_tle(line1, line2)))

work = Path(tempfile.mkdtemp())
(work / "iss.tle").write_text(f"ISS (ZARYA)\n{line1}\n{line2}\n")


def cli(*args):
    cmd = [sys.executable, "-m", "hankeldmd", *map(str, args)]
    print("$ hankeldmd", " ".join(map(str, args)))
    out = subprocess.run(cmd, capture_output=True, text=True, check=True)
    print(out.stdout.rstrip())


cli("generate", "--dynamics", "kepler", "--tle", work / "iss.tle", "--dt", 660, "--periods", 12, "-o", work / "iss.csv")
cli("rank", "-i", work / "iss.csv", "--train-periods", 10, "--rel-tol", 1e-6)
cli("fit", "-i", work / "iss.csv", "-l", 5, "--train-periods", 10, "-o", work / "model.json")
cli("predict", "-m", work / "model.json", "-i", work / "iss.csv", "-o", work / "pred.csv")
cli("spectrum", "-i", work / "iss.csv", "-o", work / "spec.csv", "--peaks", 2)
print("files in", work, ":", sorted(p.name for p in work.iterdir()))
