"""Two-line element sets: fixed-width parsing, checksums and conversion to elements.

Column layout (1-based, inclusive) follows the NORAD format::

    1 NNNNNC NNNNNAAA NNNNN.NNNNNNNN +.NNNNNNNN +NNNNN-N +NNNNN-N N NNNNC
    2 NNNNN NNN.NNNN NNN.NNNN NNNNNNN NNN.NNNN NNN.NNNN NN.NNNNNNNNNNNNNNC
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .dynamics import EARTH, GravityModel, OrbitalElements
from .errors import DataError, NumericalError

LINE_LENGTH = 69
SECONDS_PER_DAY = 86400.0


class TleError(DataError):
    pass


class TleLengthError(TleError):
    def __init__(self, line_no, length):
        self.line_no = line_no
        super().__init__(f"TLE line {line_no} has {length} characters, expected {LINE_LENGTH}")


class TleChecksumError(TleError):
    def __init__(self, line_no, expected, found):
        self.line_no = line_no
        super().__init__(f"TLE line {line_no} checksum mismatch: computed {expected}, found {found!r}")


class TleFieldError(TleError):
    def __init__(self, line_no, name, start, stop, text):
        self.line_no = line_no
        self.span = (start, stop)
        super().__init__(f"TLE line {line_no} columns {start}-{stop} ({name}): cannot parse {text!r}")


@dataclass(frozen=True)
class TleRecord:
    norad_id: int
    epoch_year: int
    epoch_day: float
    inclination: float  # deg
    raan: float  # deg
    eccentricity: float
    argp: float  # deg
    mean_anomaly: float  # deg
    mean_motion: float  # rev/day
    bstar: float = 0.0  # 1/earth radii
    ndot: float = 0.0  # rev/day^2, already halved as printed
    nddot: float = 0.0  # rev/day^3, already divided by six as printed
    classification: str = "U"
    intl_designator: str = ""
    ephemeris_type: int = 0
    element_number: int = 999
    rev_number: int = 0
    line1_checksum: int | None = None
    line2_checksum: int | None = None
    name: str | None = None

    def __post_init__(self):
        if not 0 <= self.eccentricity < 1:
            raise TleError(f"eccentricity {self.eccentricity} outside [0, 1)")


def checksum(line: str) -> int:
    """Sum of digits plus one per minus sign over the first 68 columns, modulo 10."""
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def verify_checksum(line: str, line_no: int = 1) -> int:
    if len(line) != LINE_LENGTH:
        raise TleLengthError(line_no, len(line))
    found = line[68]
    expected = checksum(line)
    if not found.isdigit() or int(found) != expected:
        raise TleChecksumError(line_no, expected, found)
    return expected


def _field(line, line_no, name, start, stop, conv):
    text = line[start - 1:stop]
    try:
        return conv(text)
    except ValueError:
        raise TleFieldError(line_no, name, start, stop, text) from None


def _implied_decimal(text):
    """Parse ``' 10270-3'`` as ``0.10270e-3`` (leading decimal point, signed exponent)."""
    t = text.strip()
    if not t:
        return 0.0
    sign = -1.0 if t[0] == "-" else 1.0
    t = t.lstrip("+-")
    if len(t) < 3 or t[-2] not in "+-":
        raise ValueError(text)
    mantissa, exponent = t[:-2], t[-2:]
    if not mantissa.isdigit() or not exponent[1].isdigit():
        raise ValueError(text)
    return sign * float("0." + mantissa) * 10.0 ** int(exponent)


def _ndot(text):
    t = text.strip()
    return float(t) if t else 0.0


def _int(text):
    t = text.strip()
    return int(t) if t else 0


def parse_tle(line1: str, line2: str, name: str | None = None) -> TleRecord:
    """Parse one element set; raises a :class:`TleError` subclass naming the offending columns."""
    line1 = line1.rstrip("\r\n")
    line2 = line2.rstrip("\r\n")
    c1 = verify_checksum(line1, 1)
    c2 = verify_checksum(line2, 2)
    if line1[0] != "1":
        raise TleFieldError(1, "line number", 1, 1, line1[0])
    if line2[0] != "2":
        raise TleFieldError(2, "line number", 1, 1, line2[0])
    norad = _field(line1, 1, "satellite number", 3, 7, int)
    norad2 = _field(line2, 2, "satellite number", 3, 7, int)
    if norad != norad2:
        raise TleFieldError(2, "satellite number", 3, 7, line2[2:7])
    yy = _field(line1, 1, "epoch year", 19, 20, int)
    return TleRecord(
        norad_id=norad,
        classification=line1[7],
        intl_designator=line1[9:17].strip(),
        epoch_year=yy + (2000 if yy < 57 else 1900),
        epoch_day=_field(line1, 1, "epoch day", 21, 32, float),
        ndot=_field(line1, 1, "mean motion derivative", 34, 43, _ndot),
        nddot=_field(line1, 1, "mean motion second derivative", 45, 52, _implied_decimal),
        bstar=_field(line1, 1, "B*", 54, 61, _implied_decimal),
        ephemeris_type=_field(line1, 1, "ephemeris type", 63, 63, _int),
        element_number=_field(line1, 1, "element set number", 65, 68, _int),
        inclination=_field(line2, 2, "inclination", 9, 16, float),
        raan=_field(line2, 2, "right ascension", 18, 25, float),
        eccentricity=_field(line2, 2, "eccentricity", 27, 33, lambda t: float("0." + t.strip()) if t.strip().isdigit() else float("x")),
        argp=_field(line2, 2, "argument of perigee", 35, 42, float),
        mean_anomaly=_field(line2, 2, "mean anomaly", 44, 51, float),
        mean_motion=_field(line2, 2, "mean motion", 53, 63, float),
        rev_number=_field(line2, 2, "revolution number", 64, 68, _int),
        line1_checksum=c1,
        line2_checksum=c2,
        name=name,
    )


def _format_implied(x):
    if x == 0:
        return " 00000-0"
    exp = math.floor(math.log10(abs(x))) + 1
    mant = round(abs(x) / 10.0 ** exp * 1e5)
    if mant >= 100000:
        mant //= 10
        exp += 1
    if not -9 <= exp <= 9:
        raise TleError(f"value {x} cannot be written in TLE exponent notation")
    return f"{'-' if x < 0 else ' '}{mant:05d}{'-' if exp < 0 else '+'}{abs(exp)}"


def _format_ndot(x):
    body = f"{abs(x):.8f}"
    if body.startswith("0"):
        body = body[1:]
    return f"{'-' if x < 0 else ' '}{body}".rjust(10)


def format_tle(rec: TleRecord) -> tuple[str, str]:
    """Serialize a record to two 69-character lines with fresh checksums."""
    ecc = f"{rec.eccentricity:.7f}"
    if not ecc.startswith("0."):
        raise TleError(f"eccentricity {rec.eccentricity} not representable")
    line1 = (f"1 {rec.norad_id:05d}{rec.classification[:1] or 'U'} {rec.intl_designator:<8.8} "
             f"{rec.epoch_year % 100:02d}{rec.epoch_day:012.8f} {_format_ndot(rec.ndot)} "
             f"{_format_implied(rec.nddot)} {_format_implied(rec.bstar)} "
             f"{rec.ephemeris_type:1d} {rec.element_number % 10000:4d}")
    line2 = (f"2 {rec.norad_id:05d} {rec.inclination % 360:8.4f} {rec.raan % 360:8.4f} {ecc[2:]} "
             f"{rec.argp % 360:8.4f} {rec.mean_anomaly % 360:8.4f} {rec.mean_motion:11.8f}"
             f"{rec.rev_number % 100000:5d}")
    assert len(line1) == 68 and len(line2) == 68, (line1, line2)
    return line1 + str(checksum(line1)), line2 + str(checksum(line2))


def read_tle_file(path) -> list[TleRecord]:
    """Read every element set in a text file; a preceding name line is kept as ``name``."""
    lines = [ln.rstrip("\r\n") for ln in Path(path).read_text().splitlines() if ln.strip()]
    records = []
    name = None
    i = 0
    while i < len(lines):
        ln = lines[i]
        if ln.startswith("1 ") and i + 1 < len(lines) and lines[i + 1].startswith("2 "):
            try:
                records.append(parse_tle(ln, lines[i + 1], name))
            except TleError as exc:
                raise TleError(f"{path}: line {i + 1}: {exc}") from exc
            name = None
            i += 2
        else:
            name = ln.strip()
            if name.startswith("0 "):
                name = name[2:]
            i += 1
    if not records:
        raise TleError(f"{path}: no element sets found")
    return records


def solve_kepler(mean_anomaly: float, e: float, tol: float = 1e-14, max_iter: int = 100) -> float:
    """Eccentric anomaly ``E`` with ``E - e sin E = M``; ``M`` in radians, result in ``[0, 2*pi)``.

    Newton's method safeguarded by a bisection bracket.
    """
    if not 0 <= e < 1:
        raise DataError(f"eccentricity must lie in [0, 1), got {e}")
    m = mean_anomaly % (2 * np.pi)
    lo, hi = 0.0, 2 * np.pi
    E = m if e < 0.8 else np.pi
    for _ in range(max_iter):
        f = E - e * np.sin(E) - m
        if f > 0:
            hi = E
        else:
            lo = E
        step = f / (1 - e * np.cos(E))
        new = E - step
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        if abs(new - E) < tol:
            E = new
            break
        E = new
    else:
        raise NumericalError(f"Kepler equation did not converge (M = {m}, e = {e})")
    if abs(E - e * np.sin(E) - m) > 1e-12:
        raise NumericalError(f"Kepler equation residual too large (M = {m}, e = {e})")
    return E


def mean_to_true(mean_anomaly_deg: float, e: float) -> float:
    E = solve_kepler(np.radians(mean_anomaly_deg), e)
    f = 2 * np.arctan2(np.sqrt(1 + e) * np.sin(E / 2), np.sqrt(1 - e) * np.cos(E / 2))
    return float(np.degrees(f) % 360.0)


def true_to_mean(true_anomaly_deg: float, e: float) -> float:
    f = np.radians(true_anomaly_deg)
    E = 2 * np.arctan2(np.sqrt(1 - e) * np.sin(f / 2), np.sqrt(1 + e) * np.cos(f / 2))
    return float(np.degrees(E - e * np.sin(E)) % 360.0)


def mean_motion_to_sma(mean_motion: float, g: GravityModel = EARTH) -> float:
    if not mean_motion > 0:
        raise DataError(f"mean motion must be positive, got {mean_motion}")
    n = mean_motion * 2 * np.pi / SECONDS_PER_DAY
    return float((g.mu / n ** 2) ** (1.0 / 3.0))


def sma_to_mean_motion(a: float, g: GravityModel = EARTH) -> float:
    return float(np.sqrt(g.mu / a ** 3) * SECONDS_PER_DAY / (2 * np.pi))


def tle_to_elements(rec: TleRecord, g: GravityModel = EARTH) -> OrbitalElements:
    """Osculating-style elements from a TLE: ``a`` from mean motion, ``f`` from mean anomaly."""
    a = mean_motion_to_sma(rec.mean_motion, g)
    f = mean_to_true(rec.mean_anomaly, rec.eccentricity)
    return OrbitalElements(a, rec.eccentricity, rec.inclination, rec.raan, rec.argp, f)


def record_from_elements(el: OrbitalElements, norad_id: int = 0, epoch_year: int = 2000,
                         epoch_day: float = 1.0, bstar: float = 0.0, g: GravityModel = EARTH,
                         **extra) -> TleRecord:
    """Inverse of :func:`tle_to_elements`, used to build fixtures from element tables."""
    return TleRecord(norad_id=norad_id, epoch_year=epoch_year, epoch_day=epoch_day,
                     inclination=el.i, raan=el.raan % 360, eccentricity=el.e, argp=el.argp % 360,
                     mean_anomaly=true_to_mean(el.true_anomaly, el.e),
                     mean_motion=sma_to_mean_motion(el.a, g), bstar=bstar, **extra)
