"""Frequency tables of integer counts and their two views.

A table lists each distinct productivity value x with the number of
authors who have it.  It can be read as 0-1 curve points (x, count/n) for
curve fitting, or as n iid samples z_i, which the likelihoods only see
through (n, sum z_i, sum ln z_i).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import numpy as np

from .errors import DuplicateXError, EmptyInputError, EmptyResultError, ParseError

LOTKA_CHEMISTRY = "lotka_chemistry.csv"


@dataclass(frozen=True)
class FrequencyTable:
    rows: tuple  # ((x, count), ...) strictly increasing in x

    def __post_init__(self):
        rows = tuple((int(x), int(c)) for x, c in self.rows)
        if not rows:
            raise EmptyInputError("frequency table has no rows")
        prev = 0
        for x, c in rows:
            if x < 1 or c < 1:
                raise ParseError(f"row ({x}, {c}): x and count must be >= 1")
            if x == prev:
                raise DuplicateXError(f"duplicate x={x}")
            if x < prev:
                raise ParseError(f"rows not increasing in x at x={x}")
            prev = x
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_counts(cls, mapping):
        """Build from {x: count}, sorting by x."""
        return cls(tuple(sorted(mapping.items())))

    @property
    def n(self):
        return sum(c for _, c in self.rows)

    @property
    def x_max(self):
        return self.rows[-1][0]

    @property
    def xs(self):
        return np.array([x for x, _ in self.rows], dtype=np.int64)

    @property
    def counts(self):
        return np.array([c for _, c in self.rows], dtype=np.int64)

    def __len__(self):
        return len(self.rows)

    def to_csv(self):
        lines = ["x,count"] + [f"{x},{c}" for x, c in self.rows]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CurveData:
    points: tuple  # ((x, y), ...)

    def __post_init__(self):
        pts = tuple((int(x), float(y)) for x, y in self.points)
        if not pts:
            raise EmptyResultError("curve has no points")
        if any(y <= 0 for _, y in pts):
            raise ValueError("curve ordinates must be positive")
        object.__setattr__(self, "points", pts)

    @property
    def xs(self):
        return np.array([x for x, _ in self.points], dtype=float)

    @property
    def ys(self):
        return np.array([y for _, y in self.points], dtype=float)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class SufficientStats:
    n: int
    sum_z: int
    sum_log_z: float


def load_frequency_table(source):
    """Parse CSV with header ``x,count``.

    `source` may be a binary or text stream, bytes, or str.  Lines starting
    with ``#`` and blank lines are skipped; LF and CRLF both work.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        try:
            source = bytes(source).decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from exc

    lines = [
        (i, line) for i, line in enumerate(io.StringIO(source, newline=None), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise EmptyInputError("no header line")
    lineno, header = lines[0]
    if [h.strip().lower() for h in header.strip().split(",")] != ["x", "count"]:
        raise ParseError(f"line {lineno}: expected header 'x,count', got {header.strip()!r}")

    seen = {}
    for (lineno, line), fields in zip(lines[1:], csv.reader(l for _, l in lines[1:])):
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected 2 fields, got {len(fields)}")
        try:
            x, c = int(fields[0].strip()), int(fields[1].strip())
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer field in {line.strip()!r}") from exc
        if x <= 0 or c <= 0:
            raise ParseError(f"line {lineno}: x and count must be positive")
        if x in seen:
            raise DuplicateXError(f"line {lineno}: duplicate x={x} (first on line {seen[x][0]})")
        seen[x] = (lineno, c)
    if not seen:
        raise EmptyInputError("no data rows")
    return FrequencyTable(tuple(sorted((x, c) for x, (_, c) in seen.items())))


def read_frequency_table(path):
    with open(path, "rb") as fh:
        return load_frequency_table(fh)


def load_lotka_chemistry():
    """The bundled Lotka (1926) chemistry productivity table."""
    text = resources.files("lotkafit.datasets").joinpath(LOTKA_CHEMISTRY).read_text("utf-8")
    return load_frequency_table(text)


def sufficient_stats(table):
    return SufficientStats(
        n=table.n,
        sum_z=sum(x * c for x, c in table.rows),
        sum_log_z=math.fsum(c * math.log(x) for x, c in table.rows),
    )


def to_curve(table):
    """Untruncated curve points (x, count/n)."""
    n = table.n
    return CurveData(tuple((x, float(Fraction(c, n))) for x, c in table.rows))


def empirical_cdf(table, x):
    if x < 1:
        return 0.0
    below = sum(c for xi, c in table.rows if xi <= x)
    return below / table.n


def empirical_cdf_values(table, x_max):
    """Empirical CDF at 1..x_max as an array (exact integer prefix sums)."""
    acc = np.zeros(x_max + 1, dtype=np.int64)
    for x, c in table.rows:
        if x <= x_max:
            acc[x] += c
    return np.cumsum(acc)[1:] / table.n


def truncate_distribution(curve, x_cut):
    """Keep points with x <= x_cut; ordinates are left as they are."""
    kept = tuple((x, y) for x, y in curve.points if x <= x_cut)
    if not kept:
        raise EmptyResultError(f"no points with x <= {x_cut}")
    return CurveData(kept)


def truncate_data(data, x_cut):
    """Keep x <= x_cut and renormalize the retained ordinates to sum to 1.

    `data` is a FrequencyTable (counts renormalized exactly) or CurveData.
    """
    if isinstance(data, FrequencyTable):
        kept = [(x, c) for x, c in data.rows if x <= x_cut]
        if not kept:
            raise EmptyResultError(f"no rows with x <= {x_cut}")
        total = sum(c for _, c in kept)
        return CurveData(tuple((x, float(Fraction(c, total))) for x, c in kept))
    kept = [(x, y) for x, y in data.points if x <= x_cut]
    if not kept:
        raise EmptyResultError(f"no points with x <= {x_cut}")
    total = math.fsum(y for _, y in kept)
    return CurveData(tuple((x, y / total) for x, y in kept))
