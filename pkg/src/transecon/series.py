"""Annual per-capita GDP series: loading, validation, correction, normalization.

CSV layout (header required)::

    year,gdp_pc[,pop_total,pop_15plus]

Values are carried in whatever real currency unit the caller supplies.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .errors import DomainError, ParseError, ValidationError

HEADER = ("year", "gdp_pc", "pop_total", "pop_15plus")


def _frozen(values: Iterable[float], dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CountrySeries:
    """Annual per-capita GDP for one country, optionally with population counts."""

    country_code: str
    years: np.ndarray
    gdp_pc: np.ndarray
    pop_total: np.ndarray | None = None
    pop_15plus: np.ndarray | None = None

    def __post_init__(self):
        years = _frozen(self.years, dtype=np.int64)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "gdp_pc", _frozen(self.gdp_pc))
        for name in ("pop_total", "pop_15plus"):
            col = getattr(self, name)
            if col is not None:
                object.__setattr__(self, name, _frozen(col))

        if years.ndim != 1 or len(years) == 0:
            raise ValidationError("series must contain at least one year")
        steps = np.diff(years)
        if np.any(steps != 1):
            i = int(np.flatnonzero(steps != 1)[0])
            kind = "duplicate or out-of-order" if steps[i] < 1 else "gap"
            raise ValidationError(f"{kind} between years {years[i]} and {years[i + 1]}")
        for name in ("gdp_pc", "pop_total", "pop_15plus"):
            col = getattr(self, name)
            if col is None:
                continue
            if col.shape != years.shape:
                raise ValidationError(f"{name} length {len(col)} != {len(years)} years")
            if not np.all(np.isfinite(col)) or np.any(col <= 0):
                raise ValidationError(f"{name} values must be finite and strictly positive")
        if self.pop_15plus is not None:
            if self.pop_total is None:
                raise ValidationError("pop_15plus requires pop_total")
            if np.any(self.pop_15plus > self.pop_total):
                raise ValidationError("pop_15plus exceeds pop_total")

    def __len__(self) -> int:
        return len(self.years)

    @property
    def has_population(self) -> bool:
        return self.pop_total is not None and self.pop_15plus is not None

    def index_of(self, year: int) -> int:
        i = int(year) - int(self.years[0])
        if not 0 <= i < len(self.years):
            raise DomainError(f"year {year} outside {self.years[0]}..{self.years[-1]}")
        return i

    def value_at(self, year: int) -> float:
        return float(self.gdp_pc[self.index_of(year)])

    def growth_rates(self) -> np.ndarray:
        """Year-on-year growth fractions, one per consecutive pair of years."""
        return self.gdp_pc[1:] / self.gdp_pc[:-1] - 1.0


@dataclass(frozen=True, eq=False)
class NormalizedSeries:
    """Levels divided by the level of ``base_year`` (which is therefore 1)."""

    base_year: int
    years: np.ndarray
    values: np.ndarray
    country_code: str = ""

    def __post_init__(self):
        object.__setattr__(self, "years", _frozen(self.years, dtype=np.int64))
        object.__setattr__(self, "values", _frozen(self.values))
        if self.years.shape != self.values.shape:
            raise ValidationError("years and values differ in length")
        if np.any(np.diff(self.years) < 1):
            raise ValidationError("years must be strictly increasing")
        if np.any(self.values <= 0) or not np.all(np.isfinite(self.values)):
            raise ValidationError("normalized values must be finite and positive")
        if self.base_year in self.years:
            base = self.values[int(np.flatnonzero(self.years == self.base_year)[0])]
            if base != 1.0:
                raise ValidationError(f"value at base year is {base}, expected 1")

    def __len__(self) -> int:
        return len(self.years)

    @property
    def offsets(self) -> np.ndarray:
        """Years elapsed since ``base_year``."""
        return (self.years - self.base_year).astype(float)


def _parse_number(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"cannot parse {column}={text!r} as a number", line) from None
    if math.isnan(value):
        raise ParseError(f"{column} is NaN", line)
    return value


def load_series(source: IO[bytes] | IO[str] | bytes | str, country_code: str) -> CountrySeries:
    """Parse CSV text into a validated :class:`CountrySeries`.

    ``source`` may be a binary or text stream, or the raw CSV bytes/str.
    Population columns are kept only if every row fills them in.
    """
    if isinstance(source, (bytes, bytearray)):
        text = bytes(source).decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw

    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty input", 1)
    header = tuple(h.strip() for h in rows[0])
    if header[:2] != HEADER[:2] or header != HEADER[: len(header)]:
        raise ParseError(f"header must be {','.join(HEADER[:2])}[,pop_total,pop_15plus], got {','.join(header)}", 1)

    years, gdp = [], []
    pops: dict[str, list[float | None]] = {name: [] for name in header[2:]}
    prev_year = None
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) > len(header) or len(row) < 2:
            raise ParseError(f"expected up to {len(header)} fields, got {len(row)}", lineno)
        cells = [c.strip() for c in row] + [""] * (len(header) - len(row))
        try:
            year = int(cells[0])
        except ValueError:
            raise ParseError(f"cannot parse year {cells[0]!r}", lineno) from None
        value = _parse_number(cells[1], lineno, "gdp_pc")
        if prev_year is not None:
            if year <= prev_year:
                raise ValidationError(f"year {year} duplicates or precedes {prev_year}", lineno)
            if year != prev_year + 1:
                raise ValidationError(f"gap: year {prev_year + 1} missing before {year}", lineno)
        if value <= 0:
            raise ValidationError(f"gdp_pc must be positive, got {value}", lineno)
        prev_year = year
        years.append(year)
        gdp.append(value)
        for name, cell in zip(header[2:], cells[2:]):
            pops[name].append(_parse_number(cell, lineno, name) if cell else None)

    if not years:
        raise ValidationError("no data rows")
    kept = {name: col for name, col in pops.items() if all(v is not None for v in col)}
    return CountrySeries(
        country_code=country_code,
        years=years,
        gdp_pc=gdp,
        pop_total=kept.get("pop_total"),
        pop_15plus=kept.get("pop_15plus"),
    )


def read_series(path: str | Path, country_code: str | None = None) -> CountrySeries:
    path = Path(path)
    with path.open("rb") as fh:
        return load_series(fh, country_code or path.stem)


def write_series(series: CountrySeries | NormalizedSeries, dest: IO[str] | str | Path) -> None:
    """Emit a series in the same CSV layout :func:`load_series` reads.

    Numbers are written with ``repr`` precision (17 significant digits), so
    a write/load round trip is lossless.
    """
    if isinstance(series, NormalizedSeries):
        cols = {"year": series.years, "gdp_pc": series.values}
    else:
        cols = {"year": series.years, "gdp_pc": series.gdp_pc}
        if series.pop_total is not None:
            cols["pop_total"] = series.pop_total
        if series.pop_15plus is not None:
            cols["pop_15plus"] = series.pop_15plus

    def _emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for i in range(len(series.years)):
            writer.writerow(
                [int(series.years[i])] + [repr(float(cols[k][i])) for k in list(cols)[1:]]
            )

    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            _emit(fh)
    else:
        _emit(dest)


def correct_for_adult_share(s: CountrySeries) -> CountrySeries:
    """Re-express per-capita GDP per person aged 15+.

    Each value is divided by pop_15plus / pop_total, which can only raise it.
    """
    if not s.has_population:
        raise ValidationError(f"{s.country_code}: adult-share correction needs pop_total and pop_15plus")
    ratio = s.pop_15plus / s.pop_total
    return CountrySeries(s.country_code, s.years, s.gdp_pc / ratio, s.pop_total, s.pop_15plus)


def normalize_to_base_year(s: CountrySeries, base_year: int) -> NormalizedSeries:
    i = s.index_of(base_year)
    values = s.gdp_pc / s.gdp_pc[i]
    values[i] = 1.0
    return NormalizedSeries(int(base_year), s.years, values, s.country_code)


def mean_growth(s: CountrySeries, start_year: int, end_year: int) -> float:
    """Compound annual growth rate between two years of the series."""
    if start_year >= end_year:
        raise DomainError(f"start_year {start_year} must precede end_year {end_year}")
    ratio = s.value_at(end_year) / s.value_at(start_year)
    return ratio ** (1.0 / (end_year - start_year)) - 1.0
