"""Capitalist growth trend: the Tcr recursion and the per-capita power law.

Real GDP growth over one year is half the relative change in the number of
people at the country's defining age plus 1/Tcr, and Tcr itself grows with
the square root of (1 + per-capita growth).  Over long horizons this makes
the trend fall off roughly as (per-capita GDP)^-1/2; the empirical US
calibration used for forecasts is ``63.65 * X**-0.8277``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .errors import DomainError, ValidationError

DEFAULT_SHIFT = 0.15


@dataclass(frozen=True)
class TrendCalibration:
    """Power law ``growth = a * level**b`` mapping per-capita GDP to trend growth."""

    a: float = 63.65
    b: float = -0.8277

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"multiplier a must be positive and finite, got {self.a}")
        if not math.isfinite(self.b):
            raise DomainError(f"exponent b must be finite, got {self.b}")

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "TrendCalibration":
        record = json.loads(text)
        return cls(a=float(record["a"]), b=float(record["b"]))


DEFAULT_CALIBRATION = TrendCalibration()


@dataclass(frozen=True)
class TrendState:
    tcr: float  # years
    gdp: float
    nt: float  # population aged 15+

    def __post_init__(self):
        for name in ("tcr", "gdp", "nt"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True, eq=False)
class DefiningAgeSeries:
    """Head-count at the country's defining age, one value per year."""

    years: np.ndarray
    n: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "years", np.asarray(self.years, dtype=np.int64))
        object.__setattr__(self, "n", np.asarray(self.n, dtype=float))
        if self.years.shape != self.n.shape:
            raise ValidationError("years and n differ in length")
        if np.any(self.n <= 0):
            raise ValidationError("defining-age counts must be positive")

    @classmethod
    def constant(cls, count: float, n_years: int, start_year: int = 0) -> "DefiningAgeSeries":
        return cls(np.arange(start_year, start_year + n_years), np.full(n_years, float(count)))


def growth_rate_step(n_now: float, n_prev: float, tcr_prev: float) -> float:
    """One-year real GDP growth from the defining-age head-count and Tcr."""
    if not n_prev > 0 or not tcr_prev > 0 or not n_now > 0:
        raise DomainError(f"need positive inputs, got n_now={n_now}, n_prev={n_prev}, tcr_prev={tcr_prev}")
    return 0.5 * (n_now - n_prev) / n_prev + 1.0 / tcr_prev


def update_tcr(state: TrendState, gdp_growth: float, nt_growth: float) -> float:
    radicand = 1.0 + gdp_growth - nt_growth
    if not radicand > 0:
        raise DomainError(f"Tcr radicand 1 + {gdp_growth} - {nt_growth} is not positive")
    return state.tcr * math.sqrt(radicand)


def simulate_trend_path(
    initial: TrendState,
    ages: DefiningAgeSeries,
    nt_growths: Sequence[float],
    horizon: int,
) -> list[tuple[float, float, float]]:
    """Iterate the growth step and the Tcr update for ``horizon`` years.

    ``ages`` must hold ``horizon + 1`` counts (year 0 included) and
    ``nt_growths`` one adult-population growth fraction per simulated year.
    Returns ``(gdp, growth, tcr)`` after each year; ``growth`` is the rate
    that took the previous level to ``gdp``.
    """
    if horizon < 0:
        raise DomainError("horizon must be non-negative")
    if horizon == 0:
        return []
    if len(ages.n) < horizon + 1 or len(nt_growths) < horizon:
        raise ValidationError(
            f"inputs cover {len(ages.n) - 1} / {len(nt_growths)} years, horizon is {horizon}"
        )
    state = initial
    path = []
    for i in range(1, horizon + 1):
        g = growth_rate_step(ages.n[i], ages.n[i - 1], state.tcr)
        tcr = update_tcr(state, g, nt_growths[i - 1])
        gdp = state.gdp * (1.0 + g)
        if not gdp > 0:
            raise DomainError(f"GDP collapsed to {gdp} in year {i}")
        state = TrendState(tcr=tcr, gdp=gdp, nt=state.nt * (1.0 + nt_growths[i - 1]))
        path.append((gdp, g, tcr))
    return path


def smooth_window(values: Sequence[float], width: int, step: int = 1) -> list[tuple[int, float]]:
    """Moving-window means over full windows only; trailing partial windows are dropped.

    Returns ``(center index, mean)`` pairs, the centre being
    ``start + (width - 1) // 2``.
    """
    values = np.asarray(values, dtype=float)
    if width < 1 or step < 1:
        raise DomainError("width and step must be >= 1")
    if width > len(values):
        raise DomainError(f"window width {width} exceeds series length {len(values)}")
    return [
        (int(s + (width - 1) // 2), float(values[s : s + width].mean()))
        for s in range(0, len(values) - width + 1, step)
    ]


def fit_power_law(xs: Sequence[float], ys: Sequence[float]) -> TrendCalibration:
    """Ordinary least squares of ln(y) on ln(x); returns ``a=exp(intercept), b=slope``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("xs and ys must be 1-D and equally long")
    if len(x) < 2:
        raise DomainError("need at least two points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("power-law regression needs strictly positive values")
    lx, ly = np.log(x), np.log(y)
    dx = lx - lx.mean()
    sxx = float(dx @ dx)
    if sxx <= 1e-300 * len(x) or np.ptp(lx) == 0:
        raise DomainError("degenerate input: all x values equal")
    slope = float(dx @ (ly - ly.mean())) / sxx
    intercept = float(ly.mean() - slope * lx.mean())
    return TrendCalibration(a=math.exp(intercept), b=slope)


def shift_growth_series(growth: Sequence[float], shift: float = DEFAULT_SHIFT) -> np.ndarray:
    shifted = np.asarray(growth, dtype=float) + shift
    if np.any(shifted <= 0):
        raise DomainError(f"shift {shift} leaves non-positive values; raise the shift")
    return shifted


def potential_growth(cal: TrendCalibration, gdp_pc: float) -> float:
    if not gdp_pc > 0:
        raise DomainError(f"per-capita GDP must be positive, got {gdp_pc}")
    return cal.a * gdp_pc**cal.b


@dataclass(frozen=True, eq=False)
class TrendFit:
    calibration: TrendCalibration
    levels: np.ndarray  # x values fed to the regression
    rates: np.ndarray  # y values fed to the regression
    centers: np.ndarray  # index into the growth-rate series for each point


def calibrate_trend(
    levels: Sequence[float],
    growth: Sequence[float],
    *,
    width: int | None = 10,
    step: int = 1,
    shift: float = 0.0,
    x_scale: float = 1.0,
) -> TrendFit:
    """Fit a power law of growth on level, optionally after window smoothing.

    ``levels[i]`` is the level at the start of the year whose growth is
    ``growth[i]``.  With ``width=None`` the raw annual rates are used and a
    ``shift`` (commonly 0.15) is usually needed to make them positive.
    ``x_scale`` multiplies the levels before fitting, e.g. to convert
    between base-year dollars.
    """
    levels = np.asarray(levels, dtype=float) * x_scale
    growth = np.asarray(growth, dtype=float)
    if levels.shape != growth.shape:
        raise ValidationError("levels and growth differ in length")
    if width is None:
        xs, ys, centers = levels, growth, np.arange(len(growth))
    else:
        sm_g = smooth_window(growth, width, step)
        sm_x = smooth_window(levels, width, step)
        centers = np.array([c for c, _ in sm_g])
        ys = np.array([m for _, m in sm_g])
        xs = np.array([m for _, m in sm_x])
    ys = shift_growth_series(ys, shift)
    return TrendFit(fit_power_law(xs, ys), xs, ys, centers)


def write_calibration(cal: TrendCalibration, dest: str | Path | IO[str]) -> None:
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(cal.to_json() + "\n")
    else:
        dest.write(cal.to_json() + "\n")


def read_calibration(path: str | Path) -> TrendCalibration:
    return TrendCalibration.from_json(Path(path).read_text())
