"""Best-case forward paths and lags against a leading economy.

A country on its best-case path grows every year at the calibrated
potential rate for the level it has reached: ``X[i+1] = X[i] * (1 + a*X[i]**b)``.
With ``b`` near -0.83 the absolute increment ``a*X**(1+b)`` is almost flat
in X, so two countries on such paths keep a nearly constant absolute gap
while the follower's relative position ``X / (X + gap)`` creeps up.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO

import numpy as np

from .errors import DomainError, ValidationError
from .transition import TransitionParams, evaluate_transition, population_shares
from .trend import DEFAULT_CALIBRATION, TrendCalibration


@dataclass(frozen=True, eq=False)
class ForecastPath:
    start_year: int
    levels: np.ndarray
    switch_index: int | None = None  # first year on the potential-growth law, if any

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)
        if levels.ndim != 1 or len(levels) == 0:
            raise ValidationError("a path needs at least one level")
        if np.any(levels <= 0) or not np.all(np.isfinite(levels)):
            raise ValidationError("levels must be finite and positive")

    @property
    def years(self) -> np.ndarray:
        return self.start_year + np.arange(len(self.levels))

    @property
    def growth_rates(self) -> np.ndarray:
        return self.levels[1:] / self.levels[:-1] - 1.0

    @property
    def horizon(self) -> int:
        return len(self.levels) - 1


@dataclass(frozen=True, eq=False)
class LagSeries:
    years: np.ndarray
    absolute_gap: np.ndarray  # leader - follower
    relative_lag: np.ndarray  # follower / leader


def forecast_best_case(
    x0: float,
    cal: TrendCalibration = DEFAULT_CALIBRATION,
    horizon: int = 50,
    start_year: int = 0,
) -> ForecastPath:
    if not x0 > 0:
        raise DomainError(f"initial level must be positive, got {x0}")
    if horizon < 0:
        raise DomainError("horizon must be non-negative")
    levels = np.empty(horizon + 1)
    levels[0] = x = float(x0)
    for i in range(1, horizon + 1):
        x = x * (1.0 + cal.a * x**cal.b)
        levels[i] = x
    return ForecastPath(start_year, levels)


def gap_series(follower: ForecastPath, leader: ForecastPath) -> LagSeries:
    if follower.start_year != leader.start_year or len(follower.levels) != len(leader.levels):
        raise ValidationError(
            f"paths differ: start {follower.start_year}/{leader.start_year}, "
            f"horizon {follower.horizon}/{leader.horizon}"
        )
    return LagSeries(
        years=follower.years,
        absolute_gap=leader.levels - follower.levels,
        relative_lag=follower.levels / leader.levels,
    )


def forecast_with_transition(
    params: TransitionParams,
    x_start: float,
    cal: TrendCalibration = DEFAULT_CALIBRATION,
    threshold: float = 0.99,
    horizon: int = 50,
) -> ForecastPath:
    """Follow the transition model until the capitalist share reaches ``threshold``.

    From the first whole year ``t`` with capitalist population share
    ``>= threshold`` the level ``x_start * M(t)`` seeds a best-case path for
    the remaining years.  If that never happens within ``horizon`` the
    whole path is the transition curve.
    """
    if not 0 < threshold <= 1:
        raise DomainError(f"threshold must lie in (0, 1], got {threshold}")
    if not x_start > 0:
        raise DomainError(f"x_start must be positive, got {x_start}")
    if horizon < 0:
        raise DomainError("horizon must be non-negative")
    t = np.arange(horizon + 1, dtype=float)
    levels = x_start * evaluate_transition(params, t)[2]
    switch = None
    for i in range(horizon + 1):
        if population_shares(params, float(i)).capitalist >= threshold:
            switch = i
            break
    if switch is not None:
        tail = forecast_best_case(float(levels[switch]), cal, horizon - switch)
        levels[switch:] = tail.levels
    return ForecastPath(params.start_year, levels, switch)


def write_path(path: ForecastPath, dest: str | Path | IO[str]) -> None:
    lines = ["year,level"] + [f"{int(y)},{float(v)!r}" for y, v in zip(path.years, path.levels)]
    _write(dest, "\n".join(lines) + "\n")


def write_lags(lags: LagSeries, dest: str | Path | IO[str]) -> None:
    lines = ["year,gap,relative_lag"] + [
        f"{int(y)},{float(g)!r},{float(r)!r}"
        for y, g, r in zip(lags.years, lags.absolute_gap, lags.relative_lag)
    ]
    _write(dest, "\n".join(lines) + "\n")


def read_path(path: str | Path) -> ForecastPath:
    rows = Path(path).read_text().strip().splitlines()
    if not rows or rows[0].strip() != "year,level":
        raise ValidationError(f"{path}: expected header year,level")
    years, levels = zip(*((int(a), float(b)) for a, b in (r.split(",") for r in rows[1:])))
    return ForecastPath(years[0], np.array(levels))


def lag_summary(lags: LagSeries) -> dict:
    drift = np.diff(lags.absolute_gap) / lags.absolute_gap[:-1]
    return {
        "first_year": int(lags.years[0]),
        "last_year": int(lags.years[-1]),
        "gap_start": float(lags.absolute_gap[0]),
        "gap_end": float(lags.absolute_gap[-1]),
        "gap_min": float(lags.absolute_gap.min()),
        "gap_max": float(lags.absolute_gap.max()),
        "max_relative_drift": float(np.abs(drift).max()) if len(drift) else 0.0,
        "relative_lag_start": float(lags.relative_lag[0]),
        "relative_lag_end": float(lags.relative_lag[-1]),
    }


def _write(dest, text: str) -> None:
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def summary_json(path: ForecastPath, lags: LagSeries | None = None) -> str:
    record = {
        "start_year": path.start_year,
        "horizon": path.horizon,
        "level_start": float(path.levels[0]),
        "level_end": float(path.levels[-1]),
        "switch_index": path.switch_index,
    }
    if lags is not None:
        record["lags"] = lag_summary(lags)
    return json.dumps(record, indent=2)
