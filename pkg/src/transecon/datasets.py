"""Bundled synthetic country series.

Historical national-accounts inputs are not redistributable, so the package ships
deterministic stand-ins with the same CSV shape.  ``regenerate()`` rebuilds
them bit-for-bit.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .series import CountrySeries, read_series, write_series
from .transition import TransitionParams, evaluate_transition
from .trend import DefiningAgeSeries, TrendState, simulate_trend_path

# (params, first-year level, last year, noise, seed)
TRANSITION_COUNTRIES = {
    "RUS": (TransitionParams(0.24, 0.066, 0.033, start_year=1991), 7371.0, 2005, 0.01, 1991),
    "HUN": (TransitionParams(0.40, 0.22, 0.021, start_year=1989), 6903.0, 2004, 0.01, 1989),
    "POL": (TransitionParams(0.46, 0.23, 0.030, start_year=1989), 5700.0, 2004, 0.01, 1989),
}


def _transition_series(code: str) -> CountrySeries:
    params, x0, last, noise, seed = TRANSITION_COUNTRIES[code]
    years = np.arange(params.start_year, last + 1)
    levels = x0 * evaluate_transition(params, (years - params.start_year).astype(float))[2]
    rng = np.random.default_rng(seed)
    levels[1:] *= 1.0 + noise * rng.standard_normal(len(years) - 1)
    return CountrySeries(code, years, np.round(levels, 2))


def _leader_series() -> CountrySeries:
    """USA-like leader: Tcr recursion from 1930 with a slowly ageing population."""
    years = np.arange(1930, 2007)
    n = len(years)
    ratio = np.linspace(0.70, 0.78, n)  # adult share of population
    pop_total = np.round(123e6 * 1.012 ** np.arange(n))
    pop_15 = np.round(pop_total * ratio)
    rng = np.random.default_rng(1930)
    ages = DefiningAgeSeries(years, 2.0e6 * np.exp(0.02 * np.cumsum(rng.standard_normal(n))))
    nt_growth = pop_15[1:] / pop_15[:-1] - 1.0
    path = simulate_trend_path(TrendState(tcr=25.0, gdp=1.0, nt=pop_15[0]), ages, nt_growth, n - 1)
    total = np.concatenate(([1.0], [p[0] for p in path]))
    # Tcr recursion gives total GDP; divide by population for the per-capita column
    gdp_pc = total / pop_total * pop_total[0]
    gdp_pc *= 6301.0 / gdp_pc[0]
    return CountrySeries("USA", years, np.round(gdp_pc, 2), pop_total, pop_15)


def build() -> dict[str, CountrySeries]:
    out = {code: _transition_series(code) for code in TRANSITION_COUNTRIES}
    out["USA"] = _leader_series()
    return out


def path(code: str) -> Path:
    return Path(str(resources.files("transecon") / "data" / f"{code.lower()}_synthetic.csv"))


def load(code: str) -> CountrySeries:
    return read_series(path(code), code)


def regenerate(directory: str | Path | None = None) -> list[Path]:
    directory = Path(directory) if directory is not None else path("RUS").parent
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for code, s in build().items():
        dest = directory / f"{code.lower()}_synthetic.csv"
        write_series(s, dest)
        written.append(dest)
    return written
