"""Socialism-to-capitalism transition model for per-capita GDP series.

Submodules:

- :mod:`transecon.series`      annual CSV series, adult-share correction, normalization
- :mod:`transecon.trend`       Tcr growth recursion and the per-capita power law
- :mod:`transecon.transition`  three-parameter transition curve, troughs, Monte Carlo check
- :mod:`transecon.fitting`     grid search + bisection fit of the transition parameters
- :mod:`transecon.forecast`    best-case forward paths and lags against a leader
- :mod:`transecon.cli`         ``transecon`` command line
"""

from .errors import ConfigurationError, DomainError, ParseError, TransitionError, ValidationError
from .fitting import FitConfig, FitResult, fit_grid, fit_report, objective_rmse, synthetic_series
from .forecast import ForecastPath, LagSeries, forecast_best_case, forecast_with_transition, gap_series
from .series import (
    CountrySeries,
    NormalizedSeries,
    correct_for_adult_share,
    load_series,
    mean_growth,
    normalize_to_base_year,
    read_series,
    write_series,
)
from .transition import (
    MicroRates,
    ReservoirShares,
    TransitionParams,
    evaluate_transition,
    find_trough,
    mc_simulate,
    population_shares,
    trough_vs_ratio,
)
from .trend import (
    DEFAULT_CALIBRATION,
    DefiningAgeSeries,
    TrendCalibration,
    TrendState,
    calibrate_trend,
    fit_power_law,
    growth_rate_step,
    potential_growth,
    shift_growth_series,
    simulate_trend_path,
    smooth_window,
    update_tcr,
)

__version__ = "0.1.0"
