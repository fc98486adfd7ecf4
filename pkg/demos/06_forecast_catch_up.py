"""
Best-case catch-up forecasts
============================

A follower growing at its potential rate closes the relative gap to a
leader, yet the absolute gap barely moves over half a century.
"""

from transecon.forecast import forecast_best_case, forecast_with_transition, gap_series, lag_summary
from transecon.transition import TransitionParams

follower = forecast_best_case(8000.0, horizon=50, start_year=2004)
leader = forecast_best_case(31000.0, horizon=50, start_year=2004)
lags = gap_series(follower, leader)
for i in range(0, 51, 10):
    print(f"{lags.years[i]}  gap {lags.absolute_gap[i]:8.0f}  follower/leader {lags.relative_lag[i]:.3f}")
print(lag_summary(lags))

# transition dynamics first, best-case growth once the old sector is gone
path = forecast_with_transition(TransitionParams(0.40, 0.22, 0.021, start_year=1989), 6903.0, horizon=40)
print(f"Hungary switches to trend growth in {path.start_year + path.switch_index} "
      f"at {path.levels[path.switch_index]:.0f}, reaching {path.levels[-1]:.0f} by {path.years[-1]}")
