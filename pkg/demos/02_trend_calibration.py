"""
Trend growth and its power-law calibration
==========================================

With a constant population the growth rate in any year is the inverse of
the current cycle length, and the cycle length stretches with output.
Smoothing the simulated rates and regressing them on level in log-log
space gives an exponent close to -1/2.
"""

import numpy as np

from transecon.trend import (
    DEFAULT_CALIBRATION,
    DefiningAgeSeries,
    TrendState,
    calibrate_trend,
    potential_growth,
    simulate_trend_path,
)

years = 60
path = simulate_trend_path(TrendState(tcr=40.0, gdp=1.0, nt=1.0), DefiningAgeSeries.constant(1.0, years + 1),
                           [0.0] * years, years)
levels = np.array([1.0] + [gdp for gdp, _, _ in path])
rates = np.array([g for _, g, _ in path])
print(f"growth falls from {rates[0]:.4f} to {rates[-1]:.4f} while output rises {levels[-1]:.1f}x")

fit = calibrate_trend(levels[:-1], rates, width=10, step=1)
print(f"smoothed exponent b = {fit.calibration.b:.4f}")

# the calibrated law used for forecasting
for x in (5700, 8000, 10000, 14632, 31000):
    print(f"  potential growth at {x:>6}: {potential_growth(DEFAULT_CALIBRATION, x) * 100:.1f}%")
