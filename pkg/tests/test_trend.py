import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from transecon.errors import DomainError
from transecon.trend import (
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


def _brute_force_path(tcr, years):
    """Plain-loop iteration of the growth step and Tcr update, constant populations."""
    levels, rates = [1.0], []
    gdp = 1.0
    for _ in range(years):
        g = 1.0 / tcr
        gdp *= 1.0 + g
        tcr *= math.sqrt(1.0 + g)
        levels.append(gdp)
        rates.append(g)
    return np.array(levels), np.array(rates)


class TestGrowthStep:
    def test_population_term_vanishes(self):
        assert growth_rate_step(100.0, 100.0, 40.0) == 0.025

    def test_growing_population(self):
        assert growth_rate_step(102.0, 100.0, 50.0) == pytest.approx(0.03, abs=1e-15)

    def test_shrinking_population(self):
        assert growth_rate_step(98.0, 100.0, 100.0) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("args", [(1.0, 0.0, 40.0), (1.0, 1.0, 0.0), (1.0, -1.0, 40.0), (0.0, 1.0, 40.0)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            growth_rate_step(*args)


class TestUpdateTcr:
    def test_unit_radicand(self):
        assert update_tcr(TrendState(40.0, 1.0, 1.0), 0.02, 0.02) == 40.0

    def test_value(self):
        assert update_tcr(TrendState(40.0, 1.0, 1.0), 0.04, 0.01) == pytest.approx(40.0 * math.sqrt(1.03), rel=1e-15)
        assert update_tcr(TrendState(40.0, 1.0, 1.0), 0.04, 0.01) == pytest.approx(40.5956, abs=5e-5)

    def test_collapse(self):
        with pytest.raises(DomainError):
            update_tcr(TrendState(40.0, 1.0, 1.0), -1.5, 0.0)


class TestSimulatePath:
    def test_empty(self):
        assert simulate_trend_path(TrendState(40, 1, 1), DefiningAgeSeries.constant(1, 1), [], 0) == []

    def test_first_year(self):
        path = simulate_trend_path(TrendState(40, 1, 1), DefiningAgeSeries.constant(5, 2), [0.0], 1)
        gdp, g, tcr = path[0]
        assert g == 0.025
        assert gdp == pytest.approx(1.025)
        assert tcr == pytest.approx(40.4969, abs=5e-5)

    def test_matches_brute_force_and_increases(self):
        path = simulate_trend_path(TrendState(40, 1, 1), DefiningAgeSeries.constant(5, 11), [0.0] * 10, 10)
        levels, rates = _brute_force_path(40.0, 10)
        np.testing.assert_allclose([p[0] for p in path], levels[1:], rtol=1e-14)
        np.testing.assert_allclose([p[1] for p in path], rates, rtol=1e-14)
        gdp = [1.0] + [p[0] for p in path]
        tcr = [40.0] + [p[2] for p in path]
        assert np.all(np.diff(gdp) > 0) and np.all(np.diff(tcr) > 0)

    def test_short_inputs_rejected(self):
        with pytest.raises(ValueError):
            simulate_trend_path(TrendState(40, 1, 1), DefiningAgeSeries.constant(5, 3), [0.0] * 5, 5)

    def test_growth_tracks_inverse_tcr(self):
        # with constant populations each step's growth is exactly 1/Tcr of the previous year,
        # and the step-to-step drift is about 1/(2 Tcr^2)
        path = simulate_trend_path(TrendState(25, 1, 1), DefiningAgeSeries.constant(5, 41), [0.0] * 40, 40)
        tcrs = [25.0] + [p[2] for p in path]
        for (_, g, _), tcr_prev in zip(path, tcrs):
            assert g == pytest.approx(1.0 / tcr_prev, rel=1e-15)
        rates = np.array([p[1] for p in path])
        assert np.all(np.abs(np.diff(rates)) <= 1e-3)


class TestSmoothing:
    def test_identity(self):
        vals = [3.0, 1.0, 4.0]
        assert smooth_window(vals, 1, 1) == [(0, 3.0), (1, 1.0), (2, 4.0)]

    def test_pairs(self):
        assert [m for _, m in smooth_window([1, 2, 3, 4], 2, 1)] == [1.5, 2.5, 3.5]

    def test_step_drops_partial(self):
        out = smooth_window(list(range(9)), 4, 3)
        assert [m for _, m in out] == [1.5, 4.5]
        assert [c for c, _ in out] == [1, 4]

    def test_too_wide(self):
        with pytest.raises(DomainError):
            smooth_window([1, 2, 3, 4], 5, 1)


class TestPowerLaw:
    def test_recovers_calibration(self):
        x = np.geomspace(2000, 40000, 25)
        cal = fit_power_law(x, 63.65 * x**-0.8277)
        assert cal.a == pytest.approx(63.65, rel=1e-9)
        assert cal.b == pytest.approx(-0.8277, abs=1e-9)

    def test_two_points(self):
        cal = fit_power_law([1, 4], [1, 2])
        assert cal.a == pytest.approx(1.0, rel=1e-15)
        assert cal.b == pytest.approx(0.5, rel=1e-15)

    def test_degenerate(self):
        with pytest.raises(DomainError):
            fit_power_law([3, 3, 3], [1, 2, 3])

    def test_non_positive(self):
        with pytest.raises(DomainError):
            fit_power_law([1, 2], [1, -2])

    @given(
        st.floats(min_value=1e-2, max_value=1e5),
        st.floats(min_value=1e-2, max_value=1e5),
        st.floats(min_value=1e-3, max_value=1e3),
        st.floats(min_value=1e-3, max_value=1e3),
    )
    def test_exact_on_two_points(self, x1, x2, y1, y2):
        if abs(math.log(x1) - math.log(x2)) < 0.5:
            return
        cal = fit_power_law([x1, x2], [y1, y2])
        assert potential_growth(cal, x1) == pytest.approx(y1, rel=1e-8)
        assert potential_growth(cal, x2) == pytest.approx(y2, rel=1e-8)


class TestShift:
    def test_shift(self):
        np.testing.assert_allclose(shift_growth_series([-0.05, 0.02]), [0.10, 0.17], rtol=1e-14)

    def test_still_negative(self):
        with pytest.raises(DomainError):
            shift_growth_series([-0.2])

    def test_zero_shift(self):
        assert shift_growth_series([0.1, 0.2], 0.0).tolist() == [0.1, 0.2]


class TestPotentialGrowth:
    @pytest.mark.parametrize(
        "level, quoted",
        [(7371, 0.040), (10000, 0.031), (14632, 0.022), (6903, 0.042), (5700, 0.050), (8000, 0.037), (6200, 0.046)],
    )
    def test_quoted_rates(self, level, quoted):
        assert potential_growth(DEFAULT_CALIBRATION, level) == pytest.approx(quoted, abs=1e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            potential_growth(DEFAULT_CALIBRATION, 0.0)

    def test_monotone(self):
        grid = np.geomspace(1.0, 1e6, 500)
        g = [potential_growth(DEFAULT_CALIBRATION, x) for x in grid]
        assert np.all(np.diff(g) < 0)

    def test_calibration_json(self):
        cal = TrendCalibration(1.5, -0.3)
        assert json.loads(cal.to_json()) == {"a": 1.5, "b": -0.3}
        assert TrendCalibration.from_json(cal.to_json()) == cal

    def test_invalid_calibration(self):
        with pytest.raises(DomainError):
            TrendCalibration(a=-1.0, b=0.5)


def test_smoothed_exponent_near_half():
    levels, rates = _brute_force_path(40.0, 60)
    # independent oracle: window means by hand, slope by numpy.polyfit
    w = 10
    xs = [levels[i : i + w].mean() for i in range(60 - w + 1)]
    ys = [rates[i : i + w].mean() for i in range(60 - w + 1)]
    oracle = np.polyfit(np.log(xs), np.log(ys), 1)[0]

    path = simulate_trend_path(TrendState(40.0, 1.0, 1.0), DefiningAgeSeries.constant(1.0, 61), [0.0] * 60, 60)
    lv = np.array([1.0] + [p[0] for p in path])
    fit = calibrate_trend(lv[:-1], [p[1] for p in path], width=10, step=1)
    assert fit.calibration.b == pytest.approx(oracle, abs=1e-9)
    assert -0.55 <= fit.calibration.b <= -0.42


def test_raw_shifted_fit_and_x_scale():
    levels, rates = _brute_force_path(30.0, 40)
    raw = calibrate_trend(levels[:-1], rates, width=None, shift=0.15)
    assert raw.calibration.b == pytest.approx(np.polyfit(np.log(levels[:-1]), np.log(rates + 0.15), 1)[0], abs=1e-10)
    scaled = calibrate_trend(levels[:-1], rates, width=None, shift=0.15, x_scale=2.0)
    # rescaling X moves only the multiplier
    assert scaled.calibration.b == pytest.approx(raw.calibration.b, abs=1e-12)
    assert scaled.calibration.a == pytest.approx(raw.calibration.a * 2.0 ** -raw.calibration.b, rel=1e-10)
