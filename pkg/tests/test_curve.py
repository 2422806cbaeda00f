"""Logistic curve fitting and the attainable-score guideline table."""

import numpy as np
import pytest

import woesim as ws

AIV_GRID = tuple(0.5 * i for i in range(1, 15))

# reference guideline rows (median F1 by event rate over the AIV grid)
ROW_1PCT = (0.06, 0.07, 0.09, 0.11, 0.13, 0.16, 0.19, 0.23, 0.27, 0.32, 0.37, 0.42, 0.47, 0.52)
ROW_5PCT = (0.19, 0.23, 0.27, 0.32, 0.36, 0.41, 0.47, 0.52, 0.57, 0.61, 0.65, 0.69, 0.73, 0.76)
ROW_10PCT = (0.28, 0.32, 0.38, 0.43, 0.48, 0.54, 0.59, 0.64, 0.68, 0.72, 0.76, 0.79, 0.81, 0.84)


def rss_gradient(fit, points):
    """Analytic gradient of the residual sum of squares at the fitted point."""
    a = np.asarray([p[0] for p in points])
    y = np.asarray([p[1] for p in points])
    s = 1.0 / (1.0 + np.exp(-fit.k * (a - fit.x0)))
    r = y - fit.L * s
    ds = s * (1.0 - s)
    return -2.0 * np.array([
        np.sum(r * s),
        np.sum(r * fit.L * ds * (a - fit.x0)),
        np.sum(r * (-fit.L * ds * fit.k)),
    ])


class TestFitLogisticCurve:
    def test_noiseless_recovery(self):
        truth = ws.CurveFit(L=0.8, k=0.5, x0=4.0, rss=0.0)
        points = [(a, truth.predict(a)) for a in np.arange(0.5, 8.01, 0.5)]
        fit = ws.fit_logistic_curve(points)
        assert fit.L == pytest.approx(0.8, abs=1e-6)
        assert fit.k == pytest.approx(0.5, abs=1e-6)
        assert fit.x0 == pytest.approx(4.0, abs=1e-6)
        assert fit.rss < 1e-12

    def test_constant_data_degenerates_to_flat_curve(self):
        points = [(a, 0.5) for a in (1.0, 2.0, 3.0, 4.0, 5.0)]
        fit = ws.fit_logistic_curve(points)
        assert fit.rss <= 1e-10
        for a, _ in points:
            assert fit.predict(a) == pytest.approx(0.5, abs=1e-6)

    @pytest.mark.parametrize("row", [ROW_1PCT, ROW_5PCT, ROW_10PCT])
    def test_reference_rows_round_trip(self, row):
        fit = ws.fit_logistic_curve(list(zip(AIV_GRID, row)))
        for a, expected in zip(AIV_GRID, row):
            assert fit.predict(a) == pytest.approx(expected, abs=0.01)

    def test_constraints_respected(self):
        gen = np.random.default_rng(8)
        for _ in range(10):
            a = np.sort(gen.uniform(0.2, 9.0, size=8))
            a += np.arange(8) * 1e-6  # keep strengths distinct
            y = np.clip(gen.random(8), 0.01, 0.99)
            fit = ws.fit_logistic_curve(list(zip(a, y)))
            assert 0.0 < fit.L <= 1.0
            assert fit.k > 0.0

    def test_interior_solution_is_stationary(self):
        points = list(zip(AIV_GRID, ROW_1PCT))
        fit = ws.fit_logistic_curve(points)
        assert np.max(np.abs(rss_gradient(fit, points))) < 1e-6

    def test_fitted_curve_strictly_increasing(self):
        fit = ws.fit_logistic_curve(list(zip(AIV_GRID, ROW_10PCT)))
        grid = np.linspace(0.0, 10.0, 50)
        values = fit.predict(grid)
        assert np.all(np.diff(values) > 0.0)

    def test_too_few_or_duplicate_points_rejected(self):
        with pytest.raises(ws.InsufficientPoints):
            ws.fit_logistic_curve([(1.0, 0.1), (2.0, 0.2), (3.0, 0.3)])
        with pytest.raises(ws.InsufficientPoints):
            ws.fit_logistic_curve([(1.0, 0.1), (1.0, 0.2), (3.0, 0.3), (4.0, 0.4)])


@pytest.fixture(scope="module")
def fits():
    return {
        0.01: ws.fit_logistic_curve(list(zip(AIV_GRID, ROW_1PCT))),
        0.05: ws.fit_logistic_curve(list(zip(AIV_GRID, ROW_5PCT))),
        0.10: ws.fit_logistic_curve(list(zip(AIV_GRID, ROW_10PCT))),
    }


class TestGuidelineTable:
    def test_reference_anchor_values(self, fits):
        table = ws.guideline_table(fits)
        assert table.value(0.01, 2.5) == pytest.approx(0.13, abs=0.01)
        assert table.value(0.10, 7.0) == pytest.approx(0.84, abs=0.01)

    def test_monotone_in_strength(self, fits):
        table = ws.guideline_table(fits)
        for row in table.values:
            assert all(b > a for a, b in zip(row, row[1:]))

    def test_monotone_in_event_rate(self, fits):
        table = ws.guideline_table(fits)
        for j in range(len(table.aiv_grid)):
            column = [table.values[i][j] for i in range(len(table.rates))]
            assert all(b >= a for a, b in zip(column, column[1:]))

    def test_missing_rate_rejected(self, fits):
        with pytest.raises(ValueError, match="no curve fit"):
            ws.guideline_table(fits, rates=(0.01, 0.2))

    def test_render_rounds_to_two_decimals(self, fits):
        text = ws.guideline_table(fits).render()
        lines = text.splitlines()
        assert len(lines) == 4
        assert "0.13" in lines[1]  # 1% row at aiv 2.5
        assert lines[0].split()[-1] == "7.00"

    def test_rows_iterate_in_table_order(self, fits):
        table = ws.guideline_table(fits)
        rows = list(table.rows())
        assert len(rows) == 3 * 14
        assert rows[0][0] == 0.01 and rows[0][1] == 0.5
        assert rows[-1][0] == 0.10 and rows[-1][1] == 7.0
