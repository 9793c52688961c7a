import io
import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpelife import pde
from sharpelife.discount import DiscountCurve
from sharpelife.grid import LogGrid, evaluate_column
from sharpelife.hazard import HazardParams
from sharpelife.pricing import (
    BENCHMARK_TABLE,
    TABLE_COLUMNS,
    build_table,
    integrate_price,
    integrate_surface,
    quadrature_weights,
    solve_table_surfaces,
)

TABLE_TOL = 2e-3


# --- discount curve ------------------------------------------------------------


def test_flat_curve():
    c = DiscountCurve.flat()
    assert c.is_flat
    np.testing.assert_array_equal(c([0.0, 3.0, 50.0]), 1.0)


def test_curve_interpolates_and_holds_flat():
    c = DiscountCurve.from_knots([0, 5, 10], [1.0, 0.9, 0.8])
    assert float(c(7.5)) == pytest.approx(0.85)
    assert float(c(30.0)) == 0.8
    assert float(c.forward(5.0, 10.0)) == pytest.approx(0.8 / 0.9)
    assert not c.is_flat


@pytest.mark.parametrize(
    "times,prices",
    [([0, 1], [0.9, 0.8]), ([1, 2], [1.0, 0.9]), ([0, 2, 1], [1.0, 0.9, 0.8]), ([0, 1], [1.0, 1.1]), ([0, 1], [1.0, 0.0]), ([], [])],
)
def test_curve_validation(times, prices):
    with pytest.raises(ValueError):
        DiscountCurve.from_knots(times, prices)


def test_curve_from_csv(tmp_path):
    path = tmp_path / "curve.csv"
    path.write_text("s,F\n0,1\n5,0.9\n10,0.75\n")
    c = DiscountCurve.from_csv(path)
    assert float(c(10)) == 0.75
    assert DiscountCurve.from_csv(io.StringIO("s,F\n0,1\n")).is_flat
    with pytest.raises(ValueError):
        DiscountCurve.from_csv(io.StringIO("t,P\n0,1\n"))


# --- quadrature ----------------------------------------------------------------


def test_quadrature_weights(grid):
    w = quadrature_weights(grid)
    assert w[0] == w[-1] == grid.k / 2 and np.all(w[1:-1] == grid.k)
    assert quadrature_weights(grid, "right")[0] == 0
    with pytest.raises(ValueError):
        quadrature_weights(grid, "simpson")


def test_constant_density_integrates_exactly(params):
    g = LogGrid(M=1.0, h=0.5, k=0.25, T=10.0)
    d0 = 0.037
    shape = (g.N - 1, g.J + 1)
    s = pde.Surface(pde.SurfaceKind.DENSITY_F, np.full(shape, d0), np.full(g.J + 1, d0), np.full(g.J + 1, d0), g, params)
    assert integrate_price(s, None, g, 0.5, method="linear") == pytest.approx(d0 * 10.0, rel=1e-14)
    np.testing.assert_allclose(integrate_surface(s), d0 * 10.0, rtol=1e-14)


def test_integrate_price_table_examples(density_f, density_g, grid):
    assert integrate_price(density_f, None, grid, 0.05) == pytest.approx(0.4451, abs=TABLE_TOL)
    assert integrate_price(density_g, None, grid, 0.05) == pytest.approx(0.5639, abs=TABLE_TOL)


def test_integrate_price_rejects_bad_input(density_f, prices, grid):
    with pytest.raises(ValueError):
        integrate_price(prices[0], None, grid, 0.05)
    with pytest.raises(ValueError):
        integrate_price(density_f, None, grid, 0.019)
    with pytest.raises(ValueError):
        integrate_price(density_f, None, LogGrid(M=5), 0.05)


def test_discounted_price_matches_deterministic_closed_form(grid):
    p = HazardParams(mu=0.04, sigma=0.0, lambda_bar=0.02, alpha=0.1)
    curve = DiscountCurve.from_knots([0, 2, 5, 10], [1.0, 0.95, 0.86, 0.72])
    exact = pde.closed_form_deterministic(p, 0.03, 0.0, 10.0, curve)
    f = pde.solve_density_f(p.with_alpha(0.0), grid)
    g = pde.solve_density_g(p, grid)
    exact_net = pde.closed_form_deterministic(p.with_alpha(0.0), 0.03, 0.0, 10.0, curve)
    assert integrate_price(f, curve, grid, 0.03) == pytest.approx(exact_net, abs=1e-4)
    assert integrate_price(g, curve, grid, 0.03) == pytest.approx(exact, abs=1e-4)


def test_discounting_lowers_prices(density_f, grid):
    curve = DiscountCurve.from_knots([0, 10], [1.0, 0.7])
    for lam0 in (0.02, 0.04, 0.1):
        assert integrate_price(density_f, curve, grid, lam0) < integrate_price(density_f, None, grid, lam0)


# --- tables --------------------------------------------------------------------


@pytest.fixture(scope="module")
def benchmark_table(params, grid):
    return build_table(params, grid, list(BENCHMARK_TABLE), n=1, method="nearest")


def test_table_layout(benchmark_table):
    text = benchmark_table.to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(TABLE_COLUMNS)
    assert lines[0] == "lambda0,net_premium,P,A_per_contract,B_per_contract,finite_charge,mortality_charge"
    assert len(lines) == 13
    doc = json.loads(benchmark_table.to_json())
    assert doc["columns"] == list(TABLE_COLUMNS) and len(doc["rows"]) == 12
    assert doc["n"] == 1 and doc["params"]["alpha"] == 0.1


def test_table_decomposition(benchmark_table):
    for row in benchmark_table.rows:
        assert row.finite_charge == pytest.approx(row.A_per_contract - row.P, abs=1e-15)
        assert row.mortality_charge == pytest.approx(row.P - row.net_premium, abs=1e-15)
        assert row.finite_charge >= -5e-3
        assert row.mortality_charge >= 0
        assert row.net_premium <= row.P <= row.A_per_contract <= row.B_per_contract + 5e-3


def test_table_close_to_benchmark(benchmark_table):
    for row in benchmark_table.rows:
        ref = BENCHMARK_TABLE[row.lambda0]
        got = (row.net_premium, row.P, row.A_per_contract, row.B_per_contract)
        assert np.max(np.abs(np.subtract(got, ref))) <= TABLE_TOL


def test_no_volatility_means_no_mortality_charge(grid):
    p = HazardParams(mu=0.04, sigma=0.0, lambda_bar=0.02, alpha=0.1)
    t = build_table(p, grid, [0.02, 0.03, 0.05, 0.07])
    assert np.all(np.abs(t.column("mortality_charge")) <= 1e-6)


def test_larger_portfolio_has_smaller_finite_charge(params, grid):
    lam = [0.02, 0.025, 0.04, 0.07]
    one = build_table(params, grid, lam, n=1)
    ten = build_table(params, grid, lam, n=10)
    assert np.all(ten.column("finite_charge") < one.column("finite_charge"))
    np.testing.assert_array_equal(ten.column("P"), one.column("P"))


def test_build_table_reuses_surfaces(params, grid):
    s = solve_table_surfaces(params, grid, 2)
    a = build_table(params, grid, [0.03], n=2, surfaces=s)
    b = build_table(params, grid, [0.03], n=2)
    assert a.rows == b.rows
    assert a.rows[0].A_per_contract == pytest.approx(s.prices[1].at(0.03) / 2)


def test_non_flat_curve_marks_nonlinear_columns(params, grid):
    curve = DiscountCurve.from_knots([0, 10], [1.0, 0.8])
    with pytest.warns(UserWarning, match="NaN"):
        t = build_table(params, grid, [0.04], n=2, discount=curve)
    row = t.rows[0]
    assert math.isnan(row.A_per_contract) and math.isnan(row.B_per_contract)
    assert row.P < build_table(params, grid, [0.04]).rows[0].P
    assert json.loads(t.to_json())["rows"][0][3] is None
    with pytest.warns(UserWarning):
        t1 = build_table(params, grid, [0.04], n=1, discount=curve)
    assert not math.isnan(t1.rows[0].B_per_contract)


def test_build_table_deterministic(params, grid):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        a = build_table(params, grid, [0.021, 0.05]).to_csv()
        b = build_table(params, grid, [0.021, 0.05]).to_csv()
    assert a == b


def test_build_table_rejects_bad_n(params, grid):
    with pytest.raises(ValueError):
        build_table(params, grid, [0.04], n=0)


@pytest.fixture(scope="module")
def price_columns(density_f, net, grid):
    f0 = pde.solve_density_f(density_f.params.with_alpha(0.0), grid)
    return integrate_surface(density_f), integrate_surface(f0)


@settings(max_examples=200, deadline=None)
@given(st.just(0.02) | st.floats(0.02 + 1e-4, 0.5), st.just(0.0) | st.floats(1e-4, 0.5))
def test_price_properties_in_initial_hazard(price_columns, grid, lam0, bump):
    P_col, net_col = price_columns
    P = lambda x: float(evaluate_column(P_col, grid, x, 0.02))
    N = lambda x: float(evaluate_column(net_col, grid, x, 0.02))
    assert 0 <= N(lam0) <= P(lam0) + 1e-12 <= 1 + 1e-12
    assert P(lam0 + bump) >= P(lam0) - 1e-12
    assert N(lam0 + bump) >= N(lam0) - 1e-12
