import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpelife.grid import (
    LogGrid,
    bracket_and_weights,
    evaluate_column,
    evaluation_hazard,
    lambda_of_y,
    nearest_node,
    y_of_lambda,
)

LB = 0.02
GRID = LogGrid()


def test_default_grid_counts():
    assert (GRID.N, GRID.J) == (200, 1000)
    assert GRID.y[0] == -10.0 and GRID.y[-1] == pytest.approx(10.0)
    assert GRID.y_interior.size == GRID.N - 1
    assert GRID.tau[-1] == pytest.approx(10.0)


@pytest.mark.parametrize("kwargs", [dict(h=0.3), dict(k=0.03), dict(M=0.1, h=0.1), dict(T=-1.0), dict(h=0.0)])
def test_grid_rejects_bad_shapes(kwargs):
    with pytest.raises(ValueError):
        LogGrid(**kwargs)


def test_grid_tolerates_float_roundoff_in_counts():
    g = LogGrid(M=1.0, h=0.1, k=0.1, T=0.3)
    assert (g.N, g.J) == (20, 3)


def test_refined_grid():
    r = GRID.refined()
    assert (r.N, r.J) == (400, 4000)
    assert not r.same_as(GRID)
    assert LogGrid().same_as(GRID)


def test_y_of_lambda_examples():
    assert y_of_lambda(0.04, LB) == pytest.approx(math.log(0.02), rel=1e-15)
    assert y_of_lambda(0.04, LB) == pytest.approx(-3.9120, abs=5e-5)
    assert y_of_lambda(LB + 1.0, LB) == pytest.approx(0.0, abs=1e-15)
    assert y_of_lambda(LB + math.exp(-10.0), LB) == pytest.approx(-10.0, abs=1e-9)
    with pytest.raises(ValueError):
        y_of_lambda(LB, LB)
    with pytest.raises(ValueError):
        y_of_lambda(0.01, LB)


def test_bracket_on_node_and_midpoint():
    for n in (1, 30, 117, 199):
        assert bracket_and_weights(GRID, LB + math.exp(GRID.y[n]), LB) == (n, 0.0)
    n, w = bracket_and_weights(GRID, LB + math.exp(GRID.y[42] + GRID.h / 2), LB)
    assert n == 42 and w == pytest.approx(0.5, abs=1e-9)


def test_bracket_table_example():
    n, w = bracket_and_weights(GRID, 0.021, LB)
    assert n == 30
    assert w == pytest.approx(0.922, abs=5e-4)
    # brute-force enumeration of nodes agrees
    y = math.log(0.021 - LB)
    assert n == max(i for i, yn in enumerate(GRID.y) if yn <= y)


def test_bracket_range_and_top():
    assert bracket_and_weights(GRID, LB + math.exp(10.0), LB) == (GRID.N - 1, 1.0)
    assert bracket_and_weights(GRID, LB + math.exp(-10.0), LB) == (0, 0.0)
    with pytest.raises(ValueError):
        bracket_and_weights(GRID, LB + math.exp(-10.5), LB)
    with pytest.raises(ValueError):
        bracket_and_weights(GRID, LB + math.exp(10.5), LB)


def test_nearest_node():
    assert nearest_node(GRID, 0.021, LB) == 31
    assert nearest_node(GRID, 0.04, LB) == int(round((math.log(0.02) + 10) / 0.1))


def test_evaluate_column_floor_and_methods():
    col = np.arange(GRID.N + 1, dtype=float)
    assert evaluate_column(col, GRID, LB, LB) == 0.0
    assert evaluate_column(col, GRID, 0.021, LB) == pytest.approx(30.922447, abs=1e-6)
    assert evaluate_column(col, GRID, 0.021, LB, method="nearest") == 31.0
    with pytest.raises(ValueError):
        evaluate_column(col, GRID, 0.021, LB, method="cubic")
    with pytest.raises(ValueError):
        evaluate_column(col[:-1], GRID, 0.021, LB)


@settings(max_examples=300, deadline=None)
@given(st.floats(-9.999, 9.999))
def test_lambda_y_round_trip(y):
    lam = lambda_of_y(y, LB)
    assert lambda_of_y(y_of_lambda(lam, LB), LB) == pytest.approx(lam, rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.floats(-10.0, 10.0), st.floats(-5, 5), st.floats(-5, 5))
def test_interpolation_exact_for_functions_linear_in_y(y, slope, intercept):
    col = slope * GRID.y + intercept
    lam = LB + math.exp(y)
    got = evaluate_column(col, GRID, lam, LB)
    assert got == pytest.approx(slope * y + intercept, abs=1e-9)


def test_evaluation_hazard():
    g = LogGrid()
    assert evaluation_hazard(g, 0.04, 0.02, "linear") == 0.04
    assert evaluation_hazard(g, 0.02, 0.02, "nearest") == 0.02
    assert evaluation_hazard(g, 0.04, 0.02, "nearest") == pytest.approx(0.02 + math.exp(-3.9))
    with pytest.raises(ValueError):
        evaluation_hazard(g, 0.04, 0.02, "cubic")
    with pytest.raises(ValueError):
        evaluation_hazard(g, 0.019, 0.02, "linear")
