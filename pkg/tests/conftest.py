import pytest

from sharpelife import pde
from sharpelife.pricing import BENCHMARK_GRID, BENCHMARK_PARAMS

N_MAX = 10


@pytest.fixture(scope="session")
def params():
    return BENCHMARK_PARAMS


@pytest.fixture(scope="session")
def grid():
    return BENCHMARK_GRID


@pytest.fixture(scope="session")
def prices(params, grid):
    """Price surfaces for 1..N_MAX contracts; index m - 1 holds m."""
    return pde.solve_A_sequence(params, grid, N_MAX)


@pytest.fixture(scope="session")
def bounds(params, grid, prices):
    return [pde.solve_Bn(params, grid, n, prices[n - 2] if n > 1 else None) for n in range(1, N_MAX + 1)]


@pytest.fixture(scope="session")
def limit_price(params, grid):
    return pde.solve_P(params, grid)


@pytest.fixture(scope="session")
def net(params, grid):
    return pde.solve_net_premium(params, grid)


@pytest.fixture(scope="session")
def density_f(params, grid):
    return pde.solve_density_f(params, grid)


@pytest.fixture(scope="session")
def density_g(params, grid):
    return pde.solve_density_g(params, grid)
