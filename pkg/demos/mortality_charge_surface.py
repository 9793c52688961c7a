"""
The systematic mortality charge P - A(alpha=0) over hazard level and time to
maturity. It is marched as a surface of its own, so it stays strictly
positive even where both prices round to 1. Without hazard volatility it
vanishes.
"""

import numpy as np

from sharpelife import pde
from sharpelife.pricing import BENCHMARK_GRID as grid
from sharpelife.pricing import BENCHMARK_PARAMS as params

charge = pde.solve_mortality_charge(params, grid)
still = pde.solve_mortality_charge(params.with_sigma(0.0), grid)

levels = [int(round(t / grid.k)) for t in (1, 2.5, 5, 10)]
print(f"{'lambda':>9}" + "".join(f"{'tau=' + format(grid.tau[j], 'g'):>11}" for j in levels))
for lam0 in (0.02, 0.03, 0.05, 0.1, 0.3, 1.0, 5.0):
    print(f"{lam0:9.3f}" + "".join(f"{charge.at(lam0, j):11.2e}" for j in levels))

print(f"\nsmallest value after the first step: {charge.values[:, 1:].min():.1e}")
print(f"largest value without volatility:    {np.abs(still.full()).max():.1e}")
