"""
Discounting with a zero-coupon curve. The payment-time densities do not
depend on interest, so one density surface serves every curve: the price is
the density integrated against the bond prices.
"""

from sharpelife import pde
from sharpelife.discount import DiscountCurve
from sharpelife.pricing import BENCHMARK_GRID as grid
from sharpelife.pricing import BENCHMARK_PARAMS as params
from sharpelife.pricing import integrate_price

density = pde.solve_density_f(params, grid)
curves = {
    "no interest": DiscountCurve.flat(),
    "2% flat": DiscountCurve.from_knots([0, 5, 10], [1.0, 0.9048, 0.8187]),
    "steep": DiscountCurve.from_knots([0, 2, 5, 10], [1.0, 0.98, 0.88, 0.65]),
}

print(f"{'lambda0':>8}" + "".join(f"{name:>13}" for name in curves))
for lam0 in (0.02, 0.04, 0.07, 0.12):
    print(f"{lam0:8.3f}" + "".join(f"{integrate_price(density, c, grid, lam0):13.5f}" for c in curves.values()))
