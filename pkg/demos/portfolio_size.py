"""
How the per-contract price falls as the insurer writes more identical
policies. A^(n)/n decreases towards the limiting price P, staying below the
bound B^(n)/n whose distance to P is at most 1/n + 2/sqrt(n).
"""

import math

from sharpelife import pde
from sharpelife.pricing import BENCHMARK_GRID as grid
from sharpelife.pricing import BENCHMARK_PARAMS as params

lam0 = 0.04
P = pde.solve_P(params, grid).at(lam0)
print(f"limiting price P({lam0}) = {P:.5f}\n")
print(f"{'n':>4} {'A/n':>9} {'B/n':>9} {'A/n - P':>9} {'bound':>9}")

prev = None
for n in range(1, 31):
    A = pde.solve_A(params, grid, n, prev)
    if n in (1, 2, 3, 5, 10, 20, 30):
        B = pde.solve_Bn(params, grid, n, prev)
        a, b = A.at(lam0) / n, B.at(lam0) / n
        print(f"{n:4d} {a:9.5f} {b:9.5f} {a - P:9.5f} {1 / n + 2 / math.sqrt(n):9.5f}")
    prev = A
