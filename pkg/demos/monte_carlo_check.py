"""
Cross-check the grid solutions against simulation. Hazard paths use exact
lognormal transitions, so the estimates carry only sampling error and a
small trapezoid error in the path integrals.

The grid carries its own discretisation error of a few 1e-4, which grows
with the hazard level. At larger hazards a tight Monte Carlo stderr starts to
resolve it, so the z-score against the benchmark grid drifts while the
refined grid (h/2, k/4) stays in line.
"""

from sharpelife import pde
from sharpelife.grid import LogGrid
from sharpelife.mc import McConfig, estimate_all
from sharpelife.pricing import BENCHMARK_GRID as grid
from sharpelife.pricing import BENCHMARK_PARAMS as params

cfg = McConfig(paths=50_000, steps_per_year=50, seed=7)
fine = LogGrid(M=grid.M, h=grid.h / 2, k=grid.k / 4, T=grid.T)


def surfaces(g):
    return {
        "net_premium": pde.solve_net_premium(params, g),
        "P": pde.solve_P(params, g),
        "B": pde.solve_Bn(params, g, 1),
    }


coarse_s, fine_s = surfaces(grid), surfaces(fine)

print(f"{'quantity':>12} {'lambda0':>8} {'grid':>9} {'fine':>9} {'simulated':>9} {'stderr':>8} {'z':>6} {'z fine':>6}")
for lam0 in (0.02, 0.04, 0.07, 0.15):
    est = estimate_all(params, lam0, grid.T, None, cfg)
    for name in coarse_s:
        v, vf, e = coarse_s[name].at(lam0), fine_s[name].at(lam0), est[name]
        z, zf = (e.z_score(v), e.z_score(vf)) if e.stderr > 0 else (0.0, 0.0)
        print(f"{name:>12} {lam0:8.3f} {v:9.5f} {vf:9.5f} {e.mean:9.5f} {e.stderr:8.1e} {z:6.2f} {zf:6.2f}")
