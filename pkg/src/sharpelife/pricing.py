"""
Prices from density surfaces, price tables and the risk-charge split.

A per-contract price splits into

    net premium  +  mortality charge (P - net)  +  finite-portfolio charge (A/n - P)

where the mortality charge is the systematic part that does not diversify and
the finite-portfolio charge vanishes as the portfolio grows.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .discount import DiscountCurve
from .grid import LogGrid, evaluate_column
from .hazard import HazardParams
from .pde import (
    Surface,
    SurfaceKind,
    solve_A_sequence,
    solve_Bn,
    solve_density_f,
    solve_density_g,
)

TABLE_COLUMNS = (
    "lambda0",
    "net_premium",
    "P",
    "A_per_contract",
    "B_per_contract",
    "finite_charge",
    "mortality_charge",
)

#: Parameters of the published benchmark table (flat discount curve, T = 10).
BENCHMARK_PARAMS = HazardParams(mu=0.04, sigma=0.10, lambda_bar=0.02, alpha=0.10)
BENCHMARK_GRID = LogGrid(M=10.0, h=0.1, k=0.01, T=10.0)

#: Published values: lambda0 -> (net premium, P, A, B), four decimals.
BENCHMARK_TABLE = {
    0.020: (0.1813, 0.1817, 0.2896, 0.2897),
    0.021: (0.1914, 0.1919, 0.3010, 0.3017),
    0.022: (0.2014, 0.2025, 0.3126, 0.3139),
    0.023: (0.2112, 0.2128, 0.3237, 0.3256),
    0.024: (0.2214, 0.2235, 0.3352, 0.3377),
    0.025: (0.2300, 0.2326, 0.3449, 0.3477),
    0.030: (0.2763, 0.2812, 0.3953, 0.4004),
    0.035: (0.3187, 0.3256, 0.4397, 0.4466),
    0.040: (0.3609, 0.3696, 0.4826, 0.4909),
    0.050: (0.4338, 0.4451, 0.5536, 0.5639),
    0.060: (0.5017, 0.5150, 0.6169, 0.6285),
    0.070: (0.5530, 0.5675, 0.6630, 0.6753),
}


def quadrature_weights(grid: LogGrid, rule: str = "trapezoid") -> np.ndarray:
    """
    Weights over the ``J + 1`` time levels.

    ``"trapezoid"`` is ``k * (1/2, 1, ..., 1, 1/2)``. ``"right"`` is
    ``k * (0, 1, ..., 1)``, the sum that a backward-Euler march of the
    corresponding price equation reproduces exactly.
    """
    w = np.full(grid.J + 1, grid.k)
    if rule == "trapezoid":
        w[0] *= 0.5
        w[-1] *= 0.5
    elif rule == "right":
        w[0] = 0.0
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    return w


def _check_density(surface: Surface) -> None:
    if surface.kind not in (SurfaceKind.DENSITY_F, SurfaceKind.DENSITY_G):
        raise ValueError(f"expected a density surface, got {surface.label}")


def integrate_surface(
    surface: Surface,
    discount: DiscountCurve | None = None,
    rule: str = "trapezoid",
) -> np.ndarray:
    """
    Integrate a density over time at every node (boundary rows included).

    Time level ``j`` corresponds to payment time ``s = τ_j`` for a valuation
    at time 0, so the discount factor at level ``j`` is ``F(0, jk)``.
    """
    _check_density(surface)
    w = quadrature_weights(surface.grid, rule)
    if discount is not None and not discount.is_flat:
        w = w * discount(surface.grid.tau)
    return surface.full() @ w


def integrate_price(
    surface: Surface,
    discount: DiscountCurve | None,
    grid: LogGrid,
    lambda0: float,
    rule: str = "trapezoid",
    method: str = "linear",
) -> float:
    """
    Discounted price at hazard ``lambda0`` from a density surface.

    ``method`` selects how an off-node ``lambda0`` is read (``"linear"`` in
    y or ``"nearest"`` node); see :func:`sharpelife.grid.evaluate_column`.
    """
    _check_density(surface)
    if not surface.grid.same_as(grid):
        raise ValueError("surface was solved on a different grid")
    column = integrate_surface(surface, discount, rule)
    return float(evaluate_column(column, grid, lambda0, surface.params.lambda_bar, method))


@dataclass(frozen=True)
class PriceRow:
    lambda0: float
    net_premium: float
    P: float
    A_per_contract: float
    B_per_contract: float
    finite_charge: float
    mortality_charge: float

    def values(self) -> tuple[float, ...]:
        return tuple(getattr(self, c) for c in TABLE_COLUMNS)


@dataclass(frozen=True)
class PriceTable:
    rows: tuple[PriceRow, ...]
    params: HazardParams
    grid: LogGrid
    n: int
    method: str = "linear"
    gradient: str = "derived"
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        if name not in TABLE_COLUMNS:
            raise KeyError(name)
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self, dest: str | Path | io.TextIOBase | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        for row in self.rows:
            writer.writerow([f"{v:.6g}" for v in row.values()])
        return _emit(buf.getvalue(), dest)

    def to_json(self, dest: str | Path | io.TextIOBase | None = None) -> str:
        doc = {
            "params": asdict(self.params),
            "grid": {"M": self.grid.M, "h": self.grid.h, "k": self.grid.k, "T": self.grid.T},
            "n": self.n,
            "method": self.method,
            "gradient": self.gradient,
            **self.metadata,
            "columns": list(TABLE_COLUMNS),
            "rows": [[_sig6(v) for v in r.values()] for r in self.rows],
        }
        return _emit(json.dumps(doc, indent=2, allow_nan=True) + "\n", dest)


def _sig6(v: float) -> float | None:
    return None if math.isnan(v) else float(f"{v:.6g}")


def _emit(text: str, dest) -> str:
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    elif dest is not None:
        dest.write(text)
    return text


@dataclass(frozen=True)
class TableSurfaces:
    """Every surface behind a price table, kept for inspection and tests."""

    density_f: Surface
    density_net: Surface
    density_g: Surface
    prices: tuple[Surface, ...]
    bound: Surface


def solve_table_surfaces(
    params: HazardParams, grid: LogGrid, n: int, gradient: str = "derived"
) -> TableSurfaces:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    prices = solve_A_sequence(params, grid, n, gradient)
    return TableSurfaces(
        density_f=solve_density_f(params, grid),
        density_net=solve_density_f(params.with_alpha(0.0), grid),
        density_g=solve_density_g(params, grid),
        prices=tuple(prices),
        bound=solve_Bn(params, grid, n, prices[-2] if n > 1 else None),
    )


def build_table(
    params: HazardParams,
    grid: LogGrid,
    lambda0_list,
    n: int = 1,
    discount: DiscountCurve | None = None,
    method: str = "linear",
    gradient: str = "derived",
    surfaces: TableSurfaces | None = None,
) -> PriceTable:
    """
    Assemble per-contract prices at each ``lambda0``.

    Net premium, ``P`` and (for ``n = 1``) ``B`` come from integrating density
    surfaces against ``discount``. ``A`` and ``B`` for ``n > 1`` are read from
    grid solutions that assume zero interest; under a non-flat curve they are
    reported as NaN with a warning.
    """
    discount = discount or DiscountCurve.flat()
    surfaces = surfaces or solve_table_surfaces(params, grid, n, gradient)
    lb = params.lambda_bar
    flat = discount.is_flat
    if not flat:
        warnings.warn(
            "nonlinear prices are solved with zero interest; A and B(n>1) are "
            "reported as NaN under a non-flat discount curve",
            stacklevel=2,
        )
    P_col = integrate_surface(surfaces.density_f, discount)
    net_col = integrate_surface(surfaces.density_net, discount)
    B1_col = integrate_surface(surfaces.density_g, discount)
    A_full = surfaces.prices[-1].full()[:, -1] / n
    B_full = surfaces.bound.full()[:, -1] / n

    def read(col: np.ndarray, lam0: float) -> float:
        return float(evaluate_column(col, grid, lam0, lb, method))

    rows = []
    for lam0 in lambda0_list:
        lam0 = float(lam0)
        P = read(P_col, lam0)
        net = read(net_col, lam0)
        if flat:
            A = read(A_full, lam0)
            B = read(B1_col, lam0) if n == 1 else read(B_full, lam0)
        else:
            A = math.nan
            B = read(B1_col, lam0) if n == 1 else math.nan
        rows.append(PriceRow(lam0, net, P, A, B, A - P, P - net))
    return PriceTable(tuple(rows), params, grid, n, method, gradient)
