"""
Finite-difference solvers on the log-hazard grid.

Every solver marches in time-to-maturity ``τ`` with an implicit step on the
``N - 1`` interior nodes, so each level is a tridiagonal solve with constant
off-diagonals ``a`` (sub) and ``c`` (super) and a diagonal

    1 + σ² k / h² + k · rate_n.

The interest rate is zero inside the grid; deterministic discounting is applied
later by integrating a density surface against a curve (see :mod:`.pricing`).

Surfaces
--------
``f``  density of the time of death under the shifted measure
``g``  the same with the loaded hazard ``λ + α√λ`` as killing rate and payoff
``A``  the risk-adjusted price of ``n`` contracts (nonlinear, semi-implicit)
``B``  linear upper bound for ``A``
``P``  limiting per-contract price (``P`` with ``α = 0`` is the net premium)
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import integrate

from .discount import DiscountCurve
from .grid import LogGrid, evaluate_column
from .hazard import HazardParams, deterministic_hazard
from .tridiag import relative_residual, thomas_pivots, thomas_solve_factored


class SurfaceKind(enum.Enum):
    DENSITY_F = "density_f"
    DENSITY_G = "density_g"
    PRICE_A = "price_a"
    BOUND_B = "bound_b"
    BOUND_P = "bound_p"
    MORTALITY_CHARGE = "mortality_charge"


class GridMismatchError(ValueError):
    """A prerequisite surface was solved on a different grid."""


@dataclass(frozen=True, eq=False)
class Surface:
    """
    Solution on the grid.

    ``values[i, j]`` is the value at interior node ``n = i + 1`` and level
    ``j``. ``lower`` and ``upper`` hold the boundary columns at ``y = -M``
    (the floor solution) and ``y = M``. ``n`` is the number of contracts for
    ``PRICE_A`` and ``BOUND_B`` and 1 otherwise.
    """

    kind: SurfaceKind
    values: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    grid: LogGrid
    params: HazardParams
    n: int = 1
    max_residual: float = 0.0

    def __post_init__(self) -> None:
        shape = (self.grid.N - 1, self.grid.J + 1)
        if self.values.shape != shape:
            raise ValueError(f"values shape {self.values.shape}, expected {shape}")
        for name in ("lower", "upper"):
            if getattr(self, name).shape != (self.grid.J + 1,):
                raise ValueError(f"{name} must have J + 1 entries")
        for arr in (self.values, self.lower, self.upper):
            arr.setflags(write=False)

    @property
    def label(self) -> str:
        if self.kind in (SurfaceKind.PRICE_A, SurfaceKind.BOUND_B):
            return f"{self.kind.value}({self.n})"
        return self.kind.value

    def full(self) -> np.ndarray:
        """All nodes including both boundary rows, shape ``(N + 1, J + 1)``."""
        return np.vstack([self.lower, self.values, self.upper])

    def column(self, j: int) -> np.ndarray:
        """Level ``j`` over all ``N + 1`` nodes."""
        return np.concatenate([[self.lower[j]], self.values[:, j], [self.upper[j]]])

    def at(self, lambda0: float, j: int | None = None, method: str = "linear") -> float:
        """Value at hazard ``lambda0`` and level ``j`` (default: maturity ``J``)."""
        j = self.grid.J if j is None else j
        return float(evaluate_column(self.column(j), self.grid, lambda0, self.params.lambda_bar, method))

    def to_csv(self, dest: str | Path | io.TextIOBase | None = None) -> str:
        """
        Write the surface as a matrix: header ``tau`` followed by the y-nodes,
        then one row per time level over all nodes. Returns the text.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["tau"] + [f"{y:.6g}" for y in self.grid.y])
        full = self.full()
        for j, tau in enumerate(self.grid.tau):
            writer.writerow([f"{tau:.6g}"] + [f"{v:.6g}" for v in full[:, j]])
        text = buf.getvalue()
        if isinstance(dest, (str, Path)):
            Path(dest).write_text(text)
        elif dest is not None:
            dest.write(text)
        return text


@dataclass(frozen=True)
class SchemeCoefficients:
    """
    Coefficients of one implicit step.

    ``a`` multiplies the lower neighbour, ``c`` the upper neighbour and
    ``b = 1 + σ² k / h²`` is the diagonal before the killing term. ``G`` is the
    gradient weight of the nonlinear term (zero for the linear solvers).
    """

    a: float
    b: float
    c: float
    G: float
    drift_used: float


def gradient_weight(params: HazardParams, grid: LogGrid, variant: str = "derived") -> float:
    """
    Weight of the squared central difference in the nonlinear term.

    ``"derived"`` gives ``σ² (k/2h)²``, the exact image of the hazard-space
    gradient term in log coordinates. ``"half"`` gives half of that.
    """
    base = params.sigma ** 2 * (grid.k / (2 * grid.h)) ** 2
    if variant == "derived":
        return base
    if variant == "half":
        return 0.5 * base
    raise ValueError(f"unknown gradient weight variant {variant!r}")


def scheme_coefficients(
    params: HazardParams, grid: LogGrid, drift: float, G: float = 0.0
) -> SchemeCoefficients:
    k, h, s2 = grid.k, grid.h, params.sigma ** 2
    return SchemeCoefficients(
        a=drift * k / (2 * h) - 0.5 * s2 * k / h ** 2,
        b=1.0 + s2 * k / h ** 2,
        c=-drift * k / (2 * h) - 0.5 * s2 * k / h ** 2,
        G=G,
        drift_used=drift,
    )


def loaded_rate(lam, alpha: float):
    return lam + alpha * np.sqrt(lam)


class _Stepper:
    """Factored implicit operator reused across all time levels."""

    def __init__(self, coef: SchemeCoefficients, grid: LogGrid, kill: np.ndarray):
        self.a, self.c = coef.a, coef.c
        self.diag = coef.b + grid.k * kill
        self.pivots = thomas_pivots(self.a, self.c, self.diag)
        self.max_residual = 0.0

    def solve(self, rhs: np.ndarray, lower_next: float, upper_next: float) -> np.ndarray:
        rhs = rhs.copy()
        rhs[0] -= self.a * lower_next
        rhs[-1] -= self.c * upper_next
        x = thomas_solve_factored(self.a, self.c, self.pivots, rhs)
        res = relative_residual(self.a, self.c, self.diag, x, rhs)
        if res > self.max_residual:
            self.max_residual = res
        return x


def _check_prev(prev: Surface | None, grid: LogGrid, n: int) -> None:
    if prev is None:
        if n != 1:
            raise ValueError(f"n={n} needs the price surface for n - 1 contracts")
        return
    if prev.kind is not SurfaceKind.PRICE_A or prev.n != n - 1:
        raise ValueError(f"expected the price surface for {n - 1} contracts, got {prev.label}")
    if not prev.grid.same_as(grid):
        raise GridMismatchError("prerequisite surface was solved on a different grid")


def _prev_arrays(prev: Surface | None, grid: LogGrid) -> tuple[np.ndarray, np.ndarray]:
    if prev is None:
        return np.zeros((grid.N - 1, grid.J + 1)), np.zeros(grid.J + 1)
    return np.asarray(prev.values), np.asarray(prev.lower)


def _density(params: HazardParams, grid: LogGrid, loaded: bool) -> Surface:
    alpha = params.alpha if loaded else 0.0
    lam = grid.lambdas(params.lambda_bar)
    rate = loaded_rate(lam, alpha)
    rate_floor = float(loaded_rate(params.lambda_bar, alpha))
    drift = params.mu + params.alpha * params.sigma - 0.5 * params.sigma ** 2
    step = _Stepper(scheme_coefficients(params, grid, drift), grid, rate[1:-1])

    J = grid.J
    values = np.empty((grid.N - 1, J + 1))
    values[:, 0] = rate[1:-1]
    lower = rate_floor * np.exp(-rate_floor * grid.tau)
    upper = np.zeros(J + 1)
    upper[0] = rate[-1]
    for j in range(J):
        values[:, j + 1] = step.solve(values[:, j], lower[j + 1], upper[j + 1])
    kind = SurfaceKind.DENSITY_G if loaded else SurfaceKind.DENSITY_F
    return Surface(kind, values, lower, upper, grid, params, 1, step.max_residual)


def solve_density_f(params: HazardParams, grid: LogGrid) -> Surface:
    """Density of the payment time under the shifted measure, killing rate ``λ``."""
    return _density(params, grid, loaded=False)


def solve_density_g(params: HazardParams, grid: LogGrid) -> Surface:
    """As :func:`solve_density_f` with the loaded hazard ``λ + α√λ``."""
    return _density(params, grid, loaded=True)


def _linear_price(
    params: HazardParams,
    grid: LogGrid,
    kind: SurfaceKind,
    n: int,
    rate: np.ndarray,
    rate_floor: float,
    prev: Surface | None,
) -> Surface:
    """
    Backward-Euler march of ``V_τ = L V + rate (prev + 1 - V)`` with ``V = 0``
    at ``τ = 0``, top value ``n`` and the floor ODE at the bottom.
    """
    drift = params.mu + params.alpha * params.sigma - 0.5 * params.sigma ** 2
    step = _Stepper(scheme_coefficients(params, grid, drift), grid, rate)
    k, J = grid.k, grid.J
    pv, plo = _prev_arrays(prev, grid)

    values = np.zeros((grid.N - 1, J + 1))
    lower = np.zeros(J + 1)
    upper = np.full(J + 1, float(n))
    upper[0] = 0.0
    kr = k * rate
    kr_floor = k * rate_floor
    for j in range(J):
        lower[j + 1] = (lower[j] + kr_floor * (plo[j + 1] + 1.0)) / (1.0 + kr_floor)
        rhs = values[:, j] + kr * (pv[:, j + 1] + 1.0)
        values[:, j + 1] = step.solve(rhs, lower[j + 1], upper[j + 1])
    return Surface(kind, values, lower, upper, grid, params, n, step.max_residual)


def solve_P(params: HazardParams, grid: LogGrid) -> Surface:
    """Limiting per-contract price; with ``alpha = 0`` this is the net premium."""
    lam = grid.lambdas(params.lambda_bar)[1:-1]
    return _linear_price(params, grid, SurfaceKind.BOUND_P, 1, lam, params.lambda_bar, None)


def solve_net_premium(params: HazardParams, grid: LogGrid) -> Surface:
    """Expected discounted benefit under the physical measure."""
    return solve_P(params.with_alpha(0.0), grid)


def solve_Bn(params: HazardParams, grid: LogGrid, n: int, prevA: Surface | None = None) -> Surface:
    """
    Linear upper bound for ``n`` contracts.

    ``prevA`` is the price surface for ``n - 1`` contracts (``None`` for
    ``n = 1``). The killing rate is ``nλ + α√(nλ)`` and the source carries the
    jump to ``prevA + 1``.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    _check_prev(prevA, grid, n)
    lam = grid.lambdas(params.lambda_bar)[1:-1]
    rate = loaded_rate(n * lam, params.alpha)
    rate_floor = float(loaded_rate(n * params.lambda_bar, params.alpha))
    return _linear_price(params, grid, SurfaceKind.BOUND_B, n, rate, rate_floor, prevA)


def solve_A(
    params: HazardParams,
    grid: LogGrid,
    n: int = 1,
    prev: Surface | None = None,
    gradient: str = "derived",
) -> Surface:
    """
    Risk-adjusted price of ``n`` conditionally independent contracts.

    The diffusion, drift ``μ - σ²/2`` and killing ``nλ`` are implicit; the
    source ``nλ (prev + 1)`` and the Sharpe-ratio term

        α sqrt(G (A[n+1] - A[n-1])² + k² nλ (A - prev - 1)²)

    are lagged one level. Neighbours outside the interior come from the
    boundary columns. ``gradient`` selects the weight ``G``
    (see :func:`gradient_weight`).
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    _check_prev(prev, grid, n)
    alpha = params.alpha
    lam = grid.lambdas(params.lambda_bar)[1:-1]
    nlam = n * lam
    G = gradient_weight(params, grid, gradient)
    coef = scheme_coefficients(params, grid, params.mu - 0.5 * params.sigma ** 2, G)
    step = _Stepper(coef, grid, nlam)
    k, J = grid.k, grid.J
    pv, plo = _prev_arrays(prev, grid)

    values = np.zeros((grid.N - 1, J + 1))
    lower = np.zeros(J + 1)
    upper = np.full(J + 1, float(n))
    kr_floor = k * float(loaded_rate(n * params.lambda_bar, alpha))
    knl = k * nlam
    k2nl = k * knl
    top = float(n)
    for j in range(J):
        cur = values[:, j]
        left = np.empty_like(cur)
        left[0] = lower[j]
        left[1:] = cur[:-1]
        right = np.empty_like(cur)
        right[:-1] = cur[1:]
        right[-1] = top
        jump = cur - pv[:, j] - 1.0
        sharpe = np.sqrt(G * (right - left) ** 2 + k2nl * jump * jump)
        rhs = cur + knl * (pv[:, j + 1] + 1.0) + alpha * sharpe
        lower[j + 1] = (lower[j] + kr_floor * (plo[j + 1] + 1.0)) / (1.0 + kr_floor)
        values[:, j + 1] = step.solve(rhs, lower[j + 1], top)
    upper[0] = 0.0
    return Surface(SurfaceKind.PRICE_A, values, lower, upper, grid, params, n, step.max_residual)


def solve_A_sequence(
    params: HazardParams, grid: LogGrid, n_max: int, gradient: str = "derived"
) -> list[Surface]:
    """Price surfaces for ``1..n_max`` contracts (index ``m - 1`` holds ``m``)."""
    out: list[Surface] = []
    prev = None
    for m in range(1, n_max + 1):
        prev = solve_A(params, grid, m, prev, gradient)
        out.append(prev)
    return out


def solve_mortality_charge(params: HazardParams, grid: LogGrid) -> Surface:
    """
    Stochastic mortality charge ``P - A^{α=0}`` as a surface of its own.

    Subtracting two prices that both approach 1 near the top of the grid loses
    all significant digits. Instead the charge is marched directly: it obeys
    the shifted-drift operator with zero boundary data, driven by the
    difference of the two drifts acting on the survival probability
    ``1 - A^{α=0}``, which is computed alongside. Every term added is
    nonnegative, so positivity survives rounding.
    """
    s2 = params.sigma ** 2
    lam = grid.lambdas(params.lambda_bar)[1:-1]
    k, h, J = grid.k, grid.h, grid.J
    phys = _Stepper(scheme_coefficients(params, grid, params.mu - 0.5 * s2), grid, lam)
    shifted_drift = params.mu + params.alpha * params.sigma - 0.5 * s2
    shift = _Stepper(scheme_coefficients(params, grid, shifted_drift), grid, lam)
    gain = params.alpha * params.sigma * k / (2 * h)

    survival = np.ones(grid.N - 1)
    surv_floor = 1.0
    values = np.zeros((grid.N - 1, J + 1))
    for j in range(J):
        surv_floor /= 1.0 + k * params.lambda_bar
        survival = phys.solve(survival, surv_floor, 0.0)
        up = np.empty_like(survival)
        up[:-1] = survival[1:]
        up[-1] = 0.0
        down = np.empty_like(survival)
        down[0] = surv_floor
        down[1:] = survival[:-1]
        values[:, j + 1] = shift.solve(values[:, j] + gain * (down - up), 0.0, 0.0)
    zeros = np.zeros(J + 1)
    res = max(phys.max_residual, shift.max_residual)
    return Surface(SurfaceKind.MORTALITY_CHARGE, values, zeros, zeros.copy(), grid, params, 1, res)


def closed_form_deterministic(
    params: HazardParams,
    lambda0: float,
    t: float,
    T: float,
    discount: DiscountCurve | None = None,
) -> float:
    """
    Price when the hazard is deterministic (``sigma == 0``).

    Integrates ``F(t;s) ρ(s) exp(-∫_t^s ρ)`` over ``[t, T]`` with
    ``ρ = λ + α√λ`` along the deterministic hazard path. Adaptive quadrature
    is used throughout; with a flat curve only the cumulative rate is needed.
    """
    if not params.deterministic:
        raise ValueError("closed_form_deterministic requires sigma == 0")
    if T < t:
        raise ValueError(f"maturity T={T} precedes valuation time t={t}")
    if lambda0 < params.lambda_bar:
        raise ValueError(f"lambda0={lambda0} is below the floor {params.lambda_bar}")
    alpha, mu, lb = params.alpha, params.mu, params.lambda_bar
    excess = lambda0 - lb

    def hazard(u: float) -> float:
        return deterministic_hazard(params, lambda0, u - t)

    def cum_rate(s: float) -> float:
        d = s - t
        lam_part = lb * d + excess * (math.expm1(mu * d) / mu if mu != 0 else d)
        if alpha == 0.0 or d == 0.0:
            return lam_part
        sq, _ = integrate.quad(lambda u: math.sqrt(hazard(u)), t, s, epsabs=1e-14, epsrel=1e-12)
        return lam_part + alpha * sq

    if discount is None or discount.is_flat:
        return -math.expm1(-cum_rate(T))

    def integrand(s: float) -> float:
        lam = hazard(s)
        return float(discount.forward(t, s)) * (lam + alpha * math.sqrt(lam)) * math.exp(-cum_rate(s))

    breaks = [x for x in discount.times if t < x < T]
    val, _ = integrate.quad(integrand, t, T, points=breaks or None, epsabs=1e-12, epsrel=1e-10, limit=200)
    return val
