"""
Log-space / time-to-maturity grid.

Solvers work in ``y = ln(λ - λ_min)`` on ``[-M, M]`` and ``τ = s - t`` on
``[0, T]``. Node ``n`` sits at ``y_n = -M + n h`` (``n = 0..N``) and level ``j``
at ``τ_j = j k`` (``j = 0..J``). Nodes 0 and N carry boundary data; the linear
systems are posed on the ``N - 1`` interior nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_INTEGRALITY_RTOL = 1e-9


def _as_count(ratio: float, what: str) -> int:
    count = round(ratio)
    if count <= 0 or abs(ratio - count) > _INTEGRALITY_RTOL * max(1.0, abs(ratio)):
        raise ValueError(f"{what} = {ratio!r} is not a positive integer")
    return int(count)


@dataclass(frozen=True)
class LogGrid:
    """
    Uniform grid on ``[-M, M] x [0, T]``.

    ``2M/h`` and ``T/k`` must be integers up to a relative tolerance of 1e-9.
    """

    M: float = 10.0
    h: float = 0.1
    k: float = 0.01
    T: float = 10.0
    N: int = field(init=False)
    J: int = field(init=False)

    def __post_init__(self) -> None:
        for name in ("M", "h", "k", "T"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        N = _as_count(2 * self.M / self.h, "2M/h")
        J = _as_count(self.T / self.k, "T/k")
        if N < 3:
            raise ValueError(f"need at least 3 y-intervals, got N={N}")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "J", J)

    @property
    def y(self) -> np.ndarray:
        """All y-nodes including both boundaries, shape ``(N + 1,)``."""
        return -self.M + self.h * np.arange(self.N + 1)

    @property
    def y_interior(self) -> np.ndarray:
        return self.y[1:-1]

    @property
    def tau(self) -> np.ndarray:
        return self.k * np.arange(self.J + 1)

    def lambdas(self, lambda_bar: float) -> np.ndarray:
        """Hazard level at every node, boundaries included."""
        return lambda_bar + np.exp(self.y)

    def refined(self, h_factor: int = 2, k_factor: int = 4) -> "LogGrid":
        return LogGrid(M=self.M, h=self.h / h_factor, k=self.k / k_factor, T=self.T)

    def same_as(self, other: "LogGrid") -> bool:
        return (self.N, self.J) == (other.N, other.J) and all(
            math.isclose(getattr(self, a), getattr(other, a), rel_tol=1e-12)
            for a in ("M", "h", "k", "T")
        )


def y_of_lambda(lam: float, lambda_bar: float) -> float:
    """Map a hazard level to ``y = ln(λ - λ_min)``; the floor itself has no image."""
    if not lam > lambda_bar:
        raise ValueError(f"lambda={lam} must exceed the floor {lambda_bar}")
    return math.log(lam - lambda_bar)


def lambda_of_y(y: float, lambda_bar: float) -> float:
    return lambda_bar + math.exp(y)


def bracket_and_weights(grid: LogGrid, lambda0: float, lambda_bar: float) -> tuple[int, float]:
    """
    Locate ``lambda0`` between two y-nodes.

    Returns ``(n, w)`` with ``y_n <= y(lambda0) <= y_{n+1}`` such that a
    surface is read as ``(1 - w) v[n] + w v[n + 1]``. ``n`` indexes the full
    node set (boundary node 0 included). At ``y = M`` the pair ``(N - 1, 1.0)``
    is returned.
    """
    lo = lambda_bar + math.exp(-grid.M)
    hi = lambda_bar + math.exp(grid.M)
    # tiny slack so that round-tripped boundary nodes stay inside
    slack = 1e-12
    if not (lo * (1 - slack) <= lambda0 <= hi * (1 + slack)):
        raise ValueError(
            f"lambda0={lambda0} outside the grid range [{lo:.6g}, {hi:.6g}]"
        )
    y = y_of_lambda(lambda0, lambda_bar)
    pos = (y + grid.M) / grid.h
    pos = min(max(pos, 0.0), float(grid.N))
    n = min(int(math.floor(pos)), grid.N - 1)
    w = pos - n
    # snap round-off so that on-node queries report w == 0 exactly
    if abs(w - round(w)) < 1e-9:
        w = float(round(w))
        if w == 1.0 and n < grid.N - 1:
            n, w = n + 1, 0.0
    return n, w


def nearest_node(grid: LogGrid, lambda0: float, lambda_bar: float) -> int:
    """Index of the y-node closest to ``lambda0`` (ties go to the upper node)."""
    n, w = bracket_and_weights(grid, lambda0, lambda_bar)
    return n + 1 if w >= 0.5 else n


def evaluation_hazard(grid: LogGrid, lambda0: float, lambda_bar: float, method: str = "linear") -> float:
    """
    Hazard level a read-out at ``lambda0`` actually represents: ``lambda0``
    itself for ``"linear"``, the hazard at the chosen node for ``"nearest"``.
    """
    if method not in ("linear", "nearest"):
        raise ValueError(f"unknown evaluation method {method!r}")
    if lambda0 == lambda_bar:
        return lambda0
    if method == "linear":
        bracket_and_weights(grid, lambda0, lambda_bar)  # range check
        return lambda0
    return lambda_of_y(float(grid.y[nearest_node(grid, lambda0, lambda_bar)]), lambda_bar)


def evaluate_column(
    column: np.ndarray,
    grid: LogGrid,
    lambda0: float,
    lambda_bar: float,
    method: str = "linear",
) -> np.ndarray | float:
    """
    Read a full-node column (or a stack of them) at ``lambda0``.

    ``column`` has the node axis first, shape ``(N + 1, ...)``. A query at the
    floor ``lambda0 == lambda_bar`` returns the boundary row 0, which holds the
    floor solution. ``method`` is ``"linear"`` (linear in y) or ``"nearest"``.
    """
    column = np.asarray(column)
    if column.shape[0] != grid.N + 1:
        raise ValueError(f"column has {column.shape[0]} nodes, grid has {grid.N + 1}")
    if lambda0 == lambda_bar:
        return column[0]
    if method == "linear":
        n, w = bracket_and_weights(grid, lambda0, lambda_bar)
        if w == 0.0:
            return column[n]
        return (1.0 - w) * column[n] + w * column[n + 1]
    if method == "nearest":
        return column[nearest_node(grid, lambda0, lambda_bar)]
    raise ValueError(f"unknown evaluation method {method!r}")
