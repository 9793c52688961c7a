"""
Hazard-rate model: a geometric diffusion floored at a minimum hazard.

The hazard obeys

    dλ = μ (λ - λ_min) dt + σ (λ - λ_min) dW

with constant μ and σ, so that ``λ_t - λ_min`` is lognormal and the floor
``λ_min`` is absorbing. Under the pricing measure used for the limiting price
the drift coefficient becomes ``μ + α σ``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import ArrayLike


@dataclass(frozen=True)
class HazardParams:
    """
    Hazard diffusion and pricing parameters.

    Attributes
    ----------
    mu : float
        Drift coefficient of ``λ - λ_min`` (per year).
    sigma : float
        Volatility of ``λ - λ_min`` (per sqrt-year). Exactly 0 selects the
        deterministic hazard.
    lambda_bar : float
        Hazard floor ``λ_min`` (per year), strictly positive.
    alpha : float
        Instantaneous Sharpe ratio, ``0 <= alpha <= sqrt(lambda_bar)``.
    """

    mu: float
    sigma: float
    lambda_bar: float
    alpha: float

    def __post_init__(self) -> None:
        for name in ("mu", "sigma", "lambda_bar", "alpha"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        if self.lambda_bar <= 0:
            raise ValueError(f"lambda_bar must be positive, got {self.lambda_bar}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if self.alpha > math.sqrt(self.lambda_bar):
            raise ValueError(
                f"alpha={self.alpha} exceeds sqrt(lambda_bar)={math.sqrt(self.lambda_bar):.6g}"
            )
        if self.mu < 0:
            warnings.warn(
                f"negative hazard drift mu={self.mu}; the floor is still absorbing "
                "but the hazard drifts towards it",
                stacklevel=3,
            )

    @property
    def deterministic(self) -> bool:
        return self.sigma == 0.0

    @property
    def negative_drift(self) -> bool:
        """True when ``mu < 0`` (accepted, but flagged)."""
        return self.mu < 0

    def with_alpha(self, alpha: float) -> "HazardParams":
        return replace(self, alpha=alpha)

    def with_mu(self, mu: float) -> "HazardParams":
        return replace(self, mu=mu)

    def with_sigma(self, sigma: float) -> "HazardParams":
        return replace(self, sigma=sigma)


@dataclass(frozen=True)
class HazardState:
    """Initial hazard ``lambda0`` observed at valuation time ``t``."""

    lambda0: float
    t: float = 0.0

    def validate(self, params: HazardParams, horizon: float | None = None) -> None:
        if self.lambda0 < params.lambda_bar:
            raise ValueError(
                f"lambda0={self.lambda0} is below the floor {params.lambda_bar}"
            )
        if self.t < 0 or (horizon is not None and self.t > horizon):
            raise ValueError(f"valuation time t={self.t} outside [0, {horizon}]")


def shifted_drift(params: HazardParams) -> float:
    """Drift coefficient of the hazard under the pricing measure, ``μ + α σ``."""
    return params.mu + params.alpha * params.sigma


def exact_step(
    params: HazardParams,
    lam: ArrayLike,
    dt: float,
    z: ArrayLike,
    drift: float,
) -> np.ndarray | float:
    """
    Advance the hazard by one exact lognormal transition.

    ``lam_bar + (lam - lam_bar) * exp((drift - σ²/2) dt + σ sqrt(dt) z)``.
    Works elementwise on arrays of paths; paths sitting on the floor stay there.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    sigma = params.sigma
    growth = np.exp((drift - 0.5 * sigma * sigma) * dt + sigma * math.sqrt(dt) * np.asarray(z))
    excess = np.asarray(lam, dtype=float) - params.lambda_bar
    out = params.lambda_bar + excess * growth
    if np.ndim(out) == 0:
        return float(out)
    return out


def deterministic_hazard(params: HazardParams, lambda0: float, t: ArrayLike) -> np.ndarray | float:
    """Hazard path for ``sigma == 0``: ``λ_min + (λ0 - λ_min) e^{μ t}``."""
    if not params.deterministic:
        raise ValueError("deterministic_hazard requires sigma == 0")
    out = params.lambda_bar + (lambda0 - params.lambda_bar) * np.exp(params.mu * np.asarray(t, dtype=float))
    if np.ndim(out) == 0:
        return float(out)
    return out
