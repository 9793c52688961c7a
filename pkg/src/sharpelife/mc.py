"""
Monte Carlo estimates of the linear prices, used to cross-check the grid solvers.

Hazard paths are sampled with exact lognormal transitions, so the only
discretisation is the trapezoid rule for the path integrals of the hazard.
Paths are simulated in batches whose random streams are spawned from the
seed by batch index; results do not depend on the order batches are run in.

For each path the benefit value is either

* ``"density"``: ``∫_0^T F(0,s) ρ_s exp(-∫_0^s ρ) ds`` by trapezoid, or
* ``"survival"``: ``1 - exp(-∫_0^T ρ)``, valid for a flat curve only,

with ``ρ = λ`` (prices ``P`` and net premium) or ``ρ = λ + α√λ`` (bound ``B``).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import Executor
from dataclasses import dataclass

import numpy as np

from .discount import DiscountCurve
from .hazard import HazardParams, exact_step, shifted_drift

MIN_VALIDATION_PATHS = 1000


class Measure(enum.Enum):
    PHYSICAL = "physical"
    SHIFTED = "shifted"


@dataclass(frozen=True)
class McConfig:
    """
    Simulation settings. ``measure`` is optional: when set, each estimator
    checks that it matches the measure it samples under.
    """

    paths: int = 200_000
    steps_per_year: int = 100
    seed: int = 0
    measure: Measure | None = None
    batch_size: int = 20_000

    def __post_init__(self) -> None:
        if self.paths < 1:
            raise ValueError(f"paths must be positive, got {self.paths}")
        if self.steps_per_year < 1:
            raise ValueError(f"steps_per_year must be positive, got {self.steps_per_year}")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")

    def check_validation_size(self) -> None:
        if self.paths < MIN_VALIDATION_PATHS:
            raise ValueError(f"validation runs need at least {MIN_VALIDATION_PATHS} paths, got {self.paths}")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    paths: int

    def z_score(self, value: float) -> float:
        """``(value - mean) / stderr``; infinite when stderr is 0 and they differ."""
        diff = value - self.mean
        if self.stderr > 0:
            return diff / self.stderr
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)

    def as_csv(self) -> str:
        return f"{self.mean:.6g},{self.stderr:.6g},{self.paths}"


def _time_nodes(T: float, steps_per_year: int) -> np.ndarray:
    steps = max(1, math.ceil(T * steps_per_year - 1e-9))
    return np.linspace(0.0, T, steps + 1)


def _check_measure(cfg: McConfig, expected: Measure) -> None:
    if cfg.measure is not None and cfg.measure is not expected:
        raise ValueError(f"this estimator samples under the {expected.value} measure, config says {cfg.measure.value}")


def _resolve_estimator(estimator: str | None, discount: DiscountCurve) -> str:
    if estimator is None:
        return "survival" if discount.is_flat else "density"
    if estimator not in ("survival", "density"):
        raise ValueError(f"unknown estimator {estimator!r}")
    if estimator == "survival" and not discount.is_flat:
        raise ValueError("the survival estimator needs a flat discount curve")
    return estimator


def _run_batches(run, cfg: McConfig, executor: Executor | None) -> list[np.ndarray]:
    """
    Run ``run(size, rng)`` for every batch. Batch ``b`` always gets the
    ``b``-th stream spawned from the seed, and results are kept in batch
    order, so any executor gives the same output.
    """
    n_batches = math.ceil(cfg.paths / cfg.batch_size)
    streams = np.random.SeedSequence(cfg.seed).spawn(n_batches)
    sizes = [min(cfg.batch_size, cfg.paths - b * cfg.batch_size) for b in range(n_batches)]
    rngs = [np.random.default_rng(ss) for ss in streams]
    if executor is None:
        return [run(m, rng) for m, rng in zip(sizes, rngs)]
    return list(executor.map(run, sizes, rngs))


def simulate_benefits(
    params: HazardParams,
    lambda0: float,
    T: float,
    drift: float,
    loadings: tuple[float, ...],
    cfg: McConfig,
    discount: DiscountCurve | None = None,
    estimator: str | None = None,
    executor: Executor | None = None,
) -> np.ndarray:
    """
    Per-path benefit values for several hazard loadings on the same paths.

    Returns an array of shape ``(len(loadings), paths)``; row ``i`` uses the
    rate ``λ + loadings[i] √λ``. Paths that cannot vary (zero volatility or a
    start on the absorbing floor) are simulated once and broadcast.
    """
    if lambda0 < params.lambda_bar:
        raise ValueError(f"lambda0={lambda0} is below the floor {params.lambda_bar}")
    if not (T > 0):
        raise ValueError(f"T must be positive, got {T}")
    discount = discount or DiscountCurve.flat()
    estimator = _resolve_estimator(estimator, discount)
    s = _time_nodes(T, cfg.steps_per_year)
    dt = s[1] - s[0]
    disc = discount(s)
    loads = np.asarray(loadings, dtype=float)[:, None]

    def run(m: int, rng: np.random.Generator | None) -> np.ndarray:
        lam = np.full(m, float(lambda0))
        rate = lam + loads * np.sqrt(lam)
        cum = np.zeros_like(rate)
        dens_prev = rate * disc[0]
        acc = np.zeros_like(rate)
        for i in range(1, s.size):
            z = rng.standard_normal(m) if rng is not None else np.zeros(m)
            lam = exact_step(params, lam, dt, z, drift)
            new_rate = lam + loads * np.sqrt(lam)
            cum += 0.5 * dt * (rate + new_rate)
            rate = new_rate
            if estimator == "density":
                dens = rate * np.exp(-cum) * disc[i]
                acc += 0.5 * dt * (dens_prev + dens)
                dens_prev = dens
        return acc if estimator == "density" else -np.expm1(-cum)

    if params.sigma == 0.0 or lambda0 == params.lambda_bar:
        one = run(1, None)
        return np.repeat(one, cfg.paths, axis=1)

    return np.concatenate(_run_batches(run, cfg, executor), axis=1)


def _summarise(values: np.ndarray) -> McEstimate:
    n = values.size
    if np.ptp(values) == 0.0:
        # identical paths; avoid a roundoff-sized stderr from the summation
        return McEstimate(float(values[0]), 0.0, n)
    sd = float(np.std(values, ddof=1))
    return McEstimate(float(np.mean(values)), sd / math.sqrt(n), n)


def estimate_P(
    params: HazardParams,
    lambda0: float,
    T: float,
    discount: DiscountCurve | None,
    cfg: McConfig,
    estimator: str | None = None,
) -> McEstimate:
    """Limiting price: hazard with drift ``μ + ασ``, rate ``λ``."""
    _check_measure(cfg, Measure.SHIFTED)
    vals = simulate_benefits(params, lambda0, T, shifted_drift(params), (0.0,), cfg, discount, estimator)
    return _summarise(vals[0])


def estimate_B(
    params: HazardParams,
    lambda0: float,
    T: float,
    discount: DiscountCurve | None,
    cfg: McConfig,
    estimator: str | None = None,
) -> McEstimate:
    """Upper bound for one contract: drift ``μ + ασ``, rate ``λ + α√λ``."""
    _check_measure(cfg, Measure.SHIFTED)
    vals = simulate_benefits(
        params, lambda0, T, shifted_drift(params), (params.alpha,), cfg, discount, estimator
    )
    return _summarise(vals[0])


def estimate_net(
    params: HazardParams,
    lambda0: float,
    T: float,
    discount: DiscountCurve | None,
    cfg: McConfig,
    estimator: str | None = None,
) -> McEstimate:
    """Net premium: physical drift ``μ``, rate ``λ``; ``alpha`` plays no role."""
    _check_measure(cfg, Measure.PHYSICAL)
    vals = simulate_benefits(params, lambda0, T, params.mu, (0.0,), cfg, discount, estimator)
    return _summarise(vals[0])


def estimate_all(
    params: HazardParams,
    lambda0: float,
    T: float,
    discount: DiscountCurve | None,
    cfg: McConfig,
    estimator: str | None = None,
) -> dict[str, McEstimate]:
    """
    Net premium, ``P`` and ``B`` from one seed.

    ``P`` and ``B`` share their paths; the net premium reuses the same normal
    draws under the physical drift. Each entry equals what the single-quantity
    estimator returns for the same config.
    """
    shifted = simulate_benefits(
        params, lambda0, T, shifted_drift(params), (0.0, params.alpha), cfg, discount, estimator
    )
    physical = simulate_benefits(params, lambda0, T, params.mu, (0.0,), cfg, discount, estimator)
    return {
        "net_premium": _summarise(physical[0]),
        "P": _summarise(shifted[0]),
        "B": _summarise(shifted[1]),
    }


def estimate_density(
    params: HazardParams,
    lambda0: float,
    s: float,
    cfg: McConfig,
    loaded: bool = False,
    executor: Executor | None = None,
) -> McEstimate:
    """
    Payment-time density at ``s`` under the shifted measure,
    ``E[ρ_s exp(-∫_0^s ρ)]`` with ``ρ = λ`` (or ``λ + α√λ`` when ``loaded``).
    """
    if lambda0 < params.lambda_bar:
        raise ValueError(f"lambda0={lambda0} is below the floor {params.lambda_bar}")
    if not (s > 0):
        raise ValueError(f"s must be positive, got {s}")
    alpha = params.alpha if loaded else 0.0
    nodes = _time_nodes(s, cfg.steps_per_year)
    dt = nodes[1] - nodes[0]
    drift = shifted_drift(params)

    def run(m: int, rng: np.random.Generator | None) -> np.ndarray:
        lam = np.full(m, float(lambda0))
        rate = lam + alpha * np.sqrt(lam)
        cum = np.zeros(m)
        for _ in range(1, nodes.size):
            z = rng.standard_normal(m) if rng is not None else np.zeros(m)
            lam = exact_step(params, lam, dt, z, drift)
            new_rate = lam + alpha * np.sqrt(lam)
            cum += 0.5 * dt * (rate + new_rate)
            rate = new_rate
        return rate * np.exp(-cum)

    if params.sigma == 0.0 or lambda0 == params.lambda_bar:
        return _summarise(np.repeat(run(1, None), cfg.paths))
    return _summarise(np.concatenate(_run_batches(run, cfg, executor)))
