"""
Flat ``key = value`` run configuration.

Lines starting with ``#`` and blank lines are ignored. Lists are comma
separated. Unknown keys are rejected. :meth:`RunConfig.dumps` writes every key
in a fixed order, so parsing and re-serialising is idempotent.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path

from .discount import DiscountCurve
from .grid import LogGrid
from .hazard import HazardParams
from .mc import McConfig


class ConfigError(ValueError):
    """Malformed or invalid configuration."""


SURFACE_CHOICES = ("f", "g", "A", "B", "P", "net", "charge")


@dataclass(frozen=True)
class RunConfig:
    mu: float = 0.04
    sigma: float = 0.10
    lambda_bar: float = 0.02
    alpha: float = 0.10
    M: float = 10.0
    h: float = 0.1
    k: float = 0.01
    T: float = 10.0
    lambda0: tuple[float, ...] = (0.04,)
    n: tuple[int, ...] = (1,)
    discount: str = ""
    paths: int = 200_000
    steps_per_year: int = 100
    seed: int = 0
    out: str = ""
    format: str = "csv"
    evaluation: str = "linear"
    gradient: str = "derived"
    surface: str = "P"
    surface_n: int = 1

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.evaluation not in ("linear", "nearest"):
            raise ConfigError(f"evaluation must be linear or nearest, got {self.evaluation!r}")
        if self.gradient not in ("derived", "half"):
            raise ConfigError(f"gradient must be derived or half, got {self.gradient!r}")
        if self.surface not in SURFACE_CHOICES:
            raise ConfigError(f"surface must be one of {', '.join(SURFACE_CHOICES)}, got {self.surface!r}")
        if not self.lambda0:
            raise ConfigError("lambda0 list is empty")
        if not self.n or any(v < 1 for v in self.n):
            raise ConfigError("n must be a nonempty list of positive integers")
        if self.surface_n < 1:
            raise ConfigError("surface_n must be a positive integer")

    # --- parsing -------------------------------------------------------

    @classmethod
    def keys(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def loads(cls, text: str, overrides: dict[str, str] | None = None) -> "RunConfig":
        raw: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key in raw:
                raise ConfigError(f"line {lineno}: duplicate key {key!r}")
            raw[key] = value
        raw.update(overrides or {})
        return cls.from_strings(raw)

    @classmethod
    def from_strings(cls, raw: dict[str, str]) -> "RunConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(raw) - set(known))
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        kwargs = {}
        for key, text in raw.items():
            default = known[key].default
            try:
                kwargs[key] = _convert(text, default)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {text!r} ({exc})") from None
        return cls(**kwargs)

    @classmethod
    def load(cls, source: str | Path, overrides: dict[str, str] | None = None) -> "RunConfig":
        """Read a config file, or a bundled config by name (e.g. ``table1``)."""
        path = Path(source)
        if path.is_file():
            return cls.loads(path.read_text(), overrides)
        bundled = resources.files("sharpelife") / "configs" / f"{source}.conf"
        if bundled.is_file():
            return cls.loads(bundled.read_text(), overrides)
        raise ConfigError(f"config {str(source)!r} not found")

    def dumps(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                text = ",".join(_fmt(v) for v in value)
            else:
                text = _fmt(value)
            lines.append(f"{f.name} = {text}")
        return "\n".join(lines) + "\n"

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    # --- owning-module objects ------------------------------------------

    def hazard_params(self) -> HazardParams:
        return HazardParams(mu=self.mu, sigma=self.sigma, lambda_bar=self.lambda_bar, alpha=self.alpha)

    def grid(self) -> LogGrid:
        return LogGrid(M=self.M, h=self.h, k=self.k, T=self.T)

    def discount_curve(self) -> DiscountCurve:
        if not self.discount:
            return DiscountCurve.flat()
        return DiscountCurve.from_csv(self.discount)

    def mc_config(self) -> McConfig:
        return McConfig(paths=self.paths, steps_per_year=self.steps_per_year, seed=self.seed)


def _convert(text: str, default):
    if isinstance(default, tuple):
        item = type(default[0])
        parts = [p.strip() for p in text.split(",") if p.strip()]
        return tuple(_scalar(p, item) for p in parts)
    return _scalar(text, type(default))


def _scalar(text: str, kind):
    if kind is int:
        try:
            return int(text)
        except ValueError:
            pass
        # accept "5.0" and "1e3" but never go through float for exact integers
        value = float(text)
        if not value.is_integer():
            raise ValueError("not an integer")
        return int(value)
    if kind is float:
        return float(text)
    return text


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)
