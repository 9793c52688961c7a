"""Deterministic discount curves given as tabulated zero-coupon prices F(0, s)."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike


@dataclass(frozen=True)
class DiscountCurve:
    """
    Piecewise-linear zero-coupon curve ``s -> F(0, s)``.

    The first knot must be ``(0, 1)``; prices lie in ``(0, 1]`` and are
    nonincreasing. Beyond the last knot the curve is held flat.

    Example
    -------
    >>> curve = DiscountCurve.from_knots([0, 5, 10], [1.0, 0.9, 0.8])
    >>> float(curve(7.5))
    0.85
    """

    times: np.ndarray
    prices: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.times, dtype=float)
        F = np.asarray(self.prices, dtype=float)
        if s.ndim != 1 or s.shape != F.shape or s.size == 0:
            raise ValueError("times and prices must be 1D arrays of equal, nonzero length")
        if s[0] != 0.0 or F[0] != 1.0:
            raise ValueError("the curve must start at (s=0, F=1)")
        if np.any(np.diff(s) <= 0):
            raise ValueError("knot times must be strictly increasing")
        if np.any(F <= 0) or np.any(F > 1):
            raise ValueError("zero-coupon prices must lie in (0, 1]")
        if np.any(np.diff(F) > 0):
            raise ValueError("zero-coupon prices must be nonincreasing")
        object.__setattr__(self, "times", s)
        object.__setattr__(self, "prices", F)

    @classmethod
    def flat(cls) -> "DiscountCurve":
        """Zero interest: ``F == 1``."""
        return cls(np.array([0.0]), np.array([1.0]))

    @classmethod
    def from_knots(cls, times: ArrayLike, prices: ArrayLike) -> "DiscountCurve":
        return cls(np.asarray(times, dtype=float), np.asarray(prices, dtype=float))

    @classmethod
    def from_csv(cls, source: str | Path | io.TextIOBase) -> "DiscountCurve":
        """Read a two-column ``s,F`` CSV with a header row."""
        if isinstance(source, (str, Path)):
            with open(source, newline="") as fh:
                return cls._read(fh)
        return cls._read(source)

    @classmethod
    def _read(cls, fh) -> "DiscountCurve":
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        if header != ["s", "F"]:
            raise ValueError(f"discount curve header must be 's,F', got {','.join(header)!r}")
        rows = [(float(r[0]), float(r[1])) for r in reader if r and any(c.strip() for c in r)]
        if not rows:
            raise ValueError("discount curve file has no rows")
        s, F = zip(*rows)
        return cls.from_knots(s, F)

    @property
    def is_flat(self) -> bool:
        return bool(np.all(self.prices == 1.0))

    def __call__(self, s: ArrayLike) -> np.ndarray:
        return np.interp(np.asarray(s, dtype=float), self.times, self.prices)

    def forward(self, t: float, s: ArrayLike) -> np.ndarray:
        """Time-t price of a bond paying 1 at ``s >= t``: ``F(0,s)/F(0,t)``."""
        return self(s) / self(t)
