"""
Thomas algorithm for tridiagonal systems with constant off-diagonal bands.

The implicit schemes produce matrices with a constant sub-diagonal ``a``, a
constant super-diagonal ``c`` and a node-dependent main diagonal that does not
change between time levels. The pivots ``l_n`` of the LU sweep are therefore
computed once per solver (:func:`thomas_pivots`) and reused at every step
(:func:`thomas_solve_factored`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike


class SingularPivotError(ArithmeticError):
    """A zero pivot appeared during forward elimination."""

    def __init__(self, index: int, value: float):
        super().__init__(f"zero pivot at row {index} (value {value!r})")
        self.index = index
        self.value = value


@dataclass(frozen=True)
class TridiagonalSystem:
    """
    ``sub * x[i-1] + diag[i] * x[i] + sup * x[i+1] = rhs[i]``.

    ``sub`` does not act on row 0 and ``sup`` does not act on the last row.
    """

    sub: float
    sup: float
    diag: np.ndarray
    rhs: np.ndarray

    def __post_init__(self) -> None:
        diag = np.asarray(self.diag, dtype=float)
        rhs = np.asarray(self.rhs, dtype=float)
        if diag.ndim != 1 or diag.size < 1:
            raise ValueError("diag must be a non-empty 1D array")
        if rhs.shape != diag.shape:
            raise ValueError(f"rhs shape {rhs.shape} does not match diag shape {diag.shape}")
        zero = np.flatnonzero(diag == 0.0)
        if zero.size:
            raise SingularPivotError(int(zero[0]), 0.0)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "rhs", rhs)

    def matvec(self, x: ArrayLike) -> np.ndarray:
        return tridiag_matvec(self.sub, self.sup, self.diag, x)

    def dense(self) -> np.ndarray:
        n = self.diag.size
        m = np.diag(self.diag)
        if n > 1:
            m += np.diag(np.full(n - 1, self.sub), -1) + np.diag(np.full(n - 1, self.sup), 1)
        return m


def thomas_pivots(sub: float, sup: float, diag: ArrayLike) -> np.ndarray:
    """Forward-elimination pivots: ``l_0 = d_0``, ``l_i = d_i - sub*sup/l_{i-1}``."""
    d = np.asarray(diag, dtype=float).tolist()
    ac = sub * sup
    pivots = [0.0] * len(d)
    prev = d[0]
    if prev == 0.0:
        raise SingularPivotError(0, prev)
    pivots[0] = prev
    for i in range(1, len(d)):
        prev = d[i] - ac / prev
        if prev == 0.0:
            raise SingularPivotError(i, prev)
        pivots[i] = prev
    return np.array(pivots)


def thomas_solve_factored(sub: float, sup: float, pivots: np.ndarray, rhs: ArrayLike) -> np.ndarray:
    """Forward substitution and back substitution with precomputed pivots."""
    l = pivots.tolist() if isinstance(pivots, np.ndarray) else list(pivots)
    r = np.asarray(rhs, dtype=float).tolist()
    n = len(r)
    if len(l) != n:
        raise ValueError(f"{len(l)} pivots for a system of size {n}")
    z = [0.0] * n
    prev = r[0] / l[0]
    z[0] = prev
    for i in range(1, n):
        prev = (r[i] - sub * prev) / l[i]
        z[i] = prev
    x = z
    nxt = x[n - 1]
    for i in range(n - 2, -1, -1):
        nxt = z[i] - sup / l[i] * nxt
        x[i] = nxt
    return np.array(x)


def thomas_solve(system: TridiagonalSystem) -> np.ndarray:
    """Solve a :class:`TridiagonalSystem`; raises :class:`SingularPivotError`."""
    pivots = thomas_pivots(system.sub, system.sup, system.diag)
    return thomas_solve_factored(system.sub, system.sup, pivots, system.rhs)


def tridiag_matvec(sub: float, sup: float, diag: np.ndarray, x: ArrayLike) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = diag * x
    out[1:] += sub * x[:-1]
    out[:-1] += sup * x[1:]
    return out


def relative_residual(sub: float, sup: float, diag: np.ndarray, x: np.ndarray, rhs: np.ndarray) -> float:
    """``max|Mx - rhs| / (1 + max|rhs|)``."""
    res = tridiag_matvec(sub, sup, diag, x) - rhs
    return float(np.max(np.abs(res)) / (1.0 + np.max(np.abs(rhs))))
