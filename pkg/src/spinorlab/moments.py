"""Logarithmically weighted moments of lambda_F(p^nu) along p-power cutoffs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closedforms import residue_CFp
from .errors import Degenerate
from .hecke import GATE, lambda_coeffs
from .satake import SatakeLocal, distinctness_margin


def max_exponent(p: int, x: float) -> int:
    """Largest nu with p^nu <= x (exact integer comparison)."""
    if x < 1:
        raise ValueError("x must be >= 1")
    nu = 0
    pk = p
    while pk <= x:
        nu += 1
        pk *= p
    return nu


def _weighted(loc: SatakeLocal, x: float, power: int) -> float:
    if x < 2:
        raise ValueError("x must be >= 2")
    nu_max = max_exponent(loc.p, x)
    lam = lambda_coeffs(loc, nu_max)
    log_x = math.log(x)
    weights = log_x - np.arange(nu_max + 1) * math.log(loc.p)
    return math.fsum(lam**power * weights)


def second_moment(loc: SatakeLocal, x: float) -> float:
    """sum_{p^nu <= x} lambda_F(p^nu)^2 log(x / p^nu), nu = 0 included."""
    return _weighted(loc, x, 2)


def first_moment(loc: SatakeLocal, x: float) -> float:
    """sum_{p^nu <= x} lambda_F(p^nu) log(x / p^nu), nu = 0 included."""
    m5 = distinctness_margin(loc)[1]
    if m5 <= GATE:
        raise Degenerate(f"p = {loc.p}: 1, a, 1/a, b, 1/b not distinct (margin {m5:.3g})")
    return _weighted(loc, x, 1)


def second_prediction(loc: SatakeLocal, x: float) -> float:
    """C_{F,p} (log x)^2 / log p."""
    return residue_CFp(loc) * math.log(x) ** 2 / math.log(loc.p)


@dataclass(frozen=True)
class MomentReport:
    p: int
    grid: tuple[float, ...]
    second_lhs: tuple[float, ...]
    second_pred: tuple[float, ...]
    first_lhs: tuple[float, ...]
    ratios: tuple[float, ...]

    def rows(self) -> list[dict]:
        return [
            {
                "p": self.p,
                "x": x,
                "second_lhs": s,
                "second_pred": sp,
                "ratio": r,
                "first_lhs": f,
                "first_over_logx": f / math.log(x),
            }
            for x, s, sp, r, f in zip(self.grid, self.second_lhs, self.second_pred, self.ratios, self.first_lhs)
        ]

    @property
    def first_bound(self) -> float:
        """max |first_lhs| / log x over the grid."""
        return max(abs(f) / math.log(x) for x, f in zip(self.grid, self.first_lhs))


def default_grid(p: int) -> list[int]:
    return [p**k for k in range(10, 61, 5)]


def moment_report(loc: SatakeLocal, grid=None) -> MomentReport:
    grid = default_grid(loc.p) if grid is None else list(grid)
    if not grid or any(x < 2 for x in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing with every x >= 2")
    second = [second_moment(loc, x) for x in grid]
    pred = [second_prediction(loc, x) for x in grid]
    first = [first_moment(loc, x) for x in grid]
    return MomentReport(
        p=loc.p,
        grid=tuple(grid),
        second_lhs=tuple(second),
        second_pred=tuple(pred),
        first_lhs=tuple(first),
        ratios=tuple(s / q for s, q in zip(second, pred)),
    )
