"""Truncated formal power series in one variable with complex coefficients.

A ``TruncSeries`` of order N stores the coefficients of t^0 .. t^N.  All
arithmetic is truncated at the common order; mixing orders is an error
rather than a silent truncation.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from numbers import Number

import numpy as np

from .errors import NonUnitDivisor, OrderMismatch

UNIT_EPS = 1e-14


class TruncSeries:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray):
        c = np.array(coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("series needs a non-empty 1-d coefficient array")
        c.flags.writeable = False
        self._c = c

    @classmethod
    def from_poly(cls, coeffs: Sequence[complex], N: int) -> TruncSeries:
        """Embed a polynomial (lowest degree first) at order N, truncating."""
        c = np.zeros(N + 1, dtype=np.complex128)
        k = min(len(coeffs), N + 1)
        c[:k] = np.asarray(coeffs, dtype=np.complex128)[:k]
        return cls(c)

    @classmethod
    def one(cls, N: int) -> TruncSeries:
        return cls.from_poly([1.0], N)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return self._c.size - 1

    def __len__(self) -> int:
        return self._c.size

    def __getitem__(self, nu):
        return self._c[nu]

    def __repr__(self) -> str:
        return f"TruncSeries(order={self.order}, coeffs={self._c!r})"

    def _check(self, other: TruncSeries) -> None:
        if not isinstance(other, TruncSeries):
            raise TypeError(f"expected TruncSeries, got {type(other).__name__}")
        if other.order != self.order:
            raise OrderMismatch(f"orders {self.order} and {other.order} differ")

    def __add__(self, other):
        if isinstance(other, Number):
            c = self._c.copy()
            c[0] += other
            return TruncSeries(c)
        self._check(other)
        return TruncSeries(self._c + other._c)

    __radd__ = __add__

    def __neg__(self) -> TruncSeries:
        return TruncSeries(-self._c)

    def __sub__(self, other):
        if isinstance(other, Number):
            return self + (-other)
        self._check(other)
        return TruncSeries(self._c - other._c)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: complex) -> TruncSeries:
        return TruncSeries(self._c * k)

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        self._check(other)
        return TruncSeries(np.convolve(self._c, other._c)[: self.order + 1])

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self.scale(1.0 / other)
        self._check(other)
        d = other._c
        if abs(d[0]) <= UNIT_EPS:
            raise NonUnitDivisor(f"constant term {d[0]!r} is not a unit")
        N = self.order
        out = np.zeros(N + 1, dtype=np.complex128)
        inv0 = 1.0 / d[0]
        for k in range(N + 1):
            # out[k] = (x[k] - sum_{j=1..k} d[j] out[k-j]) / d[0]
            acc = self._c[k]
            if k:
                acc -= np.dot(d[1 : k + 1], out[k - 1 :: -1])
            out[k] = acc * inv0
        return TruncSeries(out)

    def allclose(self, other: TruncSeries, atol: float = 1e-9) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self._c - other._c)) <= atol)


def geom(eta: complex, N: int) -> TruncSeries:
    """Expansion of 1/(1 - eta t): coefficient nu is eta**nu."""
    if N < 0:
        raise ValueError("order must be >= 0")
    return TruncSeries(np.power(complex(eta), np.arange(N + 1)))


def linear(eta: complex, N: int) -> TruncSeries:
    """The polynomial 1 - eta t at order N."""
    return TruncSeries.from_poly([1.0, -complex(eta)], N)


def product_of_geoms(etas: Iterable[complex], N: int) -> TruncSeries:
    """Expansion of prod 1/(1 - eta t) by repeated Cauchy products."""
    out = TruncSeries.one(N)
    for eta in etas:
        out = out * geom(eta, N)
    return out


def add(x: TruncSeries, y: TruncSeries) -> TruncSeries:
    return x + y


def sub(x: TruncSeries, y: TruncSeries) -> TruncSeries:
    return x - y


def mul(x: TruncSeries, y: TruncSeries) -> TruncSeries:
    return x * y


def div(x: TruncSeries, y: TruncSeries) -> TruncSeries:
    return x / y


def scale(x: TruncSeries, k: complex) -> TruncSeries:
    return x.scale(k)
