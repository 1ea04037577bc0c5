"""Closed-form rational generating functions for lambda_F(p^nu)^2 and a_F(p^nu)^2.

Every closed form here is built as a ``TruncSeries`` in t = p^{-s} and is
meant to be compared coefficientwise with values computed directly by
``hecke``.  Certificate helpers return the maximum absolute coefficient error.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import Degenerate
from .hecke import (
    A_values,
    D_ab,
    RouteMismatch,
    odd_even_tail,
    reference_values,
)
from .satake import SatakeLocal, distinctness_margin, from_traces
from .series import TruncSeries, geom, product_of_geoms

GATE = 1e-6
# Certificates at order ~40 need O(1)-sized coefficients for an absolute 1e-8
# tolerance; below this spectral-set margin the values grow like margin^-2.
CERT_MARGIN = 0.1


@dataclass(frozen=True)
class SpectralSet:
    etas: tuple[complex, ...]

    def __iter__(self):
        return iter(self.etas)

    def __len__(self) -> int:
        return len(self.etas)

    def __getitem__(self, i) -> complex:
        return self.etas[i]


def spectral_set(loc: SatakeLocal) -> SpectralSet:
    """[1, a^2, a^-2, b^2, b^-2, ab, (ab)^-1, a/b, b/a], in this order."""
    a, b = loc.a, loc.b
    return SpectralSet(
        (1 + 0j, a * a, 1 / (a * a), b * b, 1 / (b * b), a * b, 1 / (a * b), a / b, b / a)
    )


@dataclass(frozen=True)
class QCoeffs:
    q: tuple[float, ...]
    u: float
    v: float


@dataclass(frozen=True)
class RCoeffs:
    r: tuple[float, ...]


def _uv(loc: SatakeLocal) -> tuple[float, float]:
    return loc.t_a + loc.t_b, loc.t_a * loc.t_b + 2.0


def q_coeffs(loc: SatakeLocal, p: int | None = None) -> QCoeffs:
    """q_0..q_6 as polynomials in t_a, t_b and 1/p."""
    p = loc.p if p is None else p
    ta, tb = loc.t_a, loc.t_b
    w = 1.0 / p
    s = ta + tb
    m = ta * ta + tb * tb + ta * tb - 2.0
    q = (
        1.0,
        ta * tb + 2.0,
        2.0 - s * s - 2.0 * m * w + w * w,
        ta * tb + 2.0 + 2.0 * (s * s + (ta * ta - 2.0) * (tb * tb - 2.0)) * w + (ta * tb + 2.0) * w * w,
        1.0 - 2.0 * m * w - (s * s - 2.0) * w * w,
        (ta * tb + 2.0) * w * w,
        w * w,
    )
    u, v = _uv(loc)
    return QCoeffs(q, u, v)


def q_coeffs_uv(u: float, v: float, p: int) -> tuple[float, ...]:
    """The same q_0..q_6 written in u = t_a + t_b and v = t_a t_b + 2."""
    w = 1.0 / p
    return (
        1.0,
        v,
        2.0 - u * u - 2.0 * (u * u - v) * w + w * w,
        v - 2.0 * (u + v) * (u - v) * w + v * w * w,
        1.0 - 2.0 * (u * u - v) * w + (2.0 - u * u) * w * w,
        v * w * w,
        w * w,
    )


def r_coeffs(loc: SatakeLocal) -> RCoeffs:
    _, v = _uv(loc)
    s = loc.t_a + loc.t_b
    return RCoeffs((1.0, v, -s * s + 2.0, v, 1.0))


def _one_plus_t(N: int) -> TruncSeries:
    return TruncSeries.from_poly([1.0, 1.0], N)


def prop1_series(loc: SatakeLocal, N: int, q: tuple[float, ...] | None = None) -> TruncSeries:
    """(1 + t) prod_{eta in D_F} (1 - eta t)^-1 sum q_i t^i at order N."""
    q = q_coeffs(loc).q if q is None else q
    poly = TruncSeries.from_poly(q, N)
    return _one_plus_t(N) * product_of_geoms(spectral_set(loc), N) * poly


def prop2_series(loc: SatakeLocal, N: int, with_one_plus_t: bool = True) -> TruncSeries:
    """Closed form for sum a_F(p^nu)^2 t^nu.

    The factor (1 + t) is required for the identity to hold; the variant
    without it is kept only so its failure can be demonstrated.
    """
    poly = TruncSeries.from_poly(r_coeffs(loc).r, N)
    out = product_of_geoms(spectral_set(loc), N) * poly
    return _one_plus_t(N) * out if with_one_plus_t else out


class Which(str, Enum):
    A2 = "A2"
    B = "B"
    C = "C"


def _gate_lemma(loc: SatakeLocal) -> None:
    a, b = loc.a, loc.b
    factors = {"a - b": a - b, "a^2 - 1": a * a - 1, "b^2 - 1": b * b - 1, "ab - 1": a * b - 1}
    for name, val in factors.items():
        if abs(val) <= GATE:
            raise Degenerate(f"p = {loc.p}: |{name}| = {abs(val):.3g} inside gate {GATE}")


def lemma_series(loc: SatakeLocal, which: Which | str, N: int) -> TruncSeries:
    """Partial-fraction generating series of A(nu)^2, B(nu) or C(nu), divided by D(a, b)^2."""
    _gate_lemma(loc)
    which = Which(which)
    a, b = loc.a, loc.b
    g = lambda eta: geom(eta, N)  # noqa: E731
    ab, a_b = a * b, a / b
    if which is Which.A2:
        return (
            g(1).scale(4)
            + g(a * a).scale(a * a)
            + g(1 / (a * a)).scale(1 / (a * a))
            + g(b * b).scale(b * b)
            + g(1 / (b * b)).scale(1 / (b * b))
            - g(ab).scale(2 * ab)
            - g(1 / ab).scale(2 / ab)
            - g(a_b).scale(2 * a_b)
            - g(1 / a_b).scale(2 / a_b)
        )
    den = (a * a - 1) * (b * b - 1)
    if which is Which.B:
        return (
            g(1).scale(-2)
            + g(a * a).scale(a * a / (a * a - 1))
            - g(1 / (a * a)).scale(1 / (a * a - 1))
            + g(b * b).scale(b * b / (b * b - 1))
            - g(1 / (b * b)).scale(1 / (b * b - 1))
            - g(ab).scale((a**3 * b + a * b**3 - 2 * ab) / den)
            - g(1 / ab).scale((a / b + b / a - 2 * ab) / den)
            + g(a_b).scale((a**3 * b + a / b - 2 * ab) / den)
            + g(1 / a_b).scale((a * b**3 + b / a - 2 * ab) / den)
        )
    ca = a * a / (a * a - 1) ** 2
    cb = b * b / (b * b - 1) ** 2
    cab = 2 * ab / den
    return (
        g(1).scale(-2 * (ca + cb))
        + (g(a * a) + g(1 / (a * a))).scale(ca)
        + (g(b * b) + g(1 / (b * b))).scale(cb)
        - (g(ab) + g(1 / ab) - g(a_b) - g(1 / a_b)).scale(cab)
    )


def ABC_direct(loc: SatakeLocal, N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """A(nu)^2, B(nu) = A(nu) S(nu) and C(nu) = S(nu)^2 with S the even-step tail sum."""
    A = A_values(loc, N)
    S = odd_even_tail(A)
    return A * A, A * S, S * S


def lemma_error(loc: SatakeLocal, which: Which | str, N: int) -> float:
    which = Which(which)
    direct = dict(zip(Which, ABC_direct(loc, N)))[which]
    closed = lemma_series(loc, which, N).coeffs * D_ab(loc.a, loc.b) ** 2
    return float(np.max(np.abs(closed - direct)))


def decomposition_check(loc: SatakeLocal, p: int | None, N: int) -> float:
    """max_nu |lambda(p^nu)^2 - A^2 - 2(1 - 1/p) B - (1 - 1/p)^2 C|.

    ``p`` overrides the prime of ``loc`` (the traces are kept).
    """
    if p is not None and p != loc.p:
        loc = replace(loc, p=int(p))
    # near a = b = 1 the values reach d_5(p^40) ~ 1e5, so both sides are built
    # in long double
    A = A_values(loc, N, extended=True)
    S = odd_even_tail(A)
    c = 1 - np.longdouble(1) / loc.p
    lam = reference_values(loc, N, "lambda")
    return float(np.max(np.abs(lam * lam - (A * A + 2 * c * A * S + c * c * S * S))))


def _max_error(closed: TruncSeries, direct: np.ndarray) -> float:
    # direct values may be longdouble; compare before rounding them to double
    diff = closed.coeffs.astype(np.clongdouble) - direct
    return float(np.max(np.abs(diff)))


def prop1_error(loc: SatakeLocal, N: int, q: tuple[float, ...] | None = None) -> float:
    """Max coefficient error of the closed form against lambda_F(p^nu)^2."""
    lam = reference_values(loc, N, "lambda")
    return _max_error(prop1_series(loc, N, q), lam * lam)


def prop2_error(loc: SatakeLocal, N: int, with_one_plus_t: bool = True) -> float:
    a = reference_values(loc, N, "a")
    return _max_error(prop2_series(loc, N, with_one_plus_t), a * a)


def sample_locals(rng: np.random.Generator, count: int, p: int, min_margin: float = CERT_MARGIN) -> list[SatakeLocal]:
    """Random locals at p with uniform angles, rejecting spectral-set margins below ``min_margin``."""
    out: list[SatakeLocal] = []
    while len(out) < count:
        th_a, th_b = np.pi * rng.random(2)
        loc = from_traces(2.0 * np.cos(th_a), 2.0 * np.cos(th_b), p)
        if distinctness_margin(loc)[0] >= min_margin:
            out.append(loc)
    return out


def residue_closed(loc: SatakeLocal, p: int | None = None) -> float:
    """2/(t_a - t_b)^2 {(1/(4 - t_a^2) + 1/(4 - t_b^2))(1 - 1/p)^2 + 2/p}."""
    p = loc.p if p is None else p
    ta, tb = loc.t_a, loc.t_b
    c = 1.0 - 1.0 / p
    return 2.0 / (ta - tb) ** 2 * ((1.0 / (4.0 - ta * ta) + 1.0 / (4.0 - tb * tb)) * c * c + 2.0 / p)


def residue_product(loc: SatakeLocal, p: int | None = None) -> float:
    """2 prod_{eta != 1} (1 - eta)^-1 sum q_i."""
    p = loc.p if p is None else p
    etas = np.asarray(spectral_set(loc).etas[1:])
    val = 2.0 * np.prod(1.0 / (1.0 - etas)) * sum(q_coeffs(loc, p).q)
    return float(val.real)


def residue_CFp(loc: SatakeLocal, p: int | None = None, tol: float = 1e-10) -> float:
    """C_{F,p}: residue of the lambda^2 series at s = 0 times log p."""
    margin = distinctness_margin(loc)[0]
    if margin <= GATE:
        raise Degenerate(f"p = {loc.p}: spectral set not distinct (margin {margin:.3g})")
    closed = residue_closed(loc, p)
    prod = residue_product(loc, p)
    if abs(closed - prod) > tol * max(1.0, abs(closed)):
        raise RouteMismatch(f"residue routes disagree: {closed!r} vs {prod!r}")
    if not closed > 0:
        raise RouteMismatch(f"residue {closed!r} is not positive")
    return closed

