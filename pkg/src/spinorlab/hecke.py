"""Hecke eigenvalues a_F(p^nu), lambda_F(p^nu) and their multiplicative extensions.

Local values are available through several independent routes:

* ``a_coeffs``: Taylor coefficients of 1/[(1-at)(1-t/a)(1-bt)(1-t/b)], by
  series division.
* ``lambda_coeffs``: lambda(p^nu) = A(nu) + (1 - 1/p) * sum_{j>=1} A(nu - 2j),
  with A evaluated as a literal double sum, cross-checked against the
  generating series (1 - t^2/p) / quartic.
* ``prime_power_table``: the real four-term linear recurrence of the quartic
  1 - u t + v t^2 - u t^3 + t^4 (u = t_a + t_b, v = t_a t_b + 2), vectorized
  over many primes.  Global tables and ``lambda_at`` use this route so that
  both produce bit-identical products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, CutoffTooLarge, Degenerate, MissingPrime, SpinorError
from .primes import factorize, prime_sieve
from .satake import EigenForm, SatakeLocal, distinctness_margin
from .series import TruncSeries, linear

IMAG_TOL = 1e-9
ROUTE_TOL = 1e-9
GATE = 1e-6
MAX_CUTOFF = 10**8


class RouteMismatch(SpinorError, ArithmeticError):
    """Two computation routes for the same quantity disagree."""


def d4_prime_power(nu: int) -> int:
    return math.comb(nu + 3, 3)


def d5_prime_power(nu: int) -> int:
    return math.comb(nu + 4, 4)


def _real(values: np.ndarray, what: str) -> np.ndarray:
    values = np.asarray(values)
    # relative to the sequence magnitude: near-degenerate locals reach |value| ~ d_5(p^nu)
    bad = np.abs(values.imag) > IMAG_TOL * max(1.0, float(np.max(np.abs(values.real), initial=0.0)))
    if np.any(bad):
        raise ConstraintViolation(f"{what}: imaginary part {np.max(np.abs(values.imag)):.3g} too large")
    return np.ascontiguousarray(values.real)


def quartic(loc: SatakeLocal, N: int) -> TruncSeries:
    """(1 - a t)(1 - t/a)(1 - b t)(1 - t/b) at order N."""
    out = TruncSeries.one(N)
    for eta in (loc.a, 1 / loc.a, loc.b, 1 / loc.b):
        out = out * linear(eta, N)
    return out


def a_coeffs(loc: SatakeLocal, N: int) -> np.ndarray:
    """a_F(p^nu) for nu = 0..N."""
    if N < 0:
        raise ValueError("N must be >= 0")
    s = TruncSeries.one(N) / quartic(loc, N)
    return _real(s.coeffs, "a_F(p^nu)")


def _A_complex(a, b, nu: int):
    k = np.arange(nu + 1)
    left = np.sum(a ** (nu - k) * b**k)
    right = np.sum((a * b) ** -k)
    return left * right


def _unit_from_trace(t: float) -> np.clongdouble:
    """t/2 + i sqrt(1 - t^2/4) in extended precision (exact real part)."""
    half = np.longdouble(t) / 2
    return np.clongdouble(half + 1j * np.sqrt(np.maximum(np.longdouble(0), 1 - half * half)))


def A_direct(loc: SatakeLocal, nu: int) -> float:
    """A(nu) = sum_i a^(nu-i) b^i * sum_j (ab)^(-j), summed literally."""
    if nu < 0:
        raise ValueError("nu must be >= 0")
    return float(_real(np.array([_A_complex(loc.a, loc.b, nu)]), "A(nu)")[0])


def A_values(loc: SatakeLocal, N: int, extended: bool = False) -> np.ndarray:
    """A(nu) for nu = 0..N; ``extended`` sums in long double from the traces."""
    if extended:
        a, b = _unit_from_trace(loc.t_a), _unit_from_trace(loc.t_b)
        vals = np.array([_A_complex(a, b, nu) for nu in range(N + 1)], dtype=np.clongdouble)
    else:
        vals = np.array([_A_complex(loc.a, loc.b, nu) for nu in range(N + 1)], dtype=np.complex128)
    return _real(vals, "A(nu)")


def D_ab(a: complex, b: complex) -> complex:
    """D(a, b) = ab / ((a - b)(ab - 1))."""
    return a * b / ((a - b) * (a * b - 1))


def _gate_five(loc: SatakeLocal) -> None:
    m5 = distinctness_margin(loc)[1]
    if m5 <= GATE:
        raise Degenerate(f"p = {loc.p}: 1, a, 1/a, b, 1/b not distinct (margin {m5:.3g})")


def A_closed(loc: SatakeLocal, nu: int) -> float:
    """A(nu) = D(a, b) (a^(nu+1) + a^(-nu-1) - b^(nu+1) - b^(-nu-1))."""
    _gate_five(loc)
    a, b = loc.a, loc.b
    val = D_ab(a, b) * (a ** (nu + 1) + a ** (-nu - 1) - b ** (nu + 1) - b ** (-nu - 1))
    return float(_real(np.array([val]), "A(nu)")[0])


def odd_even_tail(A: np.ndarray) -> np.ndarray:
    """S(nu) = sum_{1 <= j <= nu/2} A(nu - 2j) for every nu in range(len(A))."""
    S = np.zeros_like(A)
    for nu in range(2, len(A)):
        S[nu] = S[nu - 2] + A[nu - 2]
    return S


def andrianov_series(loc: SatakeLocal, N: int) -> np.ndarray:
    """Coefficients of (1 - t^2/p) / quartic."""
    num = TruncSeries.from_poly([1.0, 0.0, -1.0 / loc.p], N)
    return _real((num / quartic(loc, N)).coeffs, "lambda_F(p^nu)")


def lambda_coeffs(loc: SatakeLocal, N: int) -> np.ndarray:
    """lambda_F(p^nu) for nu = 0..N, checked against the Andrianov series."""
    if N < 0:
        raise ValueError("N must be >= 0")
    A = A_values(loc, N)
    lam = A + (1.0 - 1.0 / loc.p) * odd_even_tail(A)
    other = andrianov_series(loc, N)
    scale = max(1.0, float(np.max(np.abs(other))))
    if np.max(np.abs(lam - other)) > ROUTE_TOL * scale:
        raise RouteMismatch(f"p = {loc.p}: A-sum and generating-series routes disagree")
    return lam


def lambda_from_a(loc: SatakeLocal, nu: int) -> float:
    """sum_{d^2 m = p^nu} mu(d)/d a_F(m) = a_F(p^nu) - a_F(p^(nu-2))/p."""
    a = a_coeffs(loc, nu)
    return float(a[nu] - (a[nu - 2] / loc.p if nu >= 2 else 0.0))


@dataclass(frozen=True)
class LocalTable:
    loc: SatakeLocal
    N: int
    a_vals: np.ndarray
    lambda_vals: np.ndarray


def local_table(loc: SatakeLocal, N: int) -> LocalTable:
    """Both sequences at p up to p^N, certified against the divisor bounds."""
    a = a_coeffs(loc, N)
    lam = lambda_coeffs(loc, N)
    for nu in range(N + 1):
        if abs(a[nu]) > d4_prime_power(nu) + ROUTE_TOL:
            raise ConstraintViolation(f"|a_F({loc.p}^{nu})| = {abs(a[nu]):.6g} exceeds d_4")
        if abs(lam[nu]) > d5_prime_power(nu) + ROUTE_TOL:
            raise ConstraintViolation(f"|lambda_F({loc.p}^{nu})| = {abs(lam[nu]):.6g} exceeds d_5")
    a.flags.writeable = False
    lam.flags.writeable = False
    return LocalTable(loc, N, a, lam)


def prime_power_table(t_a, t_b, primes, N: int, kind: str = "lambda", dtype=np.float64) -> np.ndarray:
    """Rows of a_F(p^nu) or lambda_F(p^nu), nu = 0..N, for many primes at once.

    Uses h_nu = u h_{nu-1} - v h_{nu-2} + u h_{nu-3} - h_{nu-4} for a_F and
    lambda_nu = h_nu - h_{nu-2} / p.  ``dtype=np.longdouble`` gives the
    extended-precision reference used by the identity certificates.
    """
    t_a = np.atleast_1d(np.asarray(t_a, dtype=dtype))
    t_b = np.atleast_1d(np.asarray(t_b, dtype=dtype))
    p = np.atleast_1d(np.asarray(primes, dtype=dtype))
    u = t_a + t_b
    v = t_a * t_b + 2
    h = np.zeros((len(u), N + 1), dtype=dtype)
    h[:, 0] = 1.0
    for nu in range(1, N + 1):
        acc = u * h[:, nu - 1]
        if nu >= 2:
            acc = acc - v * h[:, nu - 2]
        if nu >= 3:
            acc = acc + u * h[:, nu - 3]
        if nu >= 4:
            acc = acc - h[:, nu - 4]
        h[:, nu] = acc
    if kind == "a":
        return h
    if kind != "lambda":
        raise ValueError(f"unknown kind {kind!r}")
    lam = h.copy()
    lam[:, 2:] -= h[:, :-2] / p[:, None]
    return lam


def _chebyshev_u(t: float, N: int) -> np.ndarray:
    """U_m(t/2), m = 0..N, in long double: the coefficients of 1/((1 - at)(1 - t/a))."""
    c = np.longdouble(t)
    u = np.zeros(N + 1, dtype=np.longdouble)
    u[0] = 1
    if N >= 1:
        u[1] = c
    for m in range(2, N + 1):
        u[m] = c * u[m - 1] - u[m - 2]
    return u


def reference_values(loc: SatakeLocal, N: int, kind: str = "lambda") -> np.ndarray:
    """Extended-precision a_F(p^nu) or lambda_F(p^nu) for one local.

    The quartic is split into its two quadratic factors, each expanded by its
    own two-term recurrence, and the results are convolved.  Unlike the
    four-term recurrence this stays accurate when a and b nearly coincide.
    """
    h = np.convolve(_chebyshev_u(loc.t_a, N), _chebyshev_u(loc.t_b, N))[: N + 1]
    if kind == "a":
        return h
    if kind != "lambda":
        raise ValueError(f"unknown kind {kind!r}")
    lam = h.copy()
    lam[2:] -= h[:-2] / loc.p
    return lam


def _prime_power_values(form: EigenForm, p: int, nu: int, kind: str) -> float:
    key = (kind, p)
    row = form._cache.get(key)
    if row is None or len(row) <= nu:
        i = form.index_of(p)
        n_max = max(nu, 8)
        row = prime_power_table(form.t_a[i], form.t_b[i], [p], n_max, kind)[0]
        form._cache[key] = row
    return float(row[nu])


def _multiplicative_at(form: EigenForm, n: int, kind: str) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    val = 1.0
    for p, e in factorize(n):
        if p > form.prime_bound:
            raise MissingPrime(f"prime factor {p} of {n} exceeds prime_bound {form.prime_bound}")
        val *= _prime_power_values(form, p, e, kind)
    return val


def lambda_at(form: EigenForm, n: int) -> float:
    return _multiplicative_at(form, n, "lambda")


def a_at(form: EigenForm, n: int) -> float:
    return _multiplicative_at(form, n, "a")


@dataclass(frozen=True)
class GlobalTable:
    """values[n] = lambda_F(n) (or a_F(n)) for 1 <= n <= x; values[0] is unused (0)."""

    form: EigenForm
    x: int
    values: np.ndarray
    kind: str = "lambda"

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self) -> int:
        return self.x


def global_table(form: EigenForm, x: int, kind: str = "lambda") -> GlobalTable:
    """Multiplicative sieve over [1, x].

    Each n has at most one prime factor above sqrt(x).  Small primes are
    applied as prime-power factors on their multiples while being divided out
    of a residue array; whatever remains (1 or one large prime) is applied
    last by table lookup.  Factor order matches ``lambda_at`` exactly.
    """
    x = int(x)
    if x < 1:
        raise ValueError("x must be >= 1")
    if x > MAX_CUTOFF:
        raise CutoffTooLarge(f"x = {x} exceeds {MAX_CUTOFF}")
    primes_x = prime_sieve(x)
    if primes_x.size and primes_x[-1] > form.prime_bound:
        raise MissingPrime(f"form covers primes <= {form.prime_bound}, table needs up to {primes_x[-1]}")
    k = primes_x.size
    t_a, t_b = form.t_a[:k], form.t_b[:k]

    vals = np.ones(x + 1)
    vals[0] = 0.0
    rem = np.arange(x + 1, dtype=np.int32 if x < 2**31 else np.int64)
    root = math.isqrt(x)
    n_small = int(np.searchsorted(primes_x, root, side="right"))
    if n_small:
        nu_max = max(1, int(math.log(x) / math.log(2)) + 1)
        table = prime_power_table(t_a[:n_small], t_b[:n_small], primes_x[:n_small], nu_max, kind)
        for i in range(n_small):
            p = int(primes_x[i])
            f = np.full(x // p, table[i, 1])
            pk, nu = p * p, 2
            while pk <= x:
                f[pk // p - 1 :: pk // p] = table[i, nu]
                rem[pk::pk] //= p
                pk *= p
                nu += 1
            rem[p::p] //= p
            vals[p::p] *= f
    lookup = np.zeros(x + 1)
    lookup[1] = 1.0
    large = primes_x[n_small:]
    if kind == "a" or kind == "lambda":
        # nu = 1: a_F(p) = lambda_F(p) = t_a + t_b
        lookup[large] = t_a[n_small:] + t_b[n_small:]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    vals *= lookup[rem]
    vals[0] = 0.0
    vals.flags.writeable = False
    return GlobalTable(form, x, vals, kind)


def _mobius(d: int) -> int:
    fac = factorize(d)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def lambda_via_mobius(form: EigenForm, n: int) -> float:
    """sum_{d^2 | n} mu(d) / d * a_F(n / d^2), evaluated as a full divisor sum."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    terms = []
    for d in range(1, math.isqrt(n) + 1):
        if n % (d * d) == 0:
            mu = _mobius(d)
            if mu:
                terms.append(mu / d * a_at(form, n // (d * d)))
    return math.fsum(terms)


def mobius_table(form: EigenForm, x: int) -> np.ndarray:
    """lambda_F(n) for n <= x from the a_F table through the square-divisor Mobius sum."""
    a = global_table(form, x, "a").values
    lam = np.zeros(x + 1)
    for d in range(1, math.isqrt(x) + 1):
        mu = _mobius(d)
        if mu:
            dd = d * d
            lam[dd::dd] += mu / d * a[1 : x // dd + 1]
    return lam
