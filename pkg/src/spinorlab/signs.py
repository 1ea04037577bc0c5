"""Sign and non-vanishing statistics of lambda_F(n), and the mean-value constants."""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import MissingPrime
from .hecke import GlobalTable, global_table, prime_power_table
from .primes import prime_sieve
from .satake import EigenForm

ZERO_SNAP = 1e-9


@dataclass(frozen=True)
class SignCounts:
    x: int
    n_star: int
    n_plus: int
    n_minus: int


def sign_vector(values: np.ndarray) -> np.ndarray:
    """+1 / -1 / 0 per value, with |v| <= ZERO_SNAP read as zero."""
    s = np.sign(values).astype(np.int8)
    s[np.abs(values) <= ZERO_SNAP] = 0
    return s


def sign_counts(form: EigenForm, x: int, table: GlobalTable | None = None) -> SignCounts:
    """(N*, N+, N-) at x.  A precomputed table covering x may be passed in."""
    if table is None or table.x < x:
        table = global_table(form, x)
    s = sign_vector(table.values[1 : x + 1])
    plus = int(np.count_nonzero(s > 0))
    minus = int(np.count_nonzero(s < 0))
    return SignCounts(x=int(x), n_star=plus + minus, n_plus=plus, n_minus=minus)


def sign_counts_along(form: EigenForm, xs, table: GlobalTable | None = None) -> list[SignCounts]:
    """Counts at several cutoffs from one table (cumulative sums)."""
    xs = [int(x) for x in xs]
    top = max(xs)
    if table is None or table.x < top:
        table = global_table(form, top)
    s = sign_vector(table.values[1 : top + 1])
    plus = np.cumsum(s > 0)
    minus = np.cumsum(s < 0)
    return [
        SignCounts(x, int(plus[x - 1] + minus[x - 1]), int(plus[x - 1]), int(minus[x - 1]))
        for x in xs
    ]


@dataclass(frozen=True)
class DensityEstimate:
    rho: float
    prime_bound: int
    nu_cut: int
    tail_bound: float


def euler_density(primes, nonzero: np.ndarray) -> DensityEstimate:
    """prod_p (1 - 1/p) sum_nu delta(p^nu) / p^nu from a (primes x (nu_cut+1)) 0/1 matrix.

    Powers beyond the cut are assigned delta(p^nu_cut), so a factor whose
    computed powers are all non-vanishing is exactly 1.  The largest possible
    effect of that extension, sum_p p^-(nu_cut+1), is reported as ``tail_bound``.
    """
    primes = np.asarray(primes, dtype=np.float64)
    nonzero = np.asarray(nonzero, dtype=bool)
    nu_cut = nonzero.shape[1] - 1
    powers = primes[:, None] ** -np.arange(nu_cut + 1, dtype=np.float64)
    missing = np.where(nonzero, 0.0, powers).sum(axis=1)
    # geometric tail sum_{nu > cut} p^-nu = p^-cut / (p - 1)
    missing += np.where(nonzero[:, -1], 0.0, powers[:, -1] / (primes - 1.0))
    factors = 1.0 - (1.0 - 1.0 / primes) * missing
    tail = float(np.sum(primes ** -(nu_cut + 1.0)))
    return DensityEstimate(
        rho=float(np.prod(factors)),
        prime_bound=int(primes[-1]) if primes.size else 1,
        nu_cut=nu_cut,
        tail_bound=tail,
    )


def rho_F(form: EigenForm, prime_bound: int = 10**5, nu_cut: int = 40) -> DensityEstimate:
    """Truncated Euler product for the density of n with lambda_F(n) != 0."""
    if prime_bound > form.prime_bound:
        raise MissingPrime(f"form covers primes <= {form.prime_bound}, need {prime_bound}")
    k = int(np.searchsorted(form.primes, prime_bound, side="right"))
    primes = form.primes[:k]
    lam = prime_power_table(form.t_a[:k], form.t_b[:k], primes, nu_cut, "lambda")
    est = euler_density(primes, np.abs(lam) > ZERO_SNAP)
    return DensityEstimate(est.rho, int(prime_bound), nu_cut, est.tail_bound)


def _ht_equation(phi: float) -> float:
    return math.sin(phi) - phi * math.cos(phi) - math.pi / 2


def K_constant() -> tuple[float, float]:
    """(phi_0, K): phi_0 in (0, pi) solves sin phi - phi cos phi = pi/2, K = -cos phi_0."""
    phi0 = bisect(_ht_equation, 0.0, math.pi, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=200)
    return phi0, -math.cos(phi0)


def hall_tenenbaum_rhs(g_at_primes: Mapping[int, float], x: float) -> float:
    """x exp(-K sum_{p <= x} (1 - g(p)) / p), with every prime <= x required in g."""
    _, K = K_constant()
    total = []
    for p in prime_sieve(int(x)):
        p = int(p)
        if p not in g_at_primes:
            raise MissingPrime(f"g has no value at p = {p}")
        g = float(g_at_primes[p])
        if abs(g) > 1.0:
            raise ValueError(f"|g({p})| = {abs(g)} > 1")
        total.append((1.0 - g) / p)
    return x * math.exp(-K * math.fsum(total))


def halberstam_prediction(C_g: float, kappa: float, x: float) -> float:
    """Main term C_g x (log x)^(kappa - 1)."""
    if kappa <= 0:
        raise ValueError("kappa must be > 0")
    if x < 3 and not math.isclose(x, math.e):
        raise ValueError("x must be >= 3")
    return C_g * x * math.log(x) ** (kappa - 1.0)
