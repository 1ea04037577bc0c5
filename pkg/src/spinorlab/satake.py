"""Local Satake data per prime and the eigenform container built from it.

The canonical representation of the local data at p is the pair of real
traces ``t_a = a + 1/a`` and ``t_b = b + 1/b``, where ``a = alpha_0`` and
``b = alpha_0 * alpha_1`` are unit complex numbers.  Everything downstream is
symmetric under ``a <-> 1/a`` and ``b <-> 1/b``, so the traces determine all
computed quantities.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolation, MissingPrime, NonRamanujan, OutOfRange
from .primes import is_prime, prime_sieve

UNIT_TOL = 1e-12  # constructed values
INGEST_TOL = 1e-10  # values read from outside (files, user input)
RECOVER_TOL = 1e-9  # slack for float noise at the boundary of [-2, 2]
ZERO_RATE = 0.5  # c in min(1, c / (log p)^(1+delta))
EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class SatakeLocal:
    p: int
    a: complex
    b: complex
    t_a: float
    t_b: float

    def __post_init__(self):
        if self.p < 2 or not is_prime(self.p):
            raise ConstraintViolation(f"p = {self.p} is not prime")
        for name, z, t in (("a", self.a, self.t_a), ("b", self.b, self.t_b)):
            if abs(abs(z) - 1.0) > UNIT_TOL:
                raise ConstraintViolation(f"|{name}| = {abs(z)!r} is not 1 at p = {self.p}")
            tr = z + 1.0 / z
            if abs(tr.imag) > UNIT_TOL or abs(tr.real - t) > UNIT_TOL:
                raise ConstraintViolation(f"t_{name} = {t!r} does not match {name} + 1/{name}")

    @property
    def traces(self) -> tuple[float, float]:
        return self.t_a, self.t_b


def _unit(z: complex, tol: float, what: str) -> complex:
    r = abs(z)
    if abs(r - 1.0) > tol:
        raise ConstraintViolation(f"|{what}| = {r!r} differs from 1 by more than {tol}")
    return z / r


def from_alphas(alpha0: complex, alpha1: complex, alpha2: complex, p: int) -> SatakeLocal:
    """Build local data from Satake parameters normalized by a0^2 a1 a2 = 1."""
    alphas = [complex(alpha0), complex(alpha1), complex(alpha2)]
    prod = alphas[0] ** 2 * alphas[1] * alphas[2]
    if abs(prod - 1.0) > INGEST_TOL:
        raise ConstraintViolation(f"alpha0^2 alpha1 alpha2 = {prod!r}, expected 1")
    for j, al in enumerate(alphas):
        _unit(al, INGEST_TOL, f"alpha{j}")
    a = _unit(alphas[0], INGEST_TOL, "a")
    b = _unit(alphas[0] * alphas[1], INGEST_TOL, "b")
    return SatakeLocal(int(p), a, b, (a + 1 / a).real, (b + 1 / b).real)


def _root_on_circle(t: float, what: str) -> tuple[complex, float]:
    if not math.isfinite(t) or abs(t) > 2.0 + UNIT_TOL:
        raise OutOfRange(f"{what} = {t!r} outside [-2, 2]")
    t = min(2.0, max(-2.0, float(t)))
    return cmath.exp(1j * math.acos(t / 2.0)), t


def from_traces(t_a: float, t_b: float, p: int) -> SatakeLocal:
    """Local data with a, b taken on the closed upper half of the unit circle."""
    a, ta = _root_on_circle(t_a, "t_a")
    b, tb = _root_on_circle(t_b, "t_b")
    return SatakeLocal(int(p), a, b, ta, tb)


def recover_local(lambda_p: float, lambda_p2: float, p: int) -> SatakeLocal:
    """Invert lambda(p) = t_a + t_b and lambda(p^2) = (t_a+t_b)^2 - t_a t_b - 2 - 1/p.

    Returns the local with t_a >= t_b.
    """
    s = float(lambda_p)
    prod = s * s - float(lambda_p2) - 2.0 - 1.0 / p
    disc = s * s - 4.0 * prod
    if disc < 0:
        if disc < -RECOVER_TOL:
            raise NonRamanujan(f"p = {p}: complex traces (discriminant {disc:.3g})")
        disc = 0.0
    r = math.sqrt(disc)
    t_a, t_b = (s + r) / 2.0, (s - r) / 2.0
    # rounding in disc is amplified by the square root near a double root
    slack = RECOVER_TOL + math.sqrt(64 * EPS * (s * s + 4 * abs(prod) + abs(lambda_p2)))
    for name, t in (("t_a", t_a), ("t_b", t_b)):
        if abs(t) > 2.0 + slack:
            raise NonRamanujan(f"p = {p}: recovered {name} = {t:.12g} outside [-2, 2]")
    return from_traces(min(2.0, max(-2.0, t_a)), min(2.0, max(-2.0, t_b)), p)


def distinctness_margin(loc: SatakeLocal) -> tuple[float, float]:
    """Minimum pairwise distances over the nine-element spectral set and over
    {1, a, 1/a, b, 1/b}.  Zero means a coincidence."""
    a, b = loc.a, loc.b
    nine = [1, a * a, 1 / (a * a), b * b, 1 / (b * b), a * b, 1 / (a * b), a / b, b / a]
    five = [1, a, 1 / a, b, 1 / b]
    return _min_pairwise(nine), _min_pairwise(five)


def _min_pairwise(zs: list[complex]) -> float:
    z = np.asarray(zs, dtype=np.complex128)
    d = np.abs(z[:, None] - z[None, :])
    return float(d[np.triu_indices(len(z), 1)].min())


class _LocalsView(Mapping):
    """Read-only prime -> SatakeLocal view over the form's trace arrays."""

    def __init__(self, form: EigenForm):
        self._form = form

    def __getitem__(self, p: int) -> SatakeLocal:
        i = self._form.index_of(p)
        return from_traces(float(self._form.t_a[i]), float(self._form.t_b[i]), int(p))

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self._form.primes)

    def __len__(self) -> int:
        return len(self._form.primes)

    def __contains__(self, p) -> bool:
        try:
            self._form.index_of(p)
        except MissingPrime:
            return False
        return True


@dataclass(frozen=True, eq=False)
class EigenForm:
    """Satake data for every prime up to ``prime_bound``, stored as arrays."""

    label: str
    prime_bound: int
    primes: np.ndarray
    t_a: np.ndarray
    t_b: np.ndarray
    source: str = "file"
    seed: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        primes = np.asarray(self.primes, dtype=np.int64)
        t_a = np.asarray(self.t_a, dtype=np.float64)
        t_b = np.asarray(self.t_b, dtype=np.float64)
        for arr in (primes, t_a, t_b):
            arr.flags.writeable = False
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "t_a", t_a)
        object.__setattr__(self, "t_b", t_b)
        if not (len(primes) == len(t_a) == len(t_b)):
            raise ValueError("primes, t_a and t_b must have equal length")
        expected = prime_sieve(self.prime_bound)
        if len(expected) != len(primes) or not np.array_equal(expected, primes):
            missing = np.setdiff1d(expected, primes)
            if missing.size:
                raise MissingPrime(f"no data for prime {int(missing[0])} <= {self.prime_bound}")
            raise ValueError("primes must be exactly the primes <= prime_bound, increasing")
        if not (np.all(np.abs(t_a) <= 2.0) and np.all(np.abs(t_b) <= 2.0)):
            raise OutOfRange("traces outside [-2, 2]")

    @classmethod
    def from_locals(
        cls,
        label: str,
        locals_: Iterable[SatakeLocal],
        prime_bound: int | None = None,
        source: str = "file",
        seed: int | None = None,
    ) -> EigenForm:
        locs = sorted(locals_, key=lambda loc: loc.p)
        if not locs:
            raise ValueError("a form needs at least one local")
        ps = [loc.p for loc in locs]
        if len(set(ps)) != len(ps):
            raise ValueError("duplicate prime in locals")
        bound = max(ps) if prime_bound is None else int(prime_bound)
        return cls(
            label=label,
            prime_bound=bound,
            primes=np.array(ps, dtype=np.int64),
            t_a=np.array([loc.t_a for loc in locs]),
            t_b=np.array([loc.t_b for loc in locs]),
            source=source,
            seed=seed,
        )

    @property
    def locals(self) -> Mapping[int, SatakeLocal]:
        return _LocalsView(self)

    def index_of(self, p: int) -> int:
        i = int(np.searchsorted(self.primes, p))
        if i >= len(self.primes) or self.primes[i] != p:
            raise MissingPrime(f"form {self.label!r} has no data at p = {p}")
        return i

    def local(self, p: int) -> SatakeLocal:
        return self.locals[p]

    @property
    def lambda_p(self) -> np.ndarray:
        """lambda_F(p) = t_a + t_b for every prime, as an array."""
        return self.t_a + self.t_b


def synth_form(seed: int, prime_bound: int, zero_exponent: float) -> EigenForm:
    """Random Ramanujan form: angles uniform on (0, pi); lambda(p) forced to 0
    with probability min(1, 0.5 / (log p)^(1 + zero_exponent)).

    Draws are consumed three per prime in increasing order, so a larger
    ``prime_bound`` extends the form without changing the smaller primes.
    """
    if prime_bound < 2:
        raise ValueError("prime_bound must be >= 2")
    if not 0.0 <= zero_exponent < 1.0:
        raise ValueError("zero_exponent must lie in [0, 1)")
    primes = prime_sieve(prime_bound)
    draws = np.random.default_rng(seed).random((len(primes), 3))
    t_a = 2.0 * np.cos(math.pi * draws[:, 0])
    t_b = 2.0 * np.cos(math.pi * draws[:, 1])
    zero_prob = np.minimum(1.0, ZERO_RATE / np.log(primes) ** (1.0 + zero_exponent))
    forced = draws[:, 2] < zero_prob
    t_b = np.where(forced, -t_a, t_b)
    return EigenForm(
        label=f"synth-{seed}",
        prime_bound=int(prime_bound),
        primes=primes,
        t_a=t_a,
        t_b=t_b,
        source="synthetic",
        seed=int(seed),
    )


def zero_model_mean(prime_bound: int, zero_exponent: float) -> float:
    """Expected fraction of primes <= prime_bound that synth_form forces to zero."""
    primes = prime_sieve(prime_bound)
    return float(np.mean(np.minimum(1.0, ZERO_RATE / np.log(primes) ** (1.0 + zero_exponent))))
