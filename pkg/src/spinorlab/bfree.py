"""B-free integers: validated B-sets, the form-derived set B_F, windowed sieves and gaps.

A B-set is a pairwise coprime, strictly increasing set of integers > 1.  An
integer is B-free when no member divides it.  Sets are infinite in principle
and are materialized here up to a working bound; a sieve on (x, x + y] only
ever needs members <= x + y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadResidue, BoundTooSmall, MissingPrime, NotCoprime, NotSorted
from .hecke import GlobalTable, global_table
from .primes import prime_sieve
from .satake import EigenForm
from .signs import ZERO_SNAP

MAX_WINDOW = 10**8
GCD_BLOCK = 2048


@dataclass(frozen=True)
class BSet:
    members: np.ndarray
    bound: int
    generator: str
    reciprocal_partial: float

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, b) -> bool:
        i = int(np.searchsorted(self.members, b))
        return i < len(self.members) and int(self.members[i]) == b

    def up_to(self, n: int) -> np.ndarray:
        return self.members[: int(np.searchsorted(self.members, n, side="right"))]


def _freeze(members, bound: int, generator: str) -> BSet:
    arr = np.asarray(members, dtype=np.int64).copy()
    arr.flags.writeable = False
    recip = math.fsum(1.0 / arr.astype(np.float64)) if arr.size else 0.0
    return BSet(arr, int(bound), generator, recip)


def _check_coprime(arr: np.ndarray) -> None:
    k = arr.size
    for lo in range(0, k, GCD_BLOCK):
        block = arr[lo : lo + GCD_BLOCK]
        g = np.gcd.outer(block, arr[lo:])
        # only pairs (i, j) with j > i
        g[np.tril_indices(len(block), 0, g.shape[1])] = 1
        bad = np.argwhere(g > 1)
        if bad.size:
            i, j = bad[0]
            raise NotCoprime((int(block[i]), int(arr[lo + j])))


def validate_bset(members, bound: int, generator: str = "explicit") -> BSet:
    """Check sortedness, range (1, bound] and pairwise coprimality of a finite B-set."""
    arr = np.asarray(list(members), dtype=np.int64)
    if arr.size:
        if np.any(np.diff(arr) <= 0) or arr[0] <= 1:
            raise NotSorted("members must be strictly increasing integers > 1")
        if arr[-1] > bound:
            raise ValueError(f"member {int(arr[-1])} exceeds the bound {bound}")
    _check_coprime(arr)
    return _freeze(arr, bound, generator)


def prime_squares(bound: int) -> BSet:
    """{p^2 : p^2 <= bound}; B-free then means squarefree."""
    ps = prime_sieve(math.isqrt(bound))
    return _freeze(ps * ps, bound, "prime-squares")


def zero_primes(form: EigenForm, bound: int) -> np.ndarray:
    """Primes p <= bound with lambda_F(p) = 0 (zero-snap rule)."""
    if bound > form.prime_bound:
        raise MissingPrime(f"form covers primes <= {form.prime_bound}, need {bound}")
    k = int(np.searchsorted(form.primes, bound, side="right"))
    lam = form.lambda_p[:k]
    return form.primes[:k][np.abs(lam) <= ZERO_SNAP]


def build_BF(form: EigenForm, bound: int) -> BSet:
    """Zero primes of the form together with squares of its non-zero primes, up to ``bound``.

    Every member is a power of its own prime, so coprimality holds without
    pairwise checks.
    """
    zeros = zero_primes(form, bound)
    small = prime_sieve(math.isqrt(bound))
    squares = np.setdiff1d(small, zeros) ** 2
    return _freeze(np.union1d(zeros, squares), bound, "form-derived")


def _window_mask(members: np.ndarray, x: int, y: int) -> np.ndarray:
    """True at offset i iff x + 1 + i is B-free."""
    free = np.ones(y, dtype=bool)
    hi = x + y
    members = members[members <= hi]
    dense = members[members <= y]
    for b in dense.tolist():
        start = (x // b + 1) * b
        free[start - x - 1 :: b] = False
    # members above y hit the window at most once
    sparse = members[members > y]
    if sparse.size:
        first = (x // sparse + 1) * sparse
        first = first[first <= hi]
        free[first - x - 1] = False
    return free


def _check_window(B: BSet, x: int, y: int) -> None:
    if x < 0 or y < 1:
        raise ValueError("need x >= 0 and y >= 1")
    if y > MAX_WINDOW:
        raise ValueError(f"window length {y} exceeds {MAX_WINDOW}")
    if B.bound < x + y:
        raise BoundTooSmall(f"B-set materialized to {B.bound}, window reaches {x + y}")


def sieve_interval(B: BSet, x: int, y: int) -> tuple[int, np.ndarray]:
    """(count, survivors) of B-free n in (x, x + y]; memory is O(y)."""
    _check_window(B, x, y)
    free = _window_mask(B.members, x, y)
    survivors = np.flatnonzero(free) + x + 1
    return int(survivors.size), survivors


def progression_survivors(B: BSet, x: int, y: int, a: int, q: int) -> np.ndarray:
    """B-free n in (x, x + y] with n = a (mod q)."""
    _check_window(B, x, y)
    if q < 1 or not 1 <= a <= q:
        raise ValueError("need q >= 1 and 1 <= a <= q")
    g0 = math.gcd(a, q)
    members = B.up_to(x + y)
    if g0 > 1:
        bad = members[np.gcd(members, g0) > 1]
        if bad.size:
            raise BadResidue(f"gcd((a, q), {int(bad[0])}) > 1 for a = {a}, q = {q}")
    # n = a + q k with k in [k0, k1]
    k0 = max(0, (x - a) // q + 1)
    k1 = (x + y - a) // q
    if k1 < k0:
        return np.zeros(0, dtype=np.int64)
    free = np.ones(k1 - k0 + 1, dtype=bool)
    for b in members.tolist():
        if math.gcd(q, b) > 1:
            # q k = -a (mod b) has no solution since gcd(q, b) does not divide a
            continue
        r = (-a * pow(q, -1, b)) % b
        start = k0 + (r - k0) % b
        free[start - k0 :: b] = False
    return a + q * (np.flatnonzero(free) + k0)


def sieve_progression(B: BSet, x: int, y: int, a: int, q: int) -> int:
    """Count of B-free n = a (mod q) in (x, x + y]."""
    return int(progression_survivors(B, x, y, a, q).size)


def brute_force_free(members, x: int, y: int) -> np.ndarray:
    """Per-n trial division oracle: B-free n in (x, x + y]."""
    ms = [int(b) for b in members]
    return np.array([n for n in range(x + 1, x + y + 1) if all(n % b for b in ms)], dtype=np.int64)


@dataclass(frozen=True)
class GapStat:
    n: int
    i_F: int
    incomplete: bool = False


def _zero_mask(table: GlobalTable) -> np.ndarray:
    return np.abs(table.values) <= ZERO_SNAP


def gap_iF(form: EigenForm, n: int, scan_limit: int, table: GlobalTable | None = None) -> GapStat:
    """Length of the run of vanishing lambda_F(n + i), i = 1, 2, ..., capped at ``scan_limit``."""
    if n < 0 or scan_limit < 1:
        raise ValueError("need n >= 0 and scan_limit >= 1")
    top = n + scan_limit
    if table is None or table.x < top:
        table = global_table(form, top)
    zero = _zero_mask(table)[n + 1 : top + 1]
    nonzero = np.flatnonzero(~zero)
    if nonzero.size == 0:
        return GapStat(n, scan_limit, incomplete=True)
    return GapStat(n, int(nonzero[0]))


def max_gap(form: EigenForm, N: int, scan_limit: int = 1000, table: GlobalTable | None = None) -> GapStat:
    """The n <= N maximizing i_F(n) (smallest such n)."""
    top = N + scan_limit
    if table is None or table.x < top:
        table = global_table(form, top)
    zero = _zero_mask(table)[: top + 1].copy()
    zero[0] = False
    # run[m] = number of consecutive zeros starting at m
    run = np.zeros(top + 2, dtype=np.int64)
    idx = np.flatnonzero(zero)
    if idx.size:
        # split zero positions into maximal consecutive blocks
        breaks = np.flatnonzero(np.diff(idx) > 1)
        starts = idx[np.r_[0, breaks + 1]]
        ends = idx[np.r_[breaks, idx.size - 1]]
        for s, e in zip(starts.tolist(), ends.tolist()):
            run[s : e + 1] = np.arange(e - s + 1, 0, -1)
    gaps = run[1 : N + 2]  # i_F(n) = run[n + 1] for n = 0..N
    n_best = int(np.argmax(gaps))
    best = int(gaps[n_best])
    incomplete = best > 0 and n_best + best >= top
    return GapStat(n_best, min(best, scan_limit), incomplete)
