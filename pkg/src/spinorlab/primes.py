"""Prime enumeration and factorization helpers."""

from __future__ import annotations

import numpy as np
from sympy import factorint, isprime


def prime_sieve(n: int) -> np.ndarray:
    """Return all primes <= n as an int64 array (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, int(n**0.5) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def is_prime(n: int) -> bool:
    return bool(isprime(int(n)))


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as a list of (p, e), increasing in p."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return sorted((int(p), int(e)) for p, e in factorint(int(n)).items())
