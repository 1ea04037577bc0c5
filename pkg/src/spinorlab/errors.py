"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class SpinorError(Exception):
    """Base class for every computational failure raised by spinorlab."""


class ConstraintViolation(SpinorError, ValueError):
    """Satake parameters break the product normalization or unit modulus."""


class OutOfRange(SpinorError, ValueError):
    """A trace lies outside [-2, 2]."""


class NonRamanujan(SpinorError, ValueError):
    """Eigenvalue data recovers traces off the interval [-2, 2]."""


class Degenerate(SpinorError, ValueError):
    """Local parameters fall inside a distinctness gate."""


class OrderMismatch(SpinorError, ValueError):
    """Binary series operation on operands of different truncation order."""


class NonUnitDivisor(SpinorError, ZeroDivisionError):
    """Series division by a series whose constant term vanishes."""


class MissingPrime(SpinorError, KeyError):
    """A prime needed by the computation has no Satake data."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class CutoffTooLarge(SpinorError, ValueError):
    """A cutoff exceeds the guardrail for table materialization."""


class NotCoprime(SpinorError, ValueError):
    """Two members of a B-set share a factor."""

    def __init__(self, pair: tuple[int, int]):
        self.pair = pair
        super().__init__(f"members {pair[0]} and {pair[1]} are not coprime")


class NotSorted(SpinorError, ValueError):
    """B-set members are not strictly increasing or not all > 1."""


class BoundTooSmall(SpinorError, ValueError):
    """The B-set is materialized to a bound below the sieve window."""


class BadResidue(SpinorError, ValueError):
    """Residue class violates ((a, q), b) = 1 for some member b."""


class ParseError(SpinorError, ValueError):
    """Malformed form file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
