"""Plain-text persistence of eigenform data.

File layout::

    #SIEGEL-FORM v1 label=<label> route=<traces|eigen> prime_bound=<N> normalization=normalized
    2 <t_a or lambda(p)> <t_b or lambda(p^2)>
    3 ...

Rows are whitespace separated, one per prime, in any order.  Blank lines and
further lines starting with ``#`` are ignored.  Values must already be
normalized (|t| <= 2); dividing out a weight-dependent power of p is left to
the caller.
"""

from __future__ import annotations

import math
from os import PathLike
from pathlib import Path

import numpy as np

from .errors import MissingPrime, NonRamanujan, OutOfRange, ParseError
from .primes import is_prime, prime_sieve
from .satake import EigenForm, from_traces, recover_local

MAGIC = "#SIEGEL-FORM"
VERSION = "v1"
ROUTES = ("traces", "eigen")
NORMALIZATION = "normalized"


def _parse_header(line: str) -> dict[str, str]:
    parts = line.split()
    if len(parts) < 2 or parts[0] != MAGIC:
        raise ParseError(f"expected header starting with {MAGIC!r}", 1)
    if parts[1] != VERSION:
        raise ParseError(f"unsupported version {parts[1]!r}", 1)
    fields: dict[str, str] = {}
    for item in parts[2:]:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ParseError(f"malformed header field {item!r}", 1)
        fields[key] = value
    for key in ("label", "route", "prime_bound"):
        if key not in fields:
            raise ParseError(f"header lacks {key}=", 1)
    if fields["route"] not in ROUTES:
        raise ParseError(f"route must be one of {ROUTES}, got {fields['route']!r}", 1)
    if fields.get("normalization", NORMALIZATION) != NORMALIZATION:
        raise ParseError("only normalized data (|t| <= 2) is accepted; rescale a_F(p) by p^(k - 3/2) first", 1)
    return fields


def _parse_int(text: str, lineno: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not an integer", lineno) from None


def _parse_float(text: str, lineno: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"{text!r} is not a number", lineno) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value {text!r}", lineno)
    return v


def load_form(path: str | PathLike) -> EigenForm:
    """Read a form file, validating every row and full prime coverage."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    fields = _parse_header(lines[0])
    bound = _parse_int(fields["prime_bound"], 1, "prime_bound")
    route = fields["route"]

    rows: dict[int, tuple[float, float]] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split()
        if len(cols) != 3:
            raise ParseError(f"expected 3 columns, got {len(cols)}", lineno)
        p = _parse_int(cols[0], lineno, "prime")
        if p < 2 or not is_prime(p):
            raise ParseError(f"{p} is not prime", lineno)
        if p > bound:
            raise ParseError(f"prime {p} exceeds prime_bound {bound}", lineno)
        if p in rows:
            raise ParseError(f"duplicate row for p = {p}", lineno)
        u, v = _parse_float(cols[1], lineno), _parse_float(cols[2], lineno)
        try:
            loc = from_traces(u, v, p) if route == "traces" else recover_local(u, v, p)
        except (OutOfRange, NonRamanujan) as exc:
            raise NonRamanujan(f"line {lineno}: {exc}") from exc
        rows[p] = (loc.t_a, loc.t_b)

    expected = prime_sieve(bound)
    missing = [int(p) for p in expected if int(p) not in rows]
    if missing:
        raise MissingPrime(f"no row for prime {missing[0]} <= prime_bound {bound}")
    t = np.array([rows[int(p)] for p in expected]).reshape(-1, 2)
    return EigenForm(fields["label"], bound, expected, t[:, 0], t[:, 1], source="file")


def save_form(form: EigenForm, path: str | PathLike, route: str = "traces") -> None:
    """Write ``form`` so that ``load_form`` reproduces its traces.

    The eigen route stores (lambda(p), lambda(p^2)); reloading returns each
    pair ordered as t_a >= t_b.
    """
    if route not in ROUTES:
        raise ValueError(f"route must be one of {ROUTES}")
    if len(form.primes) == 0:
        raise ValueError("refusing to save a form without primes")
    if not form.label or any(c.isspace() for c in form.label):
        raise ValueError(f"label {form.label!r} must be non-empty without whitespace")
    out = [f"{MAGIC} {VERSION} label={form.label} route={route} prime_bound={form.prime_bound} normalization={NORMALIZATION}"]
    for p, ta, tb in zip(form.primes.tolist(), form.t_a.tolist(), form.t_b.tolist()):
        if route == "traces":
            u, v = ta, tb
        else:
            s = ta + tb
            u, v = s, s * s - ta * tb - 2.0 - 1.0 / p
        out.append(f"{p} {u!r} {v!r}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
