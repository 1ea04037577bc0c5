"""Command-line interface: ``spinorlab <command> [options]``.

Exit status is 0 on success, 1 when a computation or certificate fails and 2
for usage errors or guardrail violations.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import bfree, closedforms, hecke, moments, signs
from .errors import Degenerate, SpinorError
from .ingest import load_form
from .satake import EigenForm, synth_form

MAX_X = 10**8
MAX_ORDER = 200
MAX_PRIME_BOUND = 10**7
DEFAULT_DELTA = 0.05
CERT_TOL = 1e-8
DECOMP_TOL = 1e-9


class UsageError(Exception):
    """Bad configuration; maps to exit status 2."""


def fmt_float(v: float) -> str:
    """12 significant digits; scientific notation for |v| < 1e-3 or |v| >= 1e6."""
    v = float(v)
    if v == 0.0 or not math.isfinite(v):
        return repr(v) if not math.isfinite(v) else "0"
    sci = f"{v:.11e}"
    r = abs(float(sci))  # decide after rounding so 999999.9999999 becomes 1e+06
    if r < 1e-3 or r >= 1e6:
        return sci
    return f"{v:.12g}"


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        out = []
        for row in rows:
            rec = {}
            for k, v in row.items():
                if isinstance(v, (float, np.floating)) and math.isfinite(v):
                    rec[k] = float(fmt_float(v))
                elif isinstance(v, (int, np.integer)) and not isinstance(v, (bool, np.bool_)):
                    rec[k] = int(v)
                elif isinstance(v, (bool, np.bool_)):
                    rec[k] = bool(v)
                else:
                    rec[k] = str(v)
            out.append(rec)
        return json.dumps(out, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow(_cell(v) for v in row.values())
    return buf.getvalue()


def _int_list(text: str, what: str, n: int | None = None) -> list[int]:
    try:
        vals = [int(float(s)) if "e" in s.lower() else int(s) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated integers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"{what}: expected {n} values, got {len(vals)}")
    return vals


def _parse_int(text: str) -> int:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


@dataclass(frozen=True)
class SynthSpec:
    seed: int
    bound: int | None
    delta: float


def _parse_synth(text: str) -> SynthSpec:
    parts = text.split(",")
    if not 1 <= len(parts) <= 3:
        raise UsageError("--synth takes seed[,bound[,delta]]")
    try:
        seed = int(parts[0])
        bound = int(float(parts[1])) if len(parts) > 1 and parts[1] else None
        delta = float(parts[2]) if len(parts) > 2 else DEFAULT_DELTA
    except ValueError:
        raise UsageError(f"--synth: cannot parse {text!r}") from None
    if bound is not None and not 2 <= bound <= MAX_PRIME_BOUND:
        raise UsageError(f"--synth: prime bound must lie in [2, {MAX_PRIME_BOUND}]")
    if not 0.0 <= delta < 1.0:
        raise UsageError("--synth: delta must lie in [0, 1)")
    return SynthSpec(seed, bound, delta)


def _form(args, needed_bound: int) -> EigenForm:
    """The configured form; synthetic forms default to the bound the command needs."""
    if args.form is not None:
        form = load_form(args.form)
        if form.prime_bound > MAX_PRIME_BOUND:
            raise UsageError(f"form prime_bound exceeds {MAX_PRIME_BOUND}")
        return form
    if args.synth is None:
        raise UsageError("one of --form or --synth is required")
    spec = _parse_synth(args.synth)
    bound = max(2, needed_bound) if spec.bound is None else spec.bound
    if bound > MAX_PRIME_BOUND:
        raise UsageError(f"prime bound {bound} exceeds {MAX_PRIME_BOUND}")
    return synth_form(spec.seed, bound, spec.delta)


def _check_x(x: int) -> int:
    if not 1 <= x <= MAX_X:
        raise UsageError(f"--x must lie in [1, {MAX_X}]")
    return x


def _check_order(N: int) -> int:
    if not 0 <= N <= MAX_ORDER:
        raise UsageError(f"--order must lie in [0, {MAX_ORDER}]")
    return N


def cmd_verify(args) -> list[dict]:
    N = _check_order(args.order if args.order is not None else 40)
    form = _form(args, 100)
    primes = form.primes if args.prime is None else [args.prime]
    results: dict[str, list] = {k: [0.0, 0, 0] for k in ("prop1", "prop2", "lemma_A2", "lemma_B", "lemma_C", "decomposition")}

    def record(name: str, err: float) -> None:
        r = results[name]
        r[0] = max(r[0], err)
        r[1] += 1

    for p in primes:
        loc = form.local(int(p))
        q = None
        if args.corrupt_q2:
            q = list(closedforms.q_coeffs(loc).q)
            q[2] += 1e-3
        record("prop1", closedforms.prop1_error(loc, N, q))
        record("prop2", closedforms.prop2_error(loc, N))
        for which in closedforms.Which:
            try:
                record(f"lemma_{which.value}", closedforms.lemma_error(loc, which, N))
            except Degenerate:
                results[f"lemma_{which.value}"][2] += 1
        record("decomposition", closedforms.decomposition_check(loc, None, N))

    rows = []
    for name, (err, checked, skipped) in results.items():
        tol = DECOMP_TOL if name == "decomposition" else CERT_TOL
        rows.append(
            {
                "identity": name,
                "order": N,
                "max_error": err,
                "tolerance": tol,
                "locals_checked": checked,
                "locals_skipped": skipped,
                "status": "pass" if err <= tol else "fail",
            }
        )
    return rows


def cmd_eigen(args) -> list[dict]:
    x = _check_x(args.x if args.x is not None else 100)
    form = _form(args, x)
    lam = hecke.global_table(form, x, "lambda").values
    a = hecke.global_table(form, x, "a").values
    return [{"n": n, "lambda": lam[n], "a": a[n]} for n in range(1, x + 1)]


def cmd_moments(args) -> list[dict]:
    p = args.prime if args.prime is not None else 2
    form = _form(args, p)
    exps = _int_list(args.grid, "--grid") if args.grid else list(range(10, 61, 5))
    if any(k < 1 for k in exps):
        raise UsageError("--grid exponents must be >= 1")
    report = moments.moment_report(form.local(p), [p**k for k in exps])
    return report.rows()


def _decades(x: int) -> list[int]:
    xs = [10**k for k in range(1, 9) if 10**k < x]
    return xs + [x]


def cmd_signs(args) -> list[dict]:
    x = _check_x(args.x if args.x is not None else 10**4)
    form = _form(args, x)
    table = hecke.global_table(form, x)
    rho = signs.rho_F(form, min(10**5, form.prime_bound))
    return [
        {
            "x": c.x,
            "n_star": c.n_star,
            "n_plus": c.n_plus,
            "n_minus": c.n_minus,
            "rho_estimate": rho.rho,
        }
        for c in signs.sign_counts_along(form, _decades(x), table)
    ]


def cmd_bfree(args) -> list[dict]:
    x, y = _int_list(args.window, "--window", 2) if args.window else (10**6, 10**4)
    a, q = _int_list(args.progression, "--progression", 2) if args.progression else (1, 1)
    if x < 0 or y < 1 or x + y > MAX_X:
        raise UsageError(f"--window needs x >= 0, y >= 1 and x + y <= {MAX_X}")
    if q < 1 or not 1 <= a <= q:
        raise UsageError("--progression needs q >= 1 and 1 <= a <= q")
    if args.bset == "form":
        B = bfree.build_BF(_form(args, x + y), x + y)
    else:
        B = bfree.prime_squares(x + y)
    count = bfree.sieve_progression(B, x, y, a, q)
    return [{"x": x, "y": y, "q": q, "a": a, "count": count, "density": count / y}]


def cmd_constants(args) -> list[dict]:
    phi0, K = signs.K_constant()
    return [{"name": "phi0", "value": phi0}, {"name": "K", "value": K}]


COMMANDS = {
    "verify": cmd_verify,
    "eigen": cmd_eigen,
    "moments": cmd_moments,
    "signs": cmd_signs,
    "bfree": cmd_bfree,
    "constants": cmd_constants,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinorlab", description="Spinor eigenvalue experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--form", help="form file")
        src.add_argument("--synth", metavar="SEED[,BOUND[,DELTA]]", help="synthetic form")
        p.add_argument("--x", type=_parse_int)
        p.add_argument("--order", type=_parse_int, help="series order N")
        p.add_argument("--grid", help="comma-separated exponents k, x = p^k")
        p.add_argument("--prime", type=_parse_int)
        p.add_argument("--window", metavar="X,Y")
        p.add_argument("--progression", metavar="A,Q")
        p.add_argument("--bset", choices=("squares", "form"), default="squares")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--corrupt-q2", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rows = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"spinorlab: error: {exc}", file=sys.stderr)
        return 2
    except (SpinorError, ValueError, ArithmeticError, OSError) as exc:
        print(f"spinorlab: {args.command} failed: {exc}", file=sys.stderr)
        return 1
    text = render(rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r["identity"] for r in rows if r.get("status") == "fail"]
    if failed:
        print(f"spinorlab: certificate failed: {failed[0]}", file=sys.stderr)
        return 1
    return 0
