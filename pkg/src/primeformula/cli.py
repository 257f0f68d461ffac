"""Command-line entry point.

Exit codes: 0 success/pass, 1 claim violation or verification mismatch (the
report is still printed), 2 invalid input, 3 resource ceiling exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Callable, Sequence

from . import oracle
from .classification import (
    CEILING_ENV,
    FAIL,
    bertrand_audit,
    classify_window,
    default_ceiling,
)
from .enumeration import Window, dump_values, generate_window, prime_window
from .errors import InvalidArgument, ResourceLimitError
from .wheel import PrimeBasis, formula_for, residue_signature, synthesize_crt, synthesize_elimination

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID, EXIT_CEILING = 0, 1, 2, 3


def _csv(rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(doc: object) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_synth(args, out) -> int:
    basis = PrimeBasis.first(args.r)
    if args.method == "crt":
        formula = synthesize_crt(basis)
    else:
        formula = synthesize_elimination(basis)[0]
    if args.format == "json":
        out.write(formula.to_json() + "\n")
    elif args.format == "csv":
        out.write(_csv([("j", "coefficient")] + [(j, c) for j, c in enumerate(formula.coefficients, 2)]))
    else:
        out.write(f"H_{basis.r} = {formula}\n")
    return EXIT_OK


def _window_arg(args, basis: PrimeBasis) -> Window:
    if args.window:
        return Window.parse(args.window, closed_left=args.closed_left)
    return prime_window(basis, closed_left=getattr(args, "closed_left", False))


def cmd_gen(args, out) -> int:
    basis = PrimeBasis.first(args.r)
    window = _window_arg(args, basis)
    if len(window) > args.ceiling:
        raise ResourceLimitError(f"window {window} exceeds ceiling {args.ceiling}")
    out.write(dump_values(generate_window(formula_for(basis), window), args.format))
    if args.format == "json":
        out.write("\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.r_min < 1 or args.r_max < args.r_min:
        raise InvalidArgument("need 1 <= r-min <= r-max")
    rows = []
    for r in range(args.r_min, args.r_max + 1):
        basis = PrimeBasis.first(r)
        window = prime_window(basis)
        got = generate_window(formula_for(basis), window)
        want = [p for p in oracle.sieve(window.hi) if p in window]
        rows.append({"r": r, "window": str(window), "formula": len(got), "sieve": len(want), "match": got == want})
    ok = all(row["match"] for row in rows)
    if args.format == "json":
        out.write(_json({"kind": "verify", "ok": ok, "results": rows}))
    elif args.format == "csv":
        out.write(_csv([list(rows[0])] + [list(row.values()) for row in rows]))
    else:
        for row in rows:
            status = "ok" if row["match"] else "MISMATCH"
            out.write(f"r={row['r']:<3} {row['window']:<20} formula={row['formula']:<6} sieve={row['sieve']:<6} {status}\n")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_classify(args, out) -> int:
    report = classify_window(PrimeBasis.first(args.r), args.k, ceiling=args.ceiling)
    if args.format == "json":
        out.write(report.to_json() + "\n")
    elif args.format == "csv":
        out.write(_csv([("value", "omega")] + list(report.entries)))
    else:
        out.write(
            f"r={args.r} k={args.k} window={report.window} members={len(report.entries)} "
            f"verdict={report.verdict}\n"
        )
        for w in report.witnesses:
            out.write(f"witness {w}\n")
    return EXIT_VIOLATION if report.verdict == FAIL else EXIT_OK


def cmd_audit(args, out) -> int:
    audit = bertrand_audit(PrimeBasis.first(args.r), args.k, args.s, ceiling=args.ceiling)
    if args.format == "json":
        out.write(audit.to_json() + "\n")
    elif args.format == "csv":
        out.write(_csv([("witness",)] + [(w,) for w in audit.witnesses]))
    else:
        out.write(
            f"r={args.r} k={args.k} s={args.s} precondition={'holds' if audit.precondition_holds else 'fails'} "
            f"range={audit.range} exclusions={list(audit.exclusions)} verdict={audit.verdict}\n"
        )
        for w in audit.witnesses:
            out.write(f"witness {w}\n")
    return EXIT_VIOLATION if audit.verdict == FAIL else EXIT_OK


def cmd_signature(args, out) -> int:
    if args.n < 1:
        raise InvalidArgument("n must be >= 1")
    basis = PrimeBasis.first(args.r)
    sig = residue_signature(args.n, basis)
    doc = {"n": str(args.n), "r": basis.r, "in_H": sig is not None}
    if sig is not None:
        doc["h"] = [str(h) for h in sig[0]]
        doc["t"] = str(sig[1])
    if args.format == "json":
        out.write(_json(doc))
    elif args.format == "csv":
        out.write(_csv([list(doc), [";".join(v) if isinstance(v, list) else v for v in doc.values()]]))
    elif sig is None:
        out.write(f"{args.n}: NotInH (divisible by one of {list(basis.primes)})\n")
    else:
        out.write(f"{args.n}: h={sig[0]} t={sig[1]}\n")
    return EXIT_OK


def _timed(fn: Callable[[], list], repeat: int) -> tuple[float, int]:
    best, count = float("inf"), 0
    for _ in range(repeat):
        start = time.perf_counter()
        count = len(fn())
        best = min(best, time.perf_counter() - start)
    return best, count


def cmd_bench(args, out) -> int:
    basis = PrimeBasis.first(args.r)
    window = _window_arg(args, basis)
    if len(window) > args.ceiling:
        raise ResourceLimitError(f"window {window} exceeds ceiling {args.ceiling}")
    formula = formula_for(basis)
    first, last = window.int_bounds()
    methods = {
        "generate_window": lambda: generate_window(formula, window),
        "hr_scan": lambda: oracle.hr_scan(basis, window, ceiling=args.ceiling),
        "sieve": lambda: [p for p in oracle.sieve(max(last, 2)) if p >= first],
    }
    rows = [("method", "r", "window", "seconds", "count")]
    for name, fn in methods.items():
        seconds, count = _timed(fn, args.repeat)
        rows.append((name, basis.r, str(window), f"{seconds:.6f}", count))
    out.write(_csv(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="primeformula", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--ceiling",
        type=int,
        default=None,
        help=f"max window width (default from ${CEILING_ENV} or 10^8)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        return p

    p = add("synth", cmd_synth, "print the formula for the first r primes")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--method", choices=("elimination", "crt"), default="elimination")

    p = add("gen", cmd_gen, "list formula values in a window")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--window", help="LO..HI (default: the prime window)")
    p.add_argument("--closed-left", action="store_true")

    p = add("verify", cmd_verify, "compare the prime window against a sieve")
    p.add_argument("--r-min", type=int, required=True)
    p.add_argument("--r-max", type=int, required=True)

    p = add("classify", cmd_classify, "count prime factors across [p^k, p^(k+1))")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("audit", cmd_audit, "audit the widened range claim")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)

    p = add("signature", cmd_signature, "offsets and t that produce n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = add("bench", cmd_bench, "time the formula against the scan and sieve oracles")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--window", help="LO..HI (default: the prime window)")
    p.add_argument("--closed-left", action="store_true")
    p.add_argument("--repeat", type=int, default=3)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.ceiling is None:
        args.ceiling = default_ceiling()
    if getattr(args, "r", 1) < 1:
        print("error: --r must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args, out)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CEILING
    except (InvalidArgument, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
