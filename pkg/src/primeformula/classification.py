"""Counting prime factors of formula values and auditing the range claims.

A "k-th number" here is an integer with exactly k prime factors counted with
multiplicity, so 49 = 7*7 is a 2nd number. The claims checked are

* every member of H_r in ``[p_{r+1}^k, p_{r+1}^{k+1})`` has at most k prime
  factors (:func:`classify_window`), and
* the widened version over ``[p_{r+s}^k, p_{r+s}^{k+1})`` once the products
  of k+1 primes from ``p_{r+1}..p_{r+s}`` are set aside, provided
  ``p_{r+1} > 2^((k+1)(s-1))`` (:func:`bertrand_audit`).

Both report what happens at one instance; neither proves anything in general.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import prod
from typing import Mapping

from . import oracle
from .enumeration import Window, generate_window
from .errors import InvalidArgument, ResourceLimitError
from .wheel import PrimeBasis, formula_for

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not_applicable"

CEILING_ENV = "PRIMEFORMULA_CEILING"
DEFAULT_CEILING = 10**8


def default_ceiling() -> int:
    raw = os.environ.get(CEILING_ENV)
    return int(raw) if raw else DEFAULT_CEILING


def omega(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    if n < 2:
        raise InvalidArgument(f"omega needs n >= 2, got {n}")
    return len(oracle.factorize(n))


def _check_width(window: Window, ceiling: int | None) -> None:
    ceiling = default_ceiling() if ceiling is None else ceiling
    if len(window) > ceiling:
        raise ResourceLimitError(f"window {window} holds {len(window)} integers, ceiling is {ceiling}")


@dataclass(frozen=True)
class ClassReport:
    primes: tuple[int, ...]
    window: Window
    claim_bound: int
    entries: tuple[tuple[int, int], ...]
    verdict: str
    witnesses: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "kind": "class_report",
            "r": len(self.primes),
            "primes": list(self.primes),
            "k": self.claim_bound,
            "window": self.window.to_dict(),
            "verdict": self.verdict,
            "witnesses": [str(w) for w in self.witnesses],
            "entries": [[str(v), w] for v, w in self.entries],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc: Mapping) -> ClassReport:
        return cls(
            tuple(doc["primes"]),
            Window.from_dict(doc["window"]),
            int(doc["k"]),
            tuple((int(v), int(w)) for v, w in doc["entries"]),
            doc["verdict"],
            tuple(int(w) for w in doc["witnesses"]),
        )


def classify_window(basis: PrimeBasis, k: int, ceiling: int | None = None) -> ClassReport:
    if k < 1:
        raise InvalidArgument(f"k must be >= 1, got {k}")
    if basis.r < 2:
        raise InvalidArgument("classify_window needs r >= 2")
    q = basis.next_prime()
    window = Window.half_open(q**k, q ** (k + 1))
    _check_width(window, ceiling)
    entries = tuple((n, omega(n)) for n in generate_window(formula_for(basis), window))
    witnesses = tuple(n for n, w in entries if w > k)
    return ClassReport(basis.primes, window, k, entries, FAIL if witnesses else PASS, witnesses)


@dataclass(frozen=True)
class ClaimAudit:
    primes: tuple[int, ...]
    k: int
    s: int
    precondition_holds: bool
    range: Window
    exclusions: tuple[int, ...]
    verdict: str
    witnesses: tuple[int, ...]
    checked: int = 0

    def to_dict(self) -> dict:
        return {
            "kind": "claim_audit",
            "r": len(self.primes),
            "primes": list(self.primes),
            "k": self.k,
            "s": self.s,
            "precondition_holds": self.precondition_holds,
            "range": self.range.to_dict(),
            "exclusions": [str(e) for e in self.exclusions],
            "verdict": self.verdict,
            "witnesses": [str(w) for w in self.witnesses],
            "checked": self.checked,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc: Mapping) -> ClaimAudit:
        return cls(
            tuple(doc["primes"]),
            int(doc["k"]),
            int(doc["s"]),
            bool(doc["precondition_holds"]),
            Window.from_dict(doc["range"]),
            tuple(int(e) for e in doc["exclusions"]),
            doc["verdict"],
            tuple(int(w) for w in doc["witnesses"]),
            int(doc.get("checked", 0)),
        )


def exclusion_products(basis: PrimeBasis, k: int, s: int, window: Window) -> tuple[int, ...]:
    """Products of k+1 primes drawn (with repetition) from ``p_{r+1}..p_{r+s}``, inside ``window``."""
    extra = oracle.first_primes(basis.r + s)[basis.r :]
    products = {prod(c) for c in combinations_with_replacement(extra, k + 1)}
    return tuple(sorted(n for n in products if n in window))


def bertrand_audit(basis: PrimeBasis, k: int, s: int, ceiling: int | None = None) -> ClaimAudit:
    if k < 2 or s < 1:
        raise InvalidArgument(f"bertrand_audit needs k >= 2 and s >= 1, got k={k}, s={s}")
    extra = oracle.first_primes(basis.r + s)[basis.r :]
    holds = extra[0] > 2 ** ((k + 1) * (s - 1))
    top = extra[-1]
    window = Window.half_open(top**k, top ** (k + 1))
    exclusions = exclusion_products(basis, k, s, window)
    if not holds:
        return ClaimAudit(basis.primes, k, s, False, window, exclusions, NOT_APPLICABLE, ())
    _check_width(window, ceiling)
    excluded = set(exclusions)
    members = [n for n in generate_window(formula_for(basis), window) if n not in excluded]
    witnesses = tuple(n for n in members if omega(n) > k)
    return ClaimAudit(
        basis.primes, k, s, True, window, exclusions, FAIL if witnesses else PASS, witnesses, len(members)
    )
