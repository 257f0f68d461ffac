"""Enumerating the values of the formula inside integer windows."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod
from typing import Iterator, Mapping, Sequence

from .errors import InvalidArgument
from .wheel import PrimeBasis, WheelFormula, formula_for


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int
    lo_inclusive: bool = False
    hi_inclusive: bool = False

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise InvalidArgument(f"window lo {self.lo} > hi {self.hi}")

    @classmethod
    def half_open(cls, lo: int, hi: int) -> Window:
        return cls(lo, hi, True, False)

    @classmethod
    def parse(cls, text: str, closed_left: bool = False) -> Window:
        """Parse ``LO..HI``; open at both ends unless ``closed_left``."""
        m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
        if not m:
            raise InvalidArgument(f"window must look like LO..HI, got {text!r}")
        return cls(int(m[1]), int(m[2]), closed_left, False)

    def int_bounds(self) -> tuple[int, int]:
        """First and last integer inside; ``last < first`` for an empty window."""
        first = self.lo if self.lo_inclusive else self.lo + 1
        last = self.hi if self.hi_inclusive else self.hi - 1
        return first, last

    def __len__(self) -> int:
        first, last = self.int_bounds()
        return max(0, last - first + 1)

    def __contains__(self, n: int) -> bool:
        first, last = self.int_bounds()
        return first <= n <= last

    def __str__(self) -> str:
        return f"{'[' if self.lo_inclusive else '('}{self.lo}, {self.hi}{']' if self.hi_inclusive else ')'}"

    def to_dict(self) -> dict:
        return {
            "lo": str(self.lo),
            "hi": str(self.hi),
            "lo_inclusive": self.lo_inclusive,
            "hi_inclusive": self.hi_inclusive,
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> Window:
        return cls(int(doc["lo"]), int(doc["hi"]), bool(doc["lo_inclusive"]), bool(doc["hi_inclusive"]))


@dataclass(frozen=True)
class ResidueSet:
    primorial: int
    residues: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.residues)

    def __iter__(self) -> Iterator[int]:
        return iter(self.residues)


def totient_of_primorial(basis: PrimeBasis) -> int:
    return prod(p - 1 for p in basis.primes)


def _offset_values(formula: WheelFormula) -> list[int]:
    # lexicographic in (h_2..h_r): later offsets vary fastest
    values = [formula.constant]
    for c, p in zip(formula.coefficients, formula.basis.primes[1:]):
        steps = [c * k for k in range(p - 1)]
        values = [v + s for v in values for s in steps]
    return values


def residue_map(formula: WheelFormula) -> Iterator[tuple[tuple[int, ...], int]]:
    """Pairs ``(h, evaluate(formula, h, 0) mod P)`` in lexicographic h order."""
    P = formula.primorial
    tuples = product(*(range(1, p) for p in formula.basis.primes[1:]))
    for h, v in zip(tuples, _offset_values(formula)):
        yield h, v % P


@lru_cache(maxsize=16)
def canonical_residues(formula: WheelFormula) -> ResidueSet:
    P = formula.primorial
    return ResidueSet(P, tuple(sorted(v % P for v in _offset_values(formula))))


def prefix_formula(formula: WheelFormula, s: int) -> WheelFormula:
    """The formula for the first ``s`` primes, read off the full one.

    Reducing C_j mod p_1...p_s keeps its defining congruences, so this is the
    canonical prefix formula without re-synthesis.
    """
    basis = formula.basis.prefix(s)
    return WheelFormula(basis, tuple(c % basis.primorial for c in formula.coefficients[: s - 1]))


def _choose_level(formula: WheelFormula, span: int) -> int:
    best, best_cost = 1, None
    phi, P = 1, 1
    for s, p in enumerate(formula.basis.primes, start=1):
        phi *= p - 1
        P *= p
        cost = phi * (span // P + 2) + phi
        if best_cost is None or cost < best_cost:
            best, best_cost = s, cost
    return best


def generate_window(formula: WheelFormula, window: Window) -> list[int]:
    """Sorted formula values lying in ``window``.

    For every residue the admissible ``t`` range is solved directly. When the
    window is much narrower than the primorial, the values are generated from a
    shorter prefix of the basis (fewer residues) and then kept only if each
    remaining prime admits an offset for them, i.e. ``-n mod p_j`` is nonzero.
    """
    first, last = window.int_bounds()
    if last < first:
        return []
    s = _choose_level(formula, last - first + 1)
    gen = formula if s == formula.r else prefix_formula(formula, s)
    P = gen.primorial
    rest = formula.basis.primes[s:]
    out = []
    for rho in canonical_residues(gen):
        t_lo = -((rho - first) // P)  # ceil((first - rho) / P)
        t_hi = (last - rho) // P
        for t in range(t_lo, t_hi + 1):
            n = rho + t * P
            if all(n % p for p in rest):
                out.append(n)
    out.sort()
    return out


def prime_window(basis: PrimeBasis, closed_left: bool = False) -> Window:
    """``(p_r, p_{r+1}^2)``, or ``[p_{r+1}, p_{r+1}^2)`` with ``closed_left``.

    Both hold the same integers of H_r because nothing in ``(p_r, p_{r+1})``
    survives.
    """
    q = basis.next_prime()
    if closed_left:
        return Window(q, q * q, True, False)
    return Window(basis.primes[-1], q * q)


def primes_by_formula(basis: PrimeBasis) -> list[int]:
    return generate_window(formula_for(basis), prime_window(basis))


def dump_values(values: Sequence[int], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([str(v) for v in values])
    if fmt in ("csv", "text"):
        return "".join(f"{v}\n" for v in values)
    raise InvalidArgument(f"unknown format {fmt!r}")
