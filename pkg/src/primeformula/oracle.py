"""Ground truth by brute force: sieve, next prime, trial division, and the
definitional membership test for H_r (not divisible by any basis prime).

Nothing in here touches the synthesized formula, so it can be used to check it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import TYPE_CHECKING, Iterable

from .errors import InvalidArgument, ResourceLimitError

if TYPE_CHECKING:
    from .enumeration import Window
    from .wheel import PrimeBasis

SIEVE_CEILING = 10**9
FACTOR_CEILING = 10**12
SCAN_CEILING = 10**8


def sieve(limit: int, ceiling: int = SIEVE_CEILING) -> list[int]:
    """All primes ``<= limit`` by the sieve of Eratosthenes."""
    if limit < 2:
        raise InvalidArgument(f"sieve limit must be >= 2, got {limit}")
    if limit > ceiling:
        raise ResourceLimitError(f"sieve limit {limit} exceeds ceiling {ceiling}")
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    d = 5
    while d * d <= n:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def next_prime(p: int) -> int:
    """Smallest prime strictly greater than ``p``."""
    if p < 1:
        raise InvalidArgument(f"next_prime needs p >= 1, got {p}")
    n = p + 1
    while not is_prime(n):
        n += 1
    return n


def first_primes(r: int) -> list[int]:
    out: list[int] = []
    p = 1
    while len(out) < r:
        p = next_prime(p)
        out.append(p)
    return out


@dataclass(frozen=True)
class FactorMultiset:
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        n = 1
        for p, e in self.factors:
            n *= p**e
        return n

    def __len__(self) -> int:
        # cardinality of the multiset, i.e. Omega(n)
        return sum(e for _, e in self.factors)


def _trial_divisors() -> Iterable[int]:
    yield from (2, 3, 5)
    gaps = (4, 2, 4, 2, 4, 6, 2, 6)
    d = 7
    while True:
        for g in gaps:
            yield d
            d += g


def factorize(n: int, ceiling: int = FACTOR_CEILING) -> FactorMultiset:
    """Complete factorization by trial division over a mod-30 wheel."""
    if n < 2:
        raise InvalidArgument(f"factorize needs n >= 2, got {n}")
    if n > ceiling:
        raise ResourceLimitError(f"{n} exceeds trial-division ceiling {ceiling}")
    factors = []
    for d in _trial_divisors():
        if d * d > n:
            break
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors.append((d, e))
    if n > 1:
        factors.append((n, 1))
    return FactorMultiset(tuple(factors))


def in_H(n: int, basis: PrimeBasis) -> bool:
    if n < 1:
        raise InvalidArgument(f"in_H needs n >= 1, got {n}")
    return all(n % p for p in basis.primes)


def hr_scan(basis: PrimeBasis, window: Window, ceiling: int = SCAN_CEILING) -> list[int]:
    """Every integer of ``window`` not divisible by a basis prime, tested one by one."""
    first, last = window.int_bounds()
    if last < first:
        return []
    if last - first + 1 > ceiling:
        raise ResourceLimitError(f"window of {last - first + 1} integers exceeds ceiling {ceiling}")
    primes = basis.primes
    return [n for n in range(max(first, 1), last + 1) if all(n % p for p in primes)]
