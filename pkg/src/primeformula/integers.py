"""Exact integer helpers and the coprime two-variable equation ``a*x - b*y = c``.

Python ints are arbitrary precision, so these functions only add the
normalisation rules the rest of the package depends on: euclidean remainders
and a canonical Bezout representative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgument, NotCoprimeError


def emod(a: int, m: int) -> int:
    """Euclidean remainder, always in ``[0, |m|)``."""
    if m == 0:
        raise InvalidArgument("modulus must be nonzero")
    return a % abs(m)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, u, v)`` with ``g = gcd(a, b) >= 0`` and ``a*u + b*v = g``.

    >>> ext_gcd(240, 46)
    (2, -9, 47)
    """
    if a == 0 and b == 0:
        raise InvalidArgument("ext_gcd(0, 0) is undefined")
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def bezout_unit(a: int, b: int) -> tuple[int, int]:
    """Solve ``a*x - b*y = 1`` for the representative with ``0 <= x < b``.

    Any solution works for the algebra; pinning the least non-negative ``x``
    makes every coefficient derived from it reproducible.
    """
    if a <= 0 or b <= 0:
        raise InvalidArgument(f"bezout_unit needs positive inputs, got ({a}, {b})")
    g, u, _ = ext_gcd(a, b)
    if g != 1:
        raise NotCoprimeError(f"gcd({a}, {b}) = {g}")
    x = u % b
    y, rem = divmod(a * x - 1, b)
    assert rem == 0
    return x, y


@dataclass(frozen=True)
class GeneralSolution:
    """All integer solutions of ``a*x - b*y = c``: ``x = x0 + x_stride*t``, ``y = y0 + y_stride*t``."""

    x0: int
    y0: int
    x_stride: int
    y_stride: int

    def at(self, t: int) -> tuple[int, int]:
        return self.x0 + self.x_stride * t, self.y0 + self.y_stride * t


def solve_linear(a: int, b: int, c: int) -> GeneralSolution:
    x_hat, y_hat = bezout_unit(a, b)
    return GeneralSolution(c * x_hat, c * y_hat, b, a)
