"""The linear formula for H_r, the integers free of the first r primes.

For a basis p_1..p_r with primorial P every member of H_r is

    value(h, t) = t*P + sum_{j=2..r} C_j*(h_j - 1) - 1,   1 <= h_j <= p_j - 1,

and C_j is pinned down modulo P by C_j = -1 (mod p_j), C_j = 0 (mod p_k), k != j.

Two independent routes produce the coefficients:

* :func:`synthesize_elimination` solves the congruence system
  ``p_1 x_1 - h_1 = p_i x_i - h_i`` one prime at a time. Each step is a coprime
  two-variable equation solved with a Bezout pair, and the free variable of
  one step is rewritten in terms of the next. The raw coefficients are
  whatever the Bezout choices produce, reduced mod P for the canonical form.
* :func:`synthesize_crt` reconstructs each C_j directly from its residues.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import prod
from typing import Iterator, Mapping, Sequence

from . import oracle
from .errors import InvalidArgument, InvalidBasis, InvalidHTuple
from .integers import bezout_unit, emod


@dataclass(frozen=True)
class PrimeBasis:
    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        primes = tuple(self.primes)
        object.__setattr__(self, "primes", primes)
        if not primes:
            raise InvalidBasis("basis needs at least one prime")
        if list(primes) != oracle.first_primes(len(primes)):
            raise InvalidBasis(f"{list(primes)} is not the list of the first {len(primes)} primes")

    @classmethod
    def first(cls, r: int) -> PrimeBasis:
        if r < 1:
            raise InvalidBasis(f"r must be >= 1, got {r}")
        return cls(tuple(oracle.first_primes(r)))

    @property
    def r(self) -> int:
        return len(self.primes)

    @cached_property
    def primorial(self) -> int:
        return prod(self.primes)

    def next_prime(self) -> int:
        return oracle.next_prime(self.primes[-1])

    def prefix(self, s: int) -> PrimeBasis:
        return PrimeBasis(self.primes[:s])


@dataclass(frozen=True)
class ResidueClass:
    """The progression ``p*x - h``: integers congruent to ``-h`` mod ``p``."""

    modulus: int
    offset: int

    def __post_init__(self) -> None:
        if not 1 <= self.offset <= self.modulus - 1:
            raise InvalidArgument(f"offset {self.offset} outside [1, {self.modulus - 1}]")

    def __contains__(self, n: int) -> bool:
        return (n + self.offset) % self.modulus == 0

    def member(self, x: int) -> int:
        return self.modulus * x - self.offset


def check_htuple(basis: PrimeBasis, h: Sequence[int]) -> tuple[int, ...]:
    """Validate offsets ``(h_2, ..., h_r)``; ``h_1 = 1`` is implied and not passed."""
    h = tuple(h)
    if len(h) != basis.r - 1:
        raise InvalidHTuple(f"expected {basis.r - 1} offsets for r={basis.r}, got {len(h)}")
    for p, hj in zip(basis.primes[1:], h):
        if not 1 <= hj <= p - 1:
            raise InvalidHTuple(f"offset {hj} outside [1, {p - 1}] for prime {p}")
    return h


def iter_htuples(basis: PrimeBasis) -> Iterator[tuple[int, ...]]:
    """All offset tuples in lexicographic order of ``(h_2, ..., h_r)``."""
    from itertools import product

    return product(*(range(1, p) for p in basis.primes[1:]))


# --------------------------------------------------------------------------
# Bezout ladder and elimination


@dataclass(frozen=True)
class BezoutLadder:
    """``pairs[i-2] = (x_i, t_{i-2})`` with ``p_i*x_i - (p_1...p_{i-1})*t_{i-2} = 1``.

    The first pair also supplies ``x_1``: ``t_0`` is defined to equal it.
    """

    primes: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]

    def x_hat(self, i: int) -> int:
        return self.pairs[i - 2][0]

    def t_hat(self, m: int) -> int:
        return self.pairs[m][1]

    def check(self) -> bool:
        return all(
            self.primes[i] * x - prod(self.primes[:i]) * t == 1
            for i, (x, t) in enumerate(self.pairs, start=1)
        )


def bezout_ladder(basis: PrimeBasis) -> BezoutLadder:
    pairs = []
    below = basis.primes[0]
    for p in basis.primes[1:]:
        pairs.append(bezout_unit(p, below))
        below *= p
    return BezoutLadder(basis.primes, tuple(pairs))


@dataclass(frozen=True)
class Affine:
    """Integer affine form ``const + sum coeffs[v] * v`` over named variables."""

    const: int = 0
    coeffs: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def var(cls, name: str) -> Affine:
        return cls(0, {name: 1})

    def __add__(self, other: Affine | int) -> Affine:
        if isinstance(other, int):
            return Affine(self.const + other, dict(self.coeffs))
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            coeffs[k] = coeffs.get(k, 0) + v
        return Affine(self.const + other.const, {k: v for k, v in coeffs.items() if v})

    __radd__ = __add__

    def __sub__(self, other: Affine | int) -> Affine:
        return self + (-1) * other

    def __mul__(self, k: int) -> Affine:
        if not k:
            return Affine()
        return Affine(self.const * k, {v: c * k for v, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Affine(other)
        if not isinstance(other, Affine):
            return NotImplemented
        return self.const == other.const and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash((self.const, frozenset(self.coeffs.items())))

    def coeff(self, name: str) -> int:
        return self.coeffs.get(name, 0)

    def subs(self, name: str, form: Affine) -> Affine:
        c = self.coeffs.get(name, 0)
        if not c:
            return self
        rest = Affine(self.const, {k: v for k, v in self.coeffs.items() if k != name})
        return rest + c * form

    def evaluate(self, env: Mapping[str, int]) -> int:
        return self.const + sum(c * env[v] for v, c in self.coeffs.items())


def _h(j: int) -> str:
    return f"h{j}"


def _t(i: int) -> str:
    return f"t{i}"


@dataclass(frozen=True)
class EliminationStep:
    """One equation ``p_i x_i - M t_{i-2} = rhs`` and its general solution.

    For ``i = 2`` the second unknown is ``x_1`` rather than ``t_0``. Both
    solutions are affine in the offsets and in the new free variable
    ``t_{i-1}``.
    """

    i: int
    rhs: Affine
    x: Affine
    prev: Affine
    prev_name: str
    value: Affine


@dataclass(frozen=True)
class EliminationTrace:
    primes: tuple[int, ...]
    ladder: BezoutLadder
    steps: tuple[EliminationStep, ...]
    value: Affine
    raw_coefficients: tuple[int, ...]

    @property
    def free_var(self) -> str:
        return _t(len(self.primes) - 1)

    def back_substitute(self) -> dict[str, Affine]:
        """Express every ``x_i`` and ``t_i`` in terms of the last free variable."""
        r = len(self.primes)
        forms: dict[str, Affine] = {self.free_var: Affine.var(self.free_var)}
        if r == 1:
            forms["x1"] = Affine.var(_t(0))
            return forms
        for step in reversed(self.steps):
            free = forms[_t(step.i - 1)]
            forms[f"x{step.i}"] = step.x.subs(_t(step.i - 1), free)
            forms[step.prev_name] = step.prev.subs(_t(step.i - 1), free)
        return forms

    def satisfies_system(self) -> bool:
        """Check ``p_1 x_1 - 1 == p_i x_i - h_i`` for every i, identically."""
        forms = self.back_substitute()
        p1 = self.primes[0]
        lhs = p1 * forms["x1"] - 1
        if lhs != self.value.subs(self.free_var, forms[self.free_var]):
            return False
        for i in range(2, len(self.primes) + 1):
            if lhs != self.primes[i - 1] * forms[f"x{i}"] - Affine.var(_h(i)):
                return False
        return True


def eq21_coefficients(ladder: BezoutLadder) -> tuple[int, ...]:
    """Closed-form raw coefficients from the ladder.

    ``C_r = t_{r-2} * p_1...p_{r-1}`` and for ``j < r``
    ``C_j = t_{j-2} * p_1...p_{j-1} * prod_{q>j} p_q x_q``.
    """
    primes = ladder.primes
    r = len(primes)
    out = []
    for j in range(2, r + 1):
        c = ladder.t_hat(j - 2) * prod(primes[: j - 1])
        for q in range(j + 1, r + 1):
            c *= primes[q - 1] * ladder.x_hat(q)
        out.append(c)
    return tuple(out)


def _eliminate(basis: PrimeBasis, ladder: BezoutLadder) -> EliminationTrace:
    primes = basis.primes
    r = basis.r
    p1 = primes[0]
    if r == 1:
        value = p1 * Affine.var(_t(0)) - 1
        return EliminationTrace(primes, ladder, (), value, ())

    steps = []
    # i = 2: p_2 x_2 - p_1 x_1 = h_2 - 1, solved as x = c*x_hat + b*t, y = c*y_hat + a*t
    p2 = primes[1]
    x2_hat, x1_hat = ladder.pairs[0]
    rhs = Affine.var(_h(2)) - 1
    t1 = Affine.var(_t(1))
    x2 = x2_hat * rhs + p1 * t1
    x1 = x1_hat * rhs + p2 * t1
    value = p1 * x1 - 1
    steps.append(EliminationStep(2, rhs, x2, x1, "x1", value))

    modulus = p1 * p2
    for i in range(3, r + 1):
        p = primes[i - 1]
        # value = modulus * t_{i-2} + rest; equate with p x_i - h_i
        rest = value.subs(_t(i - 2), Affine())
        rhs = rest + Affine.var(_h(i))
        xi_hat, ti_hat = ladder.pairs[i - 2]
        t_new = Affine.var(_t(i - 1))
        xi = xi_hat * rhs + modulus * t_new
        t_prev = ti_hat * rhs + p * t_new
        value = value.subs(_t(i - 2), t_prev)
        steps.append(EliminationStep(i, rhs, xi, t_prev, _t(i - 2), value))
        modulus *= p

    raw = tuple(value.coeff(_h(j)) for j in range(2, r + 1))
    return EliminationTrace(primes, ladder, tuple(steps), value, raw)


# --------------------------------------------------------------------------
# the formula itself


@dataclass(frozen=True)
class WheelFormula:
    """Canonical coefficients ``C_2..C_r`` in ``[0, P)`` plus the constant -1."""

    basis: PrimeBasis
    coefficients: tuple[int, ...]
    constant: int = -1

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if len(self.coefficients) != self.basis.r - 1:
            raise InvalidArgument("need one coefficient per basis prime after the first")

    @property
    def primorial(self) -> int:
        return self.basis.primorial

    @property
    def r(self) -> int:
        return self.basis.r

    def coefficient(self, j: int) -> int:
        return self.coefficients[j - 2]

    def offset_part(self, h: Sequence[int]) -> int:
        return sum(c * (hj - 1) for c, hj in zip(self.coefficients, h))

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "primes": list(self.basis.primes),
            "primorial": str(self.primorial),
            "coefficients": {str(j): str(c) for j, c in enumerate(self.coefficients, start=2)},
            "constant": str(self.constant),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc: Mapping) -> WheelFormula:
        basis = PrimeBasis(tuple(int(p) for p in doc["primes"]))
        if int(doc["r"]) != basis.r or int(doc["primorial"]) != basis.primorial:
            raise InvalidArgument("formula document is inconsistent with its primes")
        coeffs = doc["coefficients"]
        if sorted(coeffs, key=int) != [str(j) for j in range(2, basis.r + 1)]:
            raise InvalidArgument("coefficient keys must be 2..r")
        return cls(
            basis,
            tuple(int(coeffs[str(j)]) for j in range(2, basis.r + 1)),
            int(doc["constant"]),
        )

    @classmethod
    def from_json(cls, text: str) -> WheelFormula:
        return cls.from_dict(json.loads(text))

    def __str__(self) -> str:
        terms = [f"{self.primorial}*t"]
        terms += [f"{c}*(h{j} - 1)" for j, c in enumerate(self.coefficients, start=2) if c]
        return " + ".join(terms) + f" - {-self.constant}"


def _canonical(basis: PrimeBasis, raw: Sequence[int]) -> WheelFormula:
    return WheelFormula(basis, tuple(emod(c, basis.primorial) for c in raw))


def synthesize_elimination(basis: PrimeBasis) -> tuple[WheelFormula, EliminationTrace]:
    """Build the formula by successive elimination along the Bezout ladder.

    Returns the canonical formula and the trace, which keeps the raw
    (unreduced) coefficients and every intermediate general solution.
    """
    if not isinstance(basis, PrimeBasis):
        basis = PrimeBasis(tuple(basis))
    ladder = bezout_ladder(basis)
    trace = _eliminate(basis, ladder)
    return _canonical(basis, trace.raw_coefficients), trace


def synthesize_crt(basis: PrimeBasis) -> WheelFormula:
    """Build the canonical formula by residue reconstruction, one coefficient at a time."""
    if not isinstance(basis, PrimeBasis):
        basis = PrimeBasis(tuple(basis))
    if basis.r < 2:
        raise InvalidArgument("synthesize_crt needs r >= 2")
    P = basis.primorial
    coeffs = []
    for p in basis.primes[1:]:
        cofactor = P // p
        # cofactor * k = -1 (mod p)
        k = (-pow(cofactor, -1, p)) % p
        coeffs.append(cofactor * k)
    return WheelFormula(basis, tuple(coeffs))


@lru_cache(maxsize=64)
def formula_for(basis: PrimeBasis) -> WheelFormula:
    return synthesize_elimination(basis)[0]


def evaluate(formula: WheelFormula, h: Sequence[int], t: int) -> int:
    h = check_htuple(formula.basis, h)
    return t * formula.primorial + formula.offset_part(h) + formula.constant


def residue_signature(n: int, basis: PrimeBasis, formula: WheelFormula | None = None) -> tuple[tuple[int, ...], int] | None:
    """Offsets and ``t`` with ``evaluate(formula, h, t) == n``, or None when n is not in H_r.

    ``h_j`` is forced to ``(-n) mod p_j``; a zero there means ``p_j | n``.
    """
    if n < 1:
        raise InvalidArgument(f"residue_signature needs n >= 1, got {n}")
    formula = formula or formula_for(basis)
    if n % basis.primes[0] == 0:
        return None
    h = tuple((-n) % p for p in basis.primes[1:])
    if 0 in h:
        return None
    t, rem = divmod(n - formula.offset_part(h) - formula.constant, basis.primorial)
    assert rem == 0
    return h, t


def coefficients_congruent(a: Sequence[int], b: Sequence[int], modulus: int) -> bool:
    if len(a) != len(b):
        raise InvalidArgument(f"length mismatch: {len(a)} vs {len(b)}")
    return all((x - y) % modulus == 0 for x, y in zip(a, b))
