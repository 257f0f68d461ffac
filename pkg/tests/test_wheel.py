import json
from itertools import product
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primeformula.errors import InvalidArgument, InvalidBasis, InvalidHTuple
from primeformula.wheel import (
    Affine,
    PrimeBasis,
    ResidueClass,
    WheelFormula,
    bezout_ladder,
    check_htuple,
    coefficients_congruent,
    eq21_coefficients,
    evaluate,
    iter_htuples,
    residue_signature,
    synthesize_crt,
    synthesize_elimination,
)

# Published instances, written as functions of (t, h_2, ..., h_r).
PAPER_FORMS = {
    2: lambda t, h2: 6 * t + 2 * h2 - 3,
    3: lambda t, h2, h3: 30 * t - 6 * h3 - 10 * h2 + 15,
    4: lambda t, h2, h3, h4: 210 * t + 90 * h4 + 2184 * h3 + 4550 * h2 - 6825,
    5: lambda t, h2, h3, h4, h5: 2310 * t - 210 * h5 - 18810 * h4 + 114114 * h3 + 190190 * h2 - 285285,
}
# (C_2, ..., C_r) of the same instances
PAPER_COEFFS = {
    2: [2],
    3: [-10, -6],
    4: [4550, 2184, 90],
    5: [190190, 114114, -18810, -210],
}


def brute_coefficient(primes, j):
    P = prod(primes)
    hits = [
        c
        for c in range(P)
        if all((c % p == p - 1) if i == j else (c % p == 0) for i, p in enumerate(primes, start=1))
    ]
    assert len(hits) == 1
    return hits[0]


def test_basis():
    b = PrimeBasis.first(5)
    assert b.primes == (2, 3, 5, 7, 11)
    assert b.r == 5
    assert b.primorial == 2310
    assert b.next_prime() == 13
    with pytest.raises(InvalidBasis):
        PrimeBasis((2, 5, 7))
    with pytest.raises(InvalidBasis):
        PrimeBasis((3, 5))
    with pytest.raises(InvalidBasis):
        PrimeBasis.first(0)
    with pytest.raises(InvalidBasis):
        synthesize_elimination((2, 3, 7))


def test_primorial_overflows_64_bits_at_r16():
    assert PrimeBasis.first(15).primorial < 2**63
    assert PrimeBasis.first(16).primorial > 2**64


def test_residue_class_membership_and_disjointness():
    for p in (2, 3, 5, 7, 11):
        classes = [ResidueClass(p, h) for h in range(1, p)]
        for n in range(1, 200):
            hits = [c for c in classes if n in c]
            assert len(hits) == (0 if n % p == 0 else 1)
        assert all(c.member(4) in c for c in classes)
    with pytest.raises(InvalidArgument):
        ResidueClass(5, 0)


def test_ladder_satisfies_defining_equations():
    for r in range(2, 26):
        ladder = bezout_ladder(PrimeBasis.first(r))
        assert ladder.check()
        below = 1
        for i, (x, t) in enumerate(ladder.pairs, start=2):
            below *= ladder.primes[i - 2]
            assert 0 <= x < below
            assert ladder.primes[i - 1] * x - below * t == 1


def test_elimination_small_cases():
    f1, trace1 = synthesize_elimination(PrimeBasis.first(1))
    assert f1.coefficients == ()
    assert [evaluate(f1, (), t) for t in range(4)] == [-1, 1, 3, 5]
    assert trace1.satisfies_system()

    f2, _ = synthesize_elimination(PrimeBasis.first(2))
    for t, h2 in product(range(-3, 4), (1, 2)):
        assert evaluate(f2, (h2,), t) == PAPER_FORMS[2](t, h2)


def test_elimination_canonical_examples():
    f3, _ = synthesize_elimination(PrimeBasis.first(3))
    assert f3.coefficients == (20, 24)
    f4, _ = synthesize_elimination(PrimeBasis.first(4))
    assert f4.coefficients == (140, 84, 90)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_paper_instances_congruent(r):
    basis = PrimeBasis.first(r)
    f, trace = synthesize_elimination(basis)
    P = basis.primorial
    assert coefficients_congruent(f.coefficients, PAPER_COEFFS[r], P)
    assert coefficients_congruent(trace.raw_coefficients, PAPER_COEFFS[r], P)
    # whole-formula agreement, constant included, for every offset tuple
    for h in iter_htuples(basis):
        assert (PAPER_FORMS[r](0, *h) - evaluate(f, h, 0)) % P == 0


def test_paper_constant_identity():
    # constant = -sum(C_j) - 1 in the paper's h_j convention
    for r in (3, 4, 5):
        form = PAPER_FORMS[r]
        const = form(0, *[0] * (r - 1))
        assert const == -sum(PAPER_COEFFS[r]) - 1


def test_elimination_trace_matches_closed_form():
    for r in range(1, 26):
        _, trace = synthesize_elimination(PrimeBasis.first(r))
        assert trace.raw_coefficients == eq21_coefficients(trace.ladder)
        assert trace.satisfies_system()


def test_elimination_trace_steps():
    basis = PrimeBasis.first(4)
    _, trace = synthesize_elimination(basis)
    assert [s.i for s in trace.steps] == [2, 3, 4]
    # equation solved at step 3: 5 x_3 - 6 t_1 = (h_2 - 1)*2*x_1hat + h_3 - 1
    step3 = trace.steps[1]
    x1_hat = trace.ladder.pairs[0][1]
    expected = 2 * x1_hat * (Affine.var("h2") - 1) + Affine.var("h3") - 1
    assert step3.rhs == expected
    for h2, h3, t2 in product((1, 2), (1, 2, 3, 4), range(-2, 3)):
        env = {"h2": h2, "h3": h3, "t2": t2}
        assert 5 * step3.x.evaluate(env) - 6 * step3.prev.evaluate(env) == step3.rhs.evaluate(env)


def test_trace_detects_corruption():
    basis = PrimeBasis.first(4)
    _, trace = synthesize_elimination(basis)
    bad_step = trace.steps[1]
    bad = type(bad_step)(bad_step.i, bad_step.rhs, bad_step.x + 1, bad_step.prev, bad_step.prev_name, bad_step.value)
    broken = type(trace)(trace.primes, trace.ladder, (trace.steps[0], bad, trace.steps[2]), trace.value, trace.raw_coefficients)
    assert not broken.satisfies_system()


def test_raw_coefficient_congruence_pattern():
    for r in range(2, 16):
        basis = PrimeBasis.first(r)
        _, trace = synthesize_elimination(basis)
        for j, c in enumerate(trace.raw_coefficients, start=2):
            for k, p in enumerate(basis.primes, start=1):
                assert c % p == (p - 1 if k == j else 0)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_crt_matches_brute_force(r):
    basis = PrimeBasis.first(r)
    expected = tuple(brute_coefficient(basis.primes, j) for j in range(2, r + 1))
    assert synthesize_crt(basis).coefficients == expected


def test_crt_examples():
    assert synthesize_crt(PrimeBasis.first(2)).coefficients == (2,)
    assert synthesize_crt(PrimeBasis.first(3)).coefficients == (20, 24)
    assert synthesize_crt(PrimeBasis.first(5)).coefficients == (770, 924, 1980, 2100)
    with pytest.raises(InvalidArgument):
        synthesize_crt(PrimeBasis.first(1))


def test_oracle_equivalence_to_r25():
    for r in range(2, 26):
        basis = PrimeBasis.first(r)
        f, _ = synthesize_elimination(basis)
        assert f == synthesize_crt(basis)
        assert all(0 <= c < basis.primorial for c in f.coefficients)


def test_evaluate_examples():
    f3 = synthesize_crt(PrimeBasis.first(3))
    assert evaluate(f3, (1, 1), 1) == 29 == PAPER_FORMS[3](1, 1, 1)
    assert evaluate(f3, (1, 2), 0) == 23
    f2 = synthesize_crt(PrimeBasis.first(2))
    assert evaluate(f2, (1,), 1) == 5


def test_evaluate_rejects_bad_offsets():
    f3 = synthesize_crt(PrimeBasis.first(3))
    with pytest.raises(InvalidHTuple):
        evaluate(f3, (0, 1), 0)
    with pytest.raises(InvalidHTuple):
        evaluate(f3, (1, 5), 0)
    with pytest.raises(InvalidHTuple):
        evaluate(f3, (1,), 0)
    assert check_htuple(PrimeBasis.first(3), [2, 4]) == (2, 4)


@settings(max_examples=300)
@given(st.integers(2, 9), st.data(), st.integers(-(10**12), 10**12))
def test_evaluate_system_property(r, data, t):
    basis = PrimeBasis.first(r)
    f = synthesize_crt(basis)
    h = tuple(data.draw(st.integers(1, p - 1)) for p in basis.primes[1:])
    v = evaluate(f, h, t)
    for p, hj in zip(basis.primes, (1,) + h):
        assert (v + hj) % p == 0
    assert v % 2 == 1
    assert gcd(v, basis.primorial) == 1


def test_signature_examples():
    b3, b4 = PrimeBasis.first(3), PrimeBasis.first(4)
    assert residue_signature(29, b3) == ((1, 1), 1)
    assert residue_signature(15, b3) is None
    assert residue_signature(121, b4) == ((2, 4, 5), -3)
    assert evaluate(synthesize_crt(b4), (2, 4, 5), -3) == 121
    assert residue_signature(7, PrimeBasis.first(1)) == ((), 4)
    assert residue_signature(8, PrimeBasis.first(1)) is None
    with pytest.raises(InvalidArgument):
        residue_signature(0, b3)


@given(st.integers(2, 8), st.integers(1, 10**6))
def test_signature_roundtrip(r, n):
    basis = PrimeBasis.first(r)
    sig = residue_signature(n, basis)
    if gcd(n, basis.primorial) != 1:
        assert sig is None
    else:
        h, t = sig
        assert evaluate(synthesize_crt(basis), h, t) == n


def test_coefficients_congruent():
    assert coefficients_congruent([90, 2184, 4550], [90, 84, 140], 210)
    assert coefficients_congruent([-210, -18810, 114114, 190190], [2100, 1980, 924, 770], 2310)
    assert not coefficients_congruent([1], [2], 6)
    with pytest.raises(InvalidArgument):
        coefficients_congruent([1, 2], [1], 6)


@pytest.mark.parametrize("r", [1, 2, 3, 8, 20])
def test_formula_json_roundtrip(r):
    f = synthesize_elimination(PrimeBasis.first(r))[0]
    text = f.to_json()
    doc = json.loads(text)
    assert list(doc) == ["r", "primes", "primorial", "coefficients", "constant"]
    assert doc["constant"] == "-1"
    assert all(isinstance(v, str) for v in doc["coefficients"].values())
    back = WheelFormula.from_json(text)
    assert back == f
    assert back.to_json() == text


def test_formula_json_schema_r3():
    doc = json.loads(synthesize_crt(PrimeBasis.first(3)).to_json())
    assert doc == {"r": 3, "primes": [2, 3, 5], "primorial": "30", "coefficients": {"2": "20", "3": "24"}, "constant": "-1"}


def test_formula_json_rejects_inconsistent():
    doc = json.loads(synthesize_crt(PrimeBasis.first(3)).to_json())
    doc["primorial"] = "31"
    with pytest.raises(InvalidArgument):
        WheelFormula.from_dict(doc)
