import json
import random
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from qqschur import combin as cb
from qqschur import suites
from qqschur.hecke import HCElement, standard_T
from qqschur.linalg import OutsideSpan
from qqschur.ring import ONE, Q, ZERO
from qqschur.schur import (KINDS, SPECIAL_KINDS, SchurElement, check_closed_hypothesis, decompose_in_TA,
                           dimension, left_factor, phi_mul_bruteforce, phi_mul_closed, phi_mul_fullalgebra,
                           special_factors, twist_mul)
from qqschur.sdp import HypothesisError

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def pairs(n, r):
    mats = cb.enumerate_super(n, r)
    return [(b, a) for b in mats for a in mats]


def test_two_routes_agree():
    rng = random.Random(3)
    checks = pairs(2, 1) + pairs(2, 2) + rng.sample([p for p in pairs(2, 3) if p[0].co() == p[1].ro()], 60)
    for b, a in checks:
        assert phi_mul_bruteforce(b, a) == phi_mul_fullalgebra(b, a)


def test_co_ro_vanishing_and_parity():
    for r in (1, 2):
        for b, a in pairs(2, r):
            p = phi_mul_bruteforce(b, a)
            if b.co() != a.ro():
                assert p.is_zero()
            elif not p.is_zero():
                assert p.parity() == (a.parity + b.parity) % 2


def test_structure_constants_integral():
    # coefficients lie in Z[q]
    for b, a in pairs(2, 2):
        for x in phi_mul_bruteforce(b, a).terms.values():
            assert x.is_laurent() and x.den.is_one()
            assert all(e >= 0 and e % 2 == 0 and c.denominator == 1 for e, c in x.num.c.items())


def test_diagonal_left_factor_is_identity():
    for a in cb.enumerate_super(2, 2):
        d = cb.smat(cb.diag(a.ro()))
        assert twist_mul(d, a) == SchurElement.basis(a, twisted=True)
        assert phi_mul_closed("diag", 1, a) == SchurElement.basis(a)


def test_twist_sign():
    for b, a in pairs(2, 2):
        plain, tw = phi_mul_bruteforce(b, a), twist_mul(b, a)
        sign = -1 if a.parity and b.parity else 1
        assert tw.terms == {m: x * sign for m, x in plain.terms.items()}


def test_golden_product():
    got = phi_mul_bruteforce(cb.smat(((0, 1), (0, 1))), cb.smat(((0, 0), (1, 1))))
    frozen = SchurElement.from_json(json.loads((FIXTURES / "schur_mul_n2_r2.json").read_text()))
    assert got == frozen


@pytest.mark.parametrize("n,r,count", [(1, 1, 2), (2, 1, 8), (2, 0, 1), (3, 0, 1), (2, 2, 32)])
def test_dimension(n, r, count):
    assert dimension(n, r) == (count, count)


def test_decompose_examples():
    a = cb.smat(((1, 0), (1, 0)))
    lam, mu = a.ro(), a.co()
    assert decompose_in_TA(standard_T(a), lam, mu) == {a: ONE}
    assert decompose_in_TA(standard_T(a) * ZERO, lam, mu) == {}
    b = [m for m in cb.enumerate_super(2, 2) if m.ro() == lam and m.co() == mu and m != a][0]
    assert decompose_in_TA(standard_T(a) * Q + standard_T(b), lam, mu) == {a: Q, b: ONE}
    with pytest.raises(OutsideSpan):
        decompose_in_TA(HCElement.T(2, 1), (2,), (2,))


def test_closed_example_diag_odd():
    a = cb.smat(((1, 0), (0, 0)))
    assert phi_mul_closed("diag_odd", 1, a) == SchurElement.basis(cb.smat(cb.zero_matrix(2), ((1, 0), (0, 0))))


@pytest.mark.parametrize("r", [1, 2])
def test_closed_vs_oracle_n2(r):
    rep = suites.closed_vs_oracle(2, r)
    assert rep["status"] == "pass" and rep["checked"] > 0


@pytest.mark.parametrize("r", [1, 2, 3])
def test_special_kinds_n3(r):
    for mu in cb.compositions(3, r - 1):
        for h in (1, 2):
            for kind in SPECIAL_KINDS:
                x, a = special_factors(kind, h, mu)
                assert phi_mul_closed(kind, h, mu=mu) == phi_mul_bruteforce(x, a)


def test_hypothesis_refusal():
    a = cb.smat(((0, 1), (1, 0)))
    assert not check_closed_hypothesis("diag_odd", 1, a)
    with pytest.raises(HypothesisError):
        phi_mul_closed("diag_odd", 1, a)


def test_closed_errors():
    a = cb.smat(((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        phi_mul_closed("nonsense", 1, a)
    with pytest.raises(ValueError):
        phi_mul_closed("upper2_1", 1)
    with pytest.raises((IndexError, ValueError)):
        phi_mul_closed("upper_even", 2, a)


@given(st.integers(1, 2).flatmap(lambda r: st.sampled_from(cb.enumerate_super(2, r))), st.integers(-2, 2))
def test_json_round_trip(a, e):
    x = SchurElement.basis(a).scale(Q ** e) if e else SchurElement.basis(a, twisted=True)
    assert SchurElement.from_json(x.to_json()) == x
