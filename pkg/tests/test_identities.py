import pytest

from qqschur import combin as cb
from qqschur import identities as idt
from qqschur import suites
from qqschur.hecke import c_super


@pytest.mark.parametrize("n,r", [(2, 3), (3, 3)])
def test_shift_lemmas(n, r):
    count = 0
    for a, h, k, part in idt.shift_instances(n, r):
        count += 1
        assert idt.coset_shift(a, h, k, part)
        assert idt.transversal_shift(a, h, k, part)
    assert count > 0


def test_run_lemmas():
    for alpha, u, j in idt.run_instances(3, 4):
        assert idt.x_inverse_run(alpha, u, j)
        assert idt.x_c_run(alpha, u, j)
        assert idt.x_c_run_sum(alpha, u, j)
    for alpha, u, j in idt.desc_instances(3, 4):
        assert idt.x_c_desc_sum(alpha, u, j)


def test_x_clifford_commute():
    assert idt.x_clifford_commute((2, 1), (1, 1))
    assert idt.x_clifford_commute((3,), (1,))
    assert all(idt.c_interval_square(4, i, j) for i in range(1, 5) for j in range(i, 5))


def test_negative_control_primed(monkeypatch):
    # dropping the prime must break the commutation
    monkeypatch.setattr(idt, "c_super", lambda lam, alpha, primed=False: c_super(lam, alpha))
    assert not idt.x_clifford_commute((2,), (1,))


def test_negative_control_direction(monkeypatch):
    real = idt.t_sum
    flipped = {"asc": "desc", "desc": "asc"}
    monkeypatch.setattr(idt, "t_sum", lambda r, i, j, direction="asc": real(r, j, i, flipped[direction])
                        if direction == "desc" else real(r, i, j, direction))
    reps = idt.verify_hecke_identities(max_n=2, max_r=3)
    assert not suites.all_pass(reps)


def test_special_shape():
    assert idt.is_special_shape(((1, 1, 0), (0, 1, 0), (0, 0, 2)), 2)
    assert not idt.is_special_shape(((1, 0, 1), (0, 1, 0), (0, 0, 0)), 2)
    assert not idt.is_special_shape(((0, 0, 0), (1, 0, 0), (0, 0, 0)), 3)


def test_sdp_criteria_n3():
    reps = idt.verify_sdp_criteria(max_n=3, max_r=3)
    assert suites.all_pass(reps)
