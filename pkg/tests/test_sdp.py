from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from qqschur import combin as cb
from qqschur import suites
from qqschur.hecke import HCElement
from qqschur.identities import is_special_shape, verify_sdp_criteria
from qqschur.sdp import find_counterexample, sdp_at, sdp_family, sdp_row


def no_earlier_larger(d, j):
    return not any(d[i] > d[j - 1] for i in range(j - 1))


@pytest.mark.parametrize("r", range(1, 6))
def test_clifford_passes_T_d_iff_no_earlier_larger(r):
    # combinatorial oracle for the semantic checker, itself checked here
    for d in permutations(range(1, r + 1)):
        td = HCElement.Tw(d)
        for j in range(1, r + 1):
            assert (HCElement.c(r, d[j - 1]) * td == td * HCElement.c(r, j)) == no_earlier_larger(d, j)


@pytest.mark.parametrize("n,r", [(2, 4), (3, 3), (3, 4)])
def test_sdp_at_matches_oracle(n, r):
    for a in cb.nat_matrices(n, r):
        st_ = cb.matrix_stats(a)
        d = cb.d_perm(a)
        for h in range(1, n + 1):
            for k in range(1, n + 1):
                if a[h - 1][k - 1]:
                    want = all(no_earlier_larger(d, st_.at[h - 1][k] + p) for p in range(1, a[h - 1][k - 1] + 1))
                    assert sdp_at(a, h, k) == want


def test_examples():
    for lam in cb.compositions(3, 3):
        for h in range(1, 4):
            if lam[h - 1]:
                assert sdp_at(cb.diag(lam), h, h)
    for u in (1, 2):
        assert sdp_at(cb.madd(cb.diag((1, 1)), cb.unit(2, 1, 2, u)), 1, 2)
    assert sdp_family(cb.smat(cb.zero_matrix(2)), 1, 3, "diag")
    assert sdp_family(cb.smat(cb.unit(2, 1, 2)), 1, 2, "plus")
    for r in range(5):
        assert sdp_family(cb.smat(cb.zero_matrix(3)), 3, r, "diag")


def test_last_row_and_identity_d():
    for n in (2, 3):
        for r in range(5):
            for a in cb.nat_matrices(n, r):
                assert sdp_row(a, n)
                if cb.d_perm(a) == cb.identity(r):
                    assert all(sdp_row(a, h) for h in range(1, n + 1))


def test_special_shape_rows():
    for a in cb.nat_matrices(3, 4):
        for k in (2, 3):
            if is_special_shape(a, k):
                for h, kk in ((k - 1, k), (k, k)):
                    if a[h - 1][kk - 1]:
                        assert sdp_at(a, h, kk)


def test_super_matrix_uses_hat():
    a = cb.smat(((0, 0), (1, 0)), ((0, 1), (0, 0)))
    assert sdp_at(a, 1, 2) == sdp_at(a.hat, 1, 2)


def test_counterexamples():
    assert find_counterexample(2, 2) == (((0, 1), (1, 0)), 1, 2)
    m, h, k = find_counterexample(3, 4)
    assert not sdp_at(m, h, k)
    assert not sdp_row(((0, 1), (1, 0)), 1)


def test_errors():
    with pytest.raises(ValueError):
        sdp_at(((1, 0), (0, 1)), 1, 2)
    with pytest.raises(IndexError):
        sdp_at(((1, 0), (0, 1)), 3, 1)
    with pytest.raises(ValueError):
        sdp_family(cb.smat(cb.unit(2, 1, 2, 2)), 1, 1, "diag")
    with pytest.raises(ValueError):
        sdp_family(cb.smat(cb.zero_matrix(2)), 1, 1, "other")


@given(st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_row_is_conjunction(entries):
    a = (tuple(entries[:2]), tuple(entries[2:]))
    for h in (1, 2):
        assert sdp_row(a, h) == all(sdp_at(a, h, k) for k in (1, 2) if a[h - 1][k - 1])


def test_criteria_suite_small():
    reps = verify_sdp_criteria(max_n=2, max_r=3)
    assert reps and suites.all_pass(reps)
