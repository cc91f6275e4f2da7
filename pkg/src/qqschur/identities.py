"""
Exhaustive checks of the Hecke-Clifford commutation identities and of the
sufficient criteria for the SDP condition.

Every check builds both sides as HCElements (or asks the semantic SDP
checker) and compares them exactly; each exhaustive run returns a list of
report dicts {"check", "status", "witness"}.
"""
from __future__ import annotations

from itertools import product as iproduct
from typing import Iterator, List, Sequence, Tuple

from . import combin as cb
from .hecke import HCElement, c_interval, c_super, t_sum, x_lambda
from .ring import ONE, Q, q2int, qint, qpow
from .sdp import sdp_at, sdp_row

Report = dict


def _report(name: str, ok: bool, witness=None) -> Report:
    return {"check": name, "status": "pass" if ok else "fail", "witness": None if ok else witness}


def _run(r: int, indices: Sequence[int]) -> HCElement:
    """T_{i1} T_{i2} ... in the given order (1 for an empty run)."""
    out = HCElement.one(r)
    for i in indices:
        out = out * HCElement.T(r, i)
    return out


def _inv_run(r: int, u: int, k: int) -> HCElement:
    """T_u^{-1} T_{u+1}^{-1} ... T_{u+k-1}^{-1}."""
    out = HCElement.one(r)
    for i in range(u, u + k):
        out = out * HCElement.T_inv(r, i)
    return out


def _transversal(a: cb.NatMatrix) -> HCElement:
    r = cb.size(a)
    nu, mu = cb.column_reading(a), cb.col_sums(a)
    return HCElement._raw(r, {(w, 0): ONE for w in cb.coset_reps(nu, mu)})


def _td(a: cb.NatMatrix) -> HCElement:
    return HCElement.Tw(cb.d_perm(a))


# ------------------------------------------------- shifting T_{d_A} along rows

def coset_shift(a: cb.NatMatrix, h: int, k: int, part: int) -> bool:
    """
    Part 1 (a_{h+1,k} > 0): moving one entry of column k from row h+1 to row h
    turns the run sum in front of T_{d_A} into a run behind T_{d_{A^+}}.
    Part 2 (a_{h,k} > 0) is the mirror image for A^-.
    """
    r = cb.size(a)
    st = cb.matrix_stats(a)
    lt = cb.partial_sums(st.ro)
    lh = lt[h]
    if part == 1:
        lo, hi = st.rowpre[h + 1][k], st.rowpre[h + 1][k + 1]
        base = st.at[h][k]
        lhs = HCElement.zero(r)
        rsum = HCElement.zero(r)
        for j in range(lo, hi):
            lhs = lhs + _run(r, range(lh + 1, lh + j + 1))
            rsum = rsum + _run(r, range(base + 1, base + (j - lo) + 1))
        lhs = lhs * _td(a)
        front = _run(r, range(lh, lh - st.rowsuf[h][k], -1))
        rhs = front * _td(cb.shift_matrix(a, h, k, +1)) * rsum
        return lhs == rhs
    if part == 2:
        lo, hi = st.rowsuf[h][k], st.rowsuf[h][k - 1]
        base = st.at[h][k]
        lhs = HCElement.zero(r)
        rsum = HCElement.zero(r)
        for j in range(lo, hi):
            lhs = lhs + _run(r, range(lh - 1, lh - j - 1, -1))
            rsum = rsum + _run(r, range(base - 1, base - (j - lo) - 1, -1))
        lhs = lhs * _td(a)
        front = _run(r, range(lh, lh + st.rowpre[h + 1][k]))
        rhs = front * _td(cb.shift_matrix(a, h, k, -1)) * rsum
        return lhs == rhs
    raise ValueError("part must be 1 or 2")


def transversal_shift(a: cb.NatMatrix, h: int, k: int, part: int) -> bool:
    """
    Part 1 (a_{h+1,k} >= 1): an ascending run sum times the D_nu cap S_mu sum
    of A equals a descending run sum times the sum for A^+.  Part 2
    (a_{h,k} >= 1) is the converse move to A^-.
    """
    r = cb.size(a)
    st = cb.matrix_stats(a)
    t = st.at[h][k]
    ahk, ah1k = a[h - 1][k - 1], a[h][k - 1]
    if part == 1:
        lhs = t_sum(r, t + 1, t + ah1k - 1, "asc") * _transversal(a)
        rhs = t_sum(r, t, t - ahk + 1, "desc") * _transversal(cb.shift_matrix(a, h, k, +1))
        return lhs == rhs
    if part == 2:
        lhs = t_sum(r, t - 1, t - ahk + 1, "desc") * _transversal(a)
        rhs = t_sum(r, t, t + ah1k - 1, "asc") * _transversal(cb.shift_matrix(a, h, k, -1))
        return lhs == rhs
    raise ValueError("part must be 1 or 2")


def shift_instances(n: int, r: int) -> Iterator[Tuple[cb.NatMatrix, int, int, int]]:
    """(A, h, k, part) with the entry that moves actually present."""
    for a in cb.nat_matrices(n, r):
        for h in range(1, n):
            for k in range(1, n + 1):
                if a[h][k - 1] > 0:
                    yield a, h, k, 1
                if a[h - 1][k - 1] > 0:
                    yield a, h, k, 2


# ---------------------------------------------------- identities next to x_alpha

def _in_young(alpha: cb.Composition, i: int) -> bool:
    return i in cb.young_generators(alpha)


def run_instances(n: int, r: int) -> Iterator[Tuple[cb.Composition, int, int]]:
    """(alpha, u, j) with s_{u+1}, ..., s_{u+j} in S_alpha and u + j <= r - 1."""
    for alpha in cb.compositions(n, r):
        for u in range(1, r):
            for j in range(0, r - u):
                if all(_in_young(alpha, i) for i in range(u + 1, u + j + 1)):
                    yield alpha, u, j


def x_run_sums(alpha: cb.Composition, u: int, j: int) -> bool:
    """x_alpha times an ascending or descending run sum is [[j+2]]_q x_alpha (needs s_u in S_alpha)."""
    r = sum(alpha)
    x = x_lambda(alpha)
    target = x * qint(j + 2)
    return x * t_sum(r, u, u + j, "asc") == target and x * t_sum(r, u + j, u, "desc") == target


def x_inverse_run(alpha: cb.Composition, u: int, j: int) -> bool:
    """x_alpha T_u^{-1} ... T_{u+j}^{-1} rewritten through positive runs."""
    r = sum(alpha)
    x = x_lambda(alpha)
    lhs = x * _inv_run(r, u, j + 1)
    rhs = x * _run(r, range(u, u + j + 1)) * qpow(-1 - j) \
        - x * t_sum(r, u, u + j - 1, "asc") * (qpow(-j - 1) * (Q - ONE))
    return lhs == rhs


def x_c_run(alpha: cb.Composition, u: int, j: int) -> bool:
    """x_alpha c_u T_u ... T_{u+j} pushed to inverse runs followed by one c."""
    r = sum(alpha)
    x = x_lambda(alpha)
    lhs = x * HCElement.c(r, u) * _run(r, range(u, u + j + 1))
    acc = HCElement.zero(r)
    for k in range(j + 1):
        acc = acc + _inv_run(r, u, k) * HCElement.c(r, u + k)
    rhs = x * acc * ((Q - ONE) * qpow(j)) + x * _inv_run(r, u, j + 1) * HCElement.c(r, u + j + 1) * qpow(j + 1)
    return lhs == rhs


def x_c_run_sum(alpha: cb.Composition, u: int, j: int) -> bool:
    """x_alpha c_u times the ascending run sum; collapses to c_{q,u,u+j+1} when s_u is in S_alpha."""
    r = sum(alpha)
    x = x_lambda(alpha)
    lhs = x * HCElement.c(r, u) * t_sum(r, u, u + j, "asc")
    acc = HCElement.zero(r)
    for k in range(j + 2):
        acc = acc + _inv_run(r, u, k) * HCElement.c(r, u + k)
    if lhs != x * acc * qpow(j + 1):
        return False
    if _in_young(alpha, u):
        return lhs == x * c_interval(r, u, u + j + 1)
    return True


def x_c_desc_sum(alpha: cb.Composition, u: int, j: int) -> bool:
    """x_alpha c_{u+1} times the descending run sum from T_u down to T_{u-j}."""
    r = sum(alpha)
    x = x_lambda(alpha)
    return x * HCElement.c(r, u + 1) * t_sum(r, u, u - j, "desc") == x * c_interval(r, u - j, u + 1)


def desc_instances(n: int, r: int) -> Iterator[Tuple[cb.Composition, int, int]]:
    """(alpha, u, j) with s_u, s_{u-1}, ..., s_{u-j} all in S_alpha."""
    for alpha in cb.compositions(n, r):
        for u in range(1, r):
            for j in range(0, u):
                if all(_in_young(alpha, i) for i in range(u - j, u + 1)):
                    yield alpha, u, j


def c_interval_square(r: int, i: int, j: int) -> bool:
    c = c_interval(r, i, j)
    return c * c == HCElement.scalar(r, -q2int(j - i + 1))


def x_clifford_commute(lam: cb.Composition, alpha: Sequence[int]) -> bool:
    """x_lambda c^alpha_lambda = (c^alpha_lambda)' x_lambda."""
    x = x_lambda(lam)
    return x * c_super(lam, alpha) == c_super(lam, alpha, primed=True) * x


# -------------------------------------------------------------- exhaustive runs

def verify_hecke_identities(max_n: int = 3, max_r: int = 4) -> List[Report]:
    out: List[Report] = []
    for n in range(1, max_n + 1):
        for r in range(1, max_r + 1):
            fails = {"coset-shift": [], "transversal-shift": []}
            count = 0
            for a, h, k, part in shift_instances(n, r):
                count += 1
                if not coset_shift(a, h, k, part):
                    fails["coset-shift"].append([a, h, k, part])
                if not transversal_shift(a, h, k, part):
                    fails["transversal-shift"].append([a, h, k, part])
            for name, bad in fails.items():
                out.append(_report(f"{name} n={n} r={r} ({count} instances)", not bad, bad[:5]))
            bad = {"x-run-sum": [], "x-inverse-run": [], "x-c-run": [], "x-c-run-sum": [], "x-c-desc-sum": []}
            for alpha, u, j in run_instances(n, r):
                if _in_young(alpha, u) and not x_run_sums(alpha, u, j):
                    bad["x-run-sum"].append([alpha, u, j])
                if not x_inverse_run(alpha, u, j):
                    bad["x-inverse-run"].append([alpha, u, j])
                if not x_c_run(alpha, u, j):
                    bad["x-c-run"].append([alpha, u, j])
                if not x_c_run_sum(alpha, u, j):
                    bad["x-c-run-sum"].append([alpha, u, j])
            for alpha, u, j in desc_instances(n, r):
                if not x_c_desc_sum(alpha, u, j):
                    bad["x-c-desc-sum"].append([alpha, u, j])
            for name, b in bad.items():
                out.append(_report(f"{name} n={n} r={r}", not b, b[:5]))
            bad_xc = [[lam, al] for lam in cb.compositions(n, r)
                      for al in iproduct(*[(0, 1) if p else (0,) for p in lam])
                      if not x_clifford_commute(lam, al)]
            out.append(_report(f"x-clifford-commute n={n} r={r}", not bad_xc, bad_xc[:5]))
    for r in range(1, max_r + 1):
        bad_sq = [[i, j] for i in range(1, r + 1) for j in range(i, r + 1) if not c_interval_square(r, i, j)]
        out.append(_report(f"c-interval-square r={r}", not bad_sq, bad_sq))
    return out


# ------------------------------------------------------ SDP sufficient criteria

def is_special_shape(a: cb.NatMatrix, k: int) -> bool:
    """Zero below the diagonal and zero above it in columns beyond k."""
    n = len(a)
    return all(a[i][j] == 0 for i in range(n) for j in range(n) if i > j or (i < j and j + 1 > k))


def verify_sdp_criteria(max_n: int = 3, max_r: int = 4) -> List[Report]:
    out: List[Report] = []
    for n in range(1, max_n + 1):
        for r in range(0, max_r + 1):
            mats = cb.nat_matrices(n, r)
            bad_d1, bad_last, bad_shape, bad_cor = [], [], [], []
            for a in mats:
                if cb.d_perm(a) == cb.identity(r):
                    for h in range(1, n + 1):
                        for k in range(1, n + 1):
                            if a[h - 1][k - 1] > 0 and not sdp_at(a, h, k):
                                bad_d1.append([a, h, k])
                if r and not sdp_row(a, n):
                    bad_last.append(a)
                for k in range(1, n + 1):
                    if not is_special_shape(a, k):
                        continue
                    for h in (k - 1, k):
                        if h >= 1 and a[h - 1][k - 1] > 0 and not sdp_at(a, h, k):
                            bad_shape.append([a, h, k])
            # the corollary: A in M*(n) of special shape, lambda added on the diagonal
            for a in cb.enumerate_star(n, r):
                for k in range(2, n + 1):
                    if not is_special_shape(a.hat, k):
                        continue
                    for lam in cb.compositions(n, r - a.size) if r > a.size else ():
                        m = cb.madd(a.hat, cb.diag(lam))
                        if m[k - 1][k - 1] > 0 and not sdp_at(m, k, k):
                            bad_cor.append([a.to_json(), list(lam), k, "diag"])
                        plus = cb.shift_matrix(m, k - 1, k, +1)
                        if plus is not None and not sdp_at(plus, k - 1, k):
                            bad_cor.append([a.to_json(), list(lam), k, "plus"])
            out.append(_report(f"sdp identity d_A n={n} r={r}", not bad_d1, bad_d1[:5]))
            out.append(_report(f"sdp last row n={n} r={r}", not bad_last, bad_last[:5]))
            out.append(_report(f"sdp special shape n={n} r={r}", not bad_shape, bad_shape[:5]))
            out.append(_report(f"sdp special shape plus diagonal n={n} r={r}", not bad_cor, bad_cor[:5]))
    return out
