"""
Semantic decision procedure for the SDP (semi-direct product) condition.

A matrix A satisfies the condition at (h, k) when

    c_{lam~_{h-1} + rowpre(h,k) + p} T_{d_A} = T_{d_A} c_{a~_{h-1,k} + p}

in H^c_{|A|} for every 1 <= p <= a_{h,k}.  Everything here is decided by
comparing the two sides as HCElements; no combinatorial shortcut is used.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Optional, Tuple, Union

from . import combin as cb
from .hecke import HCElement

MatrixLike = Union[cb.NatMatrix, cb.SuperMatrix]


class HypothesisError(ValueError):
    """A closed formula was requested outside the hypotheses that justify it."""


def _hat(a: MatrixLike) -> cb.NatMatrix:
    if isinstance(a, cb.SuperMatrix):
        return a.hat
    return tuple(map(tuple, a))


@lru_cache(maxsize=None)
def _sdp_at(a: cb.NatMatrix, h: int, k: int) -> bool:
    st = cb.matrix_stats(a)
    r = cb.size(a)
    lt = cb.partial_sums(st.ro)
    td = HCElement.Tw(cb.d_perm(a))
    for p in range(1, a[h - 1][k - 1] + 1):
        left = HCElement.c(r, lt[h - 1] + st.rowpre[h][k] + p) * td
        right = td * HCElement.c(r, st.at[h - 1][k] + p)
        if left != right:
            return False
    return True


def sdp_at(a: MatrixLike, h: int, k: int) -> bool:
    m = _hat(a)
    n = len(m)
    if not (1 <= h <= n and 1 <= k <= n):
        raise IndexError(f"({h},{k}) out of range")
    if m[h - 1][k - 1] <= 0:
        raise ValueError(f"SDP condition at ({h},{k}) needs a positive entry there")
    return _sdp_at(m, h, k)


def sdp_row(a: MatrixLike, h: int) -> bool:
    m = _hat(a)
    return all(_sdp_at(m, h, k) for k in range(1, len(m) + 1) if m[h - 1][k - 1] > 0)


def sdp_plus_row(a: MatrixLike, h: int) -> bool:
    """A^+_{h,k} satisfies SDP at (h,k) for every k with a_{h+1,k} >= 1."""
    m = _hat(a)
    for k in range(1, len(m) + 1):
        if m[h][k - 1] >= 1:
            plus = cb.shift_matrix(m, h, k, +1)
            if not _sdp_at(plus, h, k):
                return False
    return True


def family_members(a: cb.SuperMatrix, r: int) -> Iterator[cb.NatMatrix]:
    n = a.n
    for lam in cb.compositions(n, r - a.size):
        yield cb.madd(a.hat, cb.diag(lam))


def sdp_family(a: cb.SuperMatrix, h: int, r: int, variant: str) -> bool:
    """
    Whether every (A + lambda), lambda in Lambda(n, r - |A|), satisfies the
    row condition (variant "diag") or the shifted condition (variant "plus").
    """
    if r < a.size:
        raise ValueError(f"r = {r} is smaller than |A| = {a.size}")
    if variant == "diag":
        return all(sdp_row(m, h) for m in family_members(a, r))
    if variant == "plus":
        if not 1 <= h < a.n:
            raise IndexError("variant 'plus' needs 1 <= h < n")
        return all(sdp_plus_row(m, h) for m in family_members(a, r))
    raise ValueError(f"unknown variant {variant!r}")


def find_counterexample(n: int, max_r: int) -> Optional[Tuple[cb.NatMatrix, int, int]]:
    """First (A, h, k) in enumeration order where the condition fails, if any."""
    for r in range(max_r + 1):
        for m in cb.nat_matrices(n, r):
            for h in range(1, n + 1):
                for k in range(1, n + 1):
                    if m[h - 1][k - 1] > 0 and not _sdp_at(m, h, k):
                        return m, h, k
    return None
