"""
The queer q-Schur superalgebra Q_q(n, r) and its twisted form.

phi_A sends x_{co(A)} h to T_A h.  A product phi_B phi_A is evaluated as
T_B h'_A inside the induced module x_{ro(B)} H^c_r and decomposed in the
basis {T_M}; this is the brute-force oracle.  ``phi_mul_closed`` evaluates
the closed multiplication formulas for the six generator shapes and the two
special families; the test suite checks it against the oracle.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Tuple

from . import combin as cb
from .hecke import HCElement, InducedModule, Vec
from .linalg import Echelon, rank
from .ring import ONE, ZERO, Q, RatFunc, as_ratfunc, q2_minus_q, q2int, qint, qpow
from .sdp import HypothesisError, sdp_at, sdp_row

SM = cb.SuperMatrix


class SchurElement:
    """
    A sparse combination of phi_A (plain) or Phi_A (twisted), A in M(n,r|Z2).
    """

    __slots__ = ("n", "r", "twisted", "terms")

    def __init__(self, n: int, r: int, terms: Optional[Mapping[SM, RatFunc]] = None,
                 twisted: bool = False):
        self.n, self.r, self.twisted = n, r, twisted
        self.terms: Dict[SM, RatFunc] = {}
        for a, x in (terms or {}).items():
            x = as_ratfunc(x)
            if x.is_zero():
                continue
            if a.n != n or a.size != r:
                raise ValueError(f"{a} is not in M({n},{r}|Z2)")
            self.terms[a] = x

    @classmethod
    def _raw(cls, n, r, terms, twisted):
        e = object.__new__(cls)
        e.n, e.r, e.twisted, e.terms = n, r, twisted, terms
        return e

    @classmethod
    def basis(cls, a: SM, twisted: bool = False) -> "SchurElement":
        return cls._raw(a.n, a.size, {a: ONE}, twisted)

    @classmethod
    def identity(cls, n: int, r: int, twisted: bool = False) -> "SchurElement":
        return cls._raw(n, r, {cb.smat(cb.diag(lam)): ONE for lam in cb.compositions(n, r)}, twisted)

    @classmethod
    def zero(cls, n: int, r: int, twisted: bool = False) -> "SchurElement":
        return cls._raw(n, r, {}, twisted)

    def _check(self, other: "SchurElement") -> None:
        if (self.n, self.r, self.twisted) != (other.n, other.r, other.twisted):
            raise ValueError("Schur elements from different algebras")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for a, x in other.terms.items():
            y = acc.get(a, ZERO) + x
            if y.is_zero():
                acc.pop(a, None)
            else:
                acc[a] = y
        return SchurElement._raw(self.n, self.r, acc, self.twisted)

    def __neg__(self):
        return SchurElement._raw(self.n, self.r, {a: -x for a, x in self.terms.items()}, self.twisted)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x) -> "SchurElement":
        x = as_ratfunc(x)
        if x.is_zero():
            return SchurElement.zero(self.n, self.r, self.twisted)
        return SchurElement._raw(self.n, self.r, {a: c * x for a, c in self.terms.items()}, self.twisted)

    def __rmul__(self, x):
        return self.scale(x)

    def __mul__(self, other):
        if not isinstance(other, SchurElement):
            return self.scale(other)
        self._check(other)
        acc: Dict[SM, RatFunc] = {}
        for b, xb in self.terms.items():
            cob = b.co()
            for a, xa in other.terms.items():
                if cob != a.ro():
                    continue
                sign = -1 if (self.twisted and a.parity and b.parity) else 1
                f = xb * xa
                if sign < 0:
                    f = -f
                for m, g in structure_constants(b, a).items():
                    y = acc.get(m)
                    acc[m] = f * g if y is None else y + f * g
        return SchurElement._raw(self.n, self.r, {m: x for m, x in acc.items() if not x.is_zero()},
                                 self.twisted)

    def __eq__(self, other):
        if not isinstance(other, SchurElement):
            return NotImplemented
        return (self.n, self.r, self.twisted) == (other.n, other.r, other.twisted) and \
            self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.r, self.twisted, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> Optional[int]:
        ps = {a.parity for a in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def __repr__(self):
        if not self.terms:
            return "0"
        sym = "Phi" if self.twisted else "phi"
        return " + ".join(f"({self.terms[a]})*{sym}{a}" for a in sorted(self.terms))

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "basis": "twisted" if self.twisted else "plain",
                "terms": [{"matrix": a.to_json(), "coeff": self.terms[a].to_json()}
                          for a in sorted(self.terms)]}

    @classmethod
    def from_json(cls, d) -> "SchurElement":
        twisted = d.get("basis", "plain") == "twisted"
        terms: Dict[SM, RatFunc] = {}
        for t in d["terms"]:
            a = SM.from_json(t["matrix"])
            terms[a] = terms.get(a, ZERO) + RatFunc.from_json(t.get("coeff", "1"))
        return cls(int(d["n"]), int(d["r"]), terms, twisted)


# ------------------------------------------------------------------ the oracle

@lru_cache(maxsize=None)
def module(lam: cb.Composition) -> InducedModule:
    return InducedModule(lam)


@lru_cache(maxsize=None)
def basis_vector(a: SM) -> Vec:
    """T_A as a vector of the induced module x_{ro(A)} H^c_r."""
    m = module(a.ro())
    return m.act_h_prime(m.generator(), a)


@lru_cache(maxsize=None)
def _echelon(n: int, lam: cb.Composition, mu: cb.Composition) -> Echelon:
    e = Echelon()
    for a in cb.enumerate_super_by_weights(n, lam, mu):
        e.add(a, basis_vector(a))
    return e


def decompose_vector(vec: Mapping, lam: cb.Composition, mu: cb.Composition) -> Dict[SM, RatFunc]:
    return _echelon(len(lam), tuple(lam), tuple(mu)).solve(vec)


def decompose_in_TA(z: HCElement, lam: cb.Composition, mu: cb.Composition) -> Dict[SM, RatFunc]:
    """
    Coefficients of z in the basis {T_M : ro(M) = lam, co(M) = mu}; raises
    ``OutsideSpan`` when z does not lie in x_lam H^c cap H^c x_mu.
    """
    lam, mu = tuple(lam), tuple(mu)
    vec = module(lam).from_element(z)
    coeffs = decompose_vector(vec, lam, mu)
    # the projection forgets the S_lambda-orbit, so confirm z itself
    back = HCElement.zero(z.r)
    for a, x in coeffs.items():
        back = back + module(lam).to_element(basis_vector(a)) * x
    if back != z:
        from .linalg import OutsideSpan
        raise OutsideSpan("element is not in x_lambda H^c")
    return coeffs


@lru_cache(maxsize=None)
def structure_constants(b: SM, a: SM) -> Dict[SM, RatFunc]:
    """gamma^M_{B,A} with phi_B phi_A = sum gamma^M_{B,A} phi_M."""
    if b.n != a.n or b.size != a.size:
        raise ValueError("phi_B and phi_A live in different Schur algebras")
    if b.co() != a.ro():
        return {}
    lam = b.ro()
    z = module(lam).act_h_prime(basis_vector(b), a)
    return decompose_vector(z, lam, a.co())


def phi_mul_bruteforce(b: SM, a: SM) -> SchurElement:
    return SchurElement._raw(a.n, a.size, dict(structure_constants(b, a)), False)


def phi_mul_fullalgebra(b: SM, a: SM) -> SchurElement:
    """The same product computed with whole HCElements (slow cross-check)."""
    if b.co() != a.ro():
        return SchurElement.zero(a.n, a.size)
    from .hecke import h_prime, standard_T
    z = standard_T(b) * h_prime(a)
    return SchurElement(a.n, a.size, decompose_in_TA(z, b.ro(), a.co()))


def twist_mul(b: SM, a: SM) -> SchurElement:
    """Phi_B Phi_A = (-1)^{p(A)p(B)} sum gamma^M_{B,A} Phi_M."""
    sign = -1 if a.parity and b.parity else 1
    return SchurElement._raw(a.n, a.size,
                             {m: (x if sign > 0 else -x) for m, x in structure_constants(b, a).items()},
                             True)


def dimension(n: int, r: int) -> Tuple[int, int]:
    """(|M(n,r|Z2)|, rank of all T_A in the direct sum over (ro, co) blocks)."""
    mats = cb.enumerate_super(n, r)
    vecs = ({(a.ro(), a.co()) + k: x for k, x in basis_vector(a).items()} for a in mats)
    return len(mats), rank(vecs)


# ------------------------------------------------------------ closed formulas

KINDS = ("diag", "upper_even", "lower_even", "diag_odd", "upper_odd", "lower_odd")
SPECIAL_KINDS = ("upper2_1", "upper2_2", "lower2_1", "lower2_2")


def _e(n: int, *cells) -> cb.NatMatrix:
    """Sum of coef * E_{i,j} over (coef, i, j)."""
    rows = [[0] * n for _ in range(n)]
    for c, i, j in cells:
        rows[i - 1][j - 1] += c
    return tuple(map(tuple, rows))


def _mat_or_none(even, odd) -> Optional[SM]:
    if any(x < 0 for row in even for x in row):
        return None
    if any(x not in (0, 1) for row in odd for x in row):
        return None
    return SM(tuple(map(tuple, even)), tuple(map(tuple, odd)))


def left_factor(kind: str, h: int, lam: cb.Composition) -> Optional[SM]:
    """The left factor X of the given shape with co(X) = lam (None if illegal)."""
    n = len(lam)
    d = cb.diag(lam)
    z = cb.zero_matrix(n)
    if kind == "diag":
        return SM(d, z)
    if kind == "upper_even":
        return _mat_or_none(cb.madd(d, _e(n, (1, h, h + 1), (-1, h + 1, h + 1))), z)
    if kind == "lower_even":
        return _mat_or_none(cb.madd(d, _e(n, (-1, h, h), (1, h + 1, h))), z)
    if kind == "diag_odd":
        return _mat_or_none(cb.madd(d, _e(n, (-1, h, h))), _e(n, (1, h, h)))
    if kind == "upper_odd":
        return _mat_or_none(cb.madd(d, _e(n, (-1, h + 1, h + 1))), _e(n, (1, h, h + 1)))
    if kind == "lower_odd":
        return _mat_or_none(cb.madd(d, _e(n, (-1, h, h))), _e(n, (1, h + 1, h)))
    raise ValueError(f"unknown kind {kind!r}")


def special_factors(kind: str, h: int, mu: cb.Composition) -> Tuple[SM, SM]:
    """(X, A) for the special products with mu in Lambda(n, r-1)."""
    n = len(mu)
    d = cb.diag(mu)
    z = cb.zero_matrix(n)
    up, lo = _e(n, (1, h, h + 1)), _e(n, (1, h + 1, h))
    if kind == "upper2_1":
        return SM(d, up), SM(cb.madd(d, lo), z)
    if kind == "upper2_2":
        return SM(d, up), SM(d, lo)
    if kind == "lower2_1":
        return SM(d, lo), SM(cb.madd(d, up), z)
    if kind == "lower2_2":
        return SM(d, lo), SM(d, up)
    raise ValueError(f"unknown special kind {kind!r}")


class _Acc:
    def __init__(self, a: SM):
        self.a = a
        self.n = a.n
        self.terms: Dict[SM, RatFunc] = {}

    def add(self, coef: RatFunc, even_cells=(), odd_cells=(), base: Optional[SM] = None) -> None:
        base = base or self.a
        m = _mat_or_none(cb.madd(base.even, _e(self.n, *even_cells)),
                         cb.madd(base.odd, _e(self.n, *odd_cells)))
        if m is None or coef.is_zero():
            return
        y = self.terms.get(m, ZERO) + coef
        if y.is_zero():
            self.terms.pop(m, None)
        else:
            self.terms[m] = y

    def result(self, r: int) -> SchurElement:
        return SchurElement._raw(self.n, r, self.terms, False)


def _sgn(e: int) -> RatFunc:
    return ONE if e % 2 == 0 else -ONE


def _closed_even_upper(a: SM, h: int, acc: _Acc) -> None:
    st = cb.matrix_stats(a.hat)
    a0, a1, ah = a.even, a.odd, a.hat
    for k in range(1, a.n + 1):
        b = st.rowsuf[h][k]
        acc.add(qpow(b + a1[h][k - 1]) * qint(a0[h - 1][k - 1] + 1), [(1, h, k), (-1, h + 1, k)])
        acc.add(qpow(b), (), [(1, h, k), (-1, h + 1, k)])
        acc.add(qpow(b - 1) * (-q2_minus_q(ah[h - 1][k - 1] + 1)), [(2, h, k)], [(-1, h, k), (-1, h + 1, k)])


def _closed_even_lower(a: SM, h: int, acc: _Acc) -> None:
    st = cb.matrix_stats(a.hat)
    a0, a1, ah = a.even, a.odd, a.hat
    for k in range(1, a.n + 1):
        pre = st.rowpre[h + 1][k]
        ahk = ah[h - 1][k - 1]
        acc.add(qpow(pre) * qint(a0[h][k - 1] + 1), [(-1, h, k), (1, h + 1, k)])
        acc.add(qpow(pre + ahk - 1), (), [(-1, h, k), (1, h + 1, k)])
        acc.add(-qpow(pre + ahk - 2) * q2_minus_q(ah[h][k - 1] + 1), [(2, h + 1, k)],
                [(-1, h, k), (-1, h + 1, k)])


def _closed_diag_odd(a: SM, h: int, acc: _Acc) -> None:
    st = cb.matrix_stats(a.hat)
    odd_at = cb.matrix_stats(a.odd).at
    for k in range(1, a.n + 1):
        f = _sgn(odd_at[h - 1][k]) * qpow(st.rowsuf[h][k])
        acc.add(f, [(-1, h, k)], [(1, h, k)])
        acc.add(-f * q2int(a.hat[h - 1][k - 1]), [(1, h, k)], [(-1, h, k)])


def _closed_upper_odd(a: SM, h: int, acc: _Acc) -> None:
    st = cb.matrix_stats(a.hat)
    odd_at = cb.matrix_stats(a.odd).at
    a0, a1, ah = a.even, a.odd, a.hat
    for k in range(1, a.n + 1):
        s = odd_at[h - 1][k]
        b = st.rowsuf[h][k]
        acc.add(_sgn(s) * qpow(b + a1[h][k - 1]), [(-1, h + 1, k)], [(1, h, k)])
        acc.add(_sgn(s + 1 - a1[h - 1][k - 1]) * qpow(b) * qint(a0[h - 1][k - 1] + 1),
                [(1, h, k)], [(-1, h + 1, k)])
        acc.add(_sgn(s) * qpow(b - 1 + a1[h][k - 1]) * q2_minus_q(ah[h - 1][k - 1] + 1),
                [(2, h, k), (-1, h + 1, k)], [(-1, h, k)])


def _closed_lower_odd(a: SM, h: int, acc: _Acc) -> None:
    st = cb.matrix_stats(a.hat)
    odd_at = cb.matrix_stats(a.odd).at
    a0, a1, ah = a.even, a.odd, a.hat
    for k in range(1, a.n + 1):
        s = odd_at[h - 1][k]
        pre = st.rowpre[h + 1][k]
        a1hk = a1[h - 1][k - 1]
        acc.add(_sgn(s + a1hk) * qpow(pre), [(-1, h, k)], [(1, h + 1, k)])
        acc.add(_sgn(s + a1hk + 1) * qpow(pre - 1) * q2_minus_q(ah[h][k - 1] + 1),
                [(-1, h, k), (2, h + 1, k)], [(-1, h + 1, k)])
        acc.add(_sgn(s + 1) * qpow(pre + ah[h - 1][k - 1] - 1) * qint(a0[h][k - 1] + 1),
                [(1, h + 1, k)], [(-1, h, k)])


def _closed_special(kind: str, h: int, mu: cb.Composition) -> SchurElement:
    n = len(mu)
    r = sum(mu) + 1
    base = SM(cb.diag(mu), cb.zero_matrix(n))
    acc = _Acc(base)
    mh, mh1 = mu[h - 1], mu[h]
    if kind == "upper2_1":
        acc.add(ONE, [(-1, h + 1, h + 1), (1, h + 1, h)], [(1, h, h + 1)])
        acc.add(qpow(mh1), (), [(1, h, h)])
        acc.add(-(Q - ONE) * qint(mh + 1), [(-1, h + 1, h + 1), (1, h, h)], [(1, h + 1, h + 1)])
    elif kind == "upper2_2":
        acc.add(-qint(mh + 1) * qpow(mh1), [(1, h, h)])
        acc.add(-ONE, [(-1, h + 1, h + 1)], [(1, h, h + 1), (1, h + 1, h)])
        acc.add(Q - ONE, [(-1, h + 1, h + 1)], [(1, h, h), (1, h + 1, h + 1)])
    elif kind == "lower2_1":
        acc.add(ONE, [(-1, h, h), (1, h, h + 1)], [(1, h + 1, h)])
        acc.add(ONE, (), [(1, h + 1, h + 1)])
    elif kind == "lower2_2":
        acc.add(ONE, [(-1, h, h)], [(1, h, h + 1), (1, h + 1, h)])
        acc.add(-qint(mh1 + 1), [(1, h + 1, h + 1)])
    else:
        raise ValueError(f"unknown special kind {kind!r}")
    return acc.result(r)


def check_closed_hypothesis(kind: str, h: int, a: SM) -> bool:
    """Whether the hypothesis attached to the closed formula holds for A."""
    if kind == "diag_odd" or kind == "lower_odd":
        return sdp_row(a, h)
    if kind == "upper_odd":
        hat = a.hat
        for k in range(1, a.n + 1):
            if hat[h][k - 1] >= 1:
                if not sdp_at(cb.shift_matrix(hat, h, k, +1), h, k):
                    return False
        return True
    return True


def phi_mul_closed(kind: str, h: int, a: Optional[SM] = None,
                   mu: Optional[cb.Composition] = None) -> SchurElement:
    """
    Closed form of phi_X phi_A, X = left_factor(kind, h, ro(A)); for the
    special kinds the pair is special_factors(kind, h, mu).

    Odd kinds refuse (HypothesisError) when the SDP hypothesis fails.
    """
    if kind in SPECIAL_KINDS:
        if mu is None:
            raise ValueError("special kinds need mu")
        mu = tuple(mu)
        if not 1 <= h < len(mu):
            raise IndexError("h out of range")
        return _closed_special(kind, h, mu)
    if a is None:
        raise ValueError("closed formula needs the right factor A")
    n = a.n
    lam = a.ro()
    if kind == "diag":
        return SchurElement.basis(a)
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    hmax = n if kind == "diag_odd" else n - 1
    if not 1 <= h <= hmax:
        raise IndexError(f"h = {h} out of range for kind {kind}")
    if left_factor(kind, h, lam) is None:
        raise ValueError(f"left factor of kind {kind} does not exist for ro(A) = {lam}")
    if not check_closed_hypothesis(kind, h, a):
        raise HypothesisError(f"SDP hypothesis for {kind} fails at h={h} for {a}")
    acc = _Acc(a)
    {"upper_even": _closed_even_upper, "lower_even": _closed_even_lower,
     "diag_odd": _closed_diag_odd, "upper_odd": _closed_upper_odd,
     "lower_odd": _closed_lower_odd}[kind](a, h, acc)
    return acc.result(a.size)
