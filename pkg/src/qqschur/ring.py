# Exact arithmetic in Q(v). Throughout, q means v**2.
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

Rational = Union[int, Fraction]


def _canon(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentPoly:
    """
    A Laurent polynomial in ``v`` with exact rational coefficients.

    Stored as a dict ``{exponent: coefficient}`` with no zero entries, so two
    polynomials are equal exactly when their dicts are equal.
    """

    __slots__ = ("c", "_hash")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None):
        if coeffs:
            self.c: Dict[int, Rational] = {
                int(e): _canon(Fraction(x) if isinstance(x, str) else x)
                for e, x in coeffs.items() if x != 0}
        else:
            self.c = {}
        self._hash = None

    @classmethod
    def _raw(cls, d: Dict[int, Rational]) -> "LaurentPoly":
        p = object.__new__(cls)
        p.c = d
        p._hash = None
        return p

    @classmethod
    def const(cls, x: Rational) -> "LaurentPoly":
        return cls._raw({0: _canon(x)}) if x != 0 else cls._raw({})

    @classmethod
    def mono(cls, e: int, x: Rational = 1) -> "LaurentPoly":
        return cls._raw({e: _canon(x)}) if x != 0 else cls._raw({})

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return len(self.c) == 1 and self.c.get(0) == 1

    def degree(self) -> int:
        return max(self.c)

    def valuation(self) -> int:
        return min(self.c)

    def lead(self) -> Rational:
        return self.c[max(self.c)]

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(other)
            else:
                return NotImplemented
        if not other.c:
            return self
        if not self.c:
            return other
        d = dict(self.c)
        for e, x in other.c.items():
            y = d.get(e, 0) + x
            if y == 0:
                d.pop(e, None)
            else:
                d[e] = _canon(y)
        return LaurentPoly._raw(d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -x for e, x in self.c.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                if other == 0:
                    return LaurentPoly._raw({})
                return LaurentPoly._raw({e: _canon(x * other) for e, x in self.c.items()})
            return NotImplemented
        a, b = self.c, other.c
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            (e0, x0), = a.items()
            if x0 == 1:
                return LaurentPoly._raw({e + e0: y for e, y in b.items()})
            return LaurentPoly._raw({e + e0: _canon(y * x0) for e, y in b.items()})
        d: Dict[int, Rational] = {}
        for e1, x1 in a.items():
            for e2, x2 in b.items():
                k = e1 + e2
                d[k] = d.get(k, 0) + x1 * x2
        return LaurentPoly._raw({e: _canon(x) for e, x in d.items() if x != 0})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.c) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, x), = self.c.items()
            return LaurentPoly.mono(-e, Fraction(1, 1) / x) ** (-k)
        out = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly._raw({e + k: x for e, x in self.c.items()})

    def subs_v_inverse(self) -> "LaurentPoly":
        return LaurentPoly._raw({-e: x for e, x in self.c.items()})

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == ({0: other} if other != 0 else {})
        if isinstance(other, RatFunc):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.c.items()))
        return self._hash

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c, reverse=True):
            x = self.c[e]
            if e == 0:
                parts.append(str(x))
            else:
                mon = "v" if e == 1 else f"v^{e}"
                parts.append(mon if x == 1 else ("-" + mon if x == -1 else f"{x}*{mon}"))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> Dict[str, str]:
        return {str(e): str(Fraction(self.c[e])) for e in sorted(self.c)}

    @classmethod
    def from_json(cls, d: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(e): Fraction(x) for e, x in d.items()})


ZERO_L = LaurentPoly._raw({})
ONE_L = LaurentPoly._raw({0: 1})


# --- dense polynomial helpers (lists, low degree first) for gcd ---

def _to_dense(p: LaurentPoly) -> Tuple[int, list]:
    lo = p.valuation()
    hi = p.degree()
    out = [0] * (hi - lo + 1)
    for e, x in p.c.items():
        out[e - lo] = x
    return lo, out


def _from_dense(lo: int, coeffs: list) -> LaurentPoly:
    return LaurentPoly._raw({lo + i: _canon(x) for i, x in enumerate(coeffs) if x != 0})


def _strip(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _divmod(a: list, b: list) -> Tuple[list, list]:
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        x = a[i]
        if x == 0:
            continue
        f = x / lb
        q[i - db] = f
        for j in range(db + 1):
            a[i - db + j] -= f * b[j]
    return q, _strip(a[:db]) if db else []


def _gcd(a: list, b: list) -> list:
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        _, rem = _divmod(a, b)
        a, b = b, rem
    lc = Fraction(a[-1])
    return [_canon(x / lc) for x in a]


def _exact_div(a: list, b: list) -> list:
    q, rem = _divmod(a, b)
    assert not rem
    return [_canon(x) for x in q]


class RatFunc:
    """
    A reduced fraction num/den of Laurent polynomials.

    The denominator has lowest exponent 0 and leading coefficient 1, and
    num/den share no polynomial factor, so equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_laurent(num)
        if den is None:
            self.num, self.den = num, ONE_L
            return
        den = _as_laurent(den)
        self.num, self.den = _reduce(num, den)

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "RatFunc":
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    def is_zero(self) -> bool:
        return not self.num.c

    def is_laurent(self) -> bool:
        return self.den is ONE_L or self.den.is_one()

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if not other.num.c:
            return self
        if not self.num.c:
            return other
        if self.den is ONE_L and other.den is ONE_L:
            return RatFunc._raw(self.num + other.num, ONE_L)
        if self.den == other.den:
            n = self.num + other.num
            return RatFunc(n, self.den) if n.c else ZERO
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = other if isinstance(other, RatFunc) else _coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if not self.num.c or not other.num.c:
            return ZERO
        if self.den is ONE_L and other.den is ONE_L:
            return RatFunc._raw(self.num * other.num, ONE_L)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num.c:
            raise ZeroDivisionError("inverse of zero in Q(v)")
        if len(self.num.c) == 1 and self.den is ONE_L:
            (e, x), = self.num.c.items()
            return RatFunc._raw(LaurentPoly.mono(-e, _canon(Fraction(1) / x)), ONE_L)
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = other if isinstance(other, RatFunc) else _coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num.c == other.num.c and self.den.c == other.den.c
        if isinstance(other, LaurentPoly):
            return self.den.is_one() and self.num.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.den.is_one() and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.is_one():
            return repr(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, d) -> "RatFunc":
        if isinstance(d, (int, str)):
            return cls(LaurentPoly.const(Fraction(d)))
        if "num" not in d:
            return cls(LaurentPoly.from_json(d))
        return normalize(LaurentPoly.from_json(d["num"]), LaurentPoly.from_json(d["den"]))


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial")


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, LaurentPoly):
        return RatFunc._raw(x, ONE_L)
    if isinstance(x, (int, Fraction)):
        return RatFunc._raw(LaurentPoly.const(x), ONE_L)
    return None


def _reduce(num: LaurentPoly, den: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    if not den.c:
        raise ZeroDivisionError("zero denominator")
    if not num.c:
        return ZERO_L, ONE_L
    lo_n, dn = _to_dense(num)
    lo_d, dd = _to_dense(den)
    shift = lo_n - lo_d
    if len(dd) > 1 and len(dn) > 1:
        g = _gcd(dn, dd)
        if len(g) > 1:
            dn = _exact_div(dn, g)
            dd = _exact_div(dd, g)
    lc = Fraction(dd[-1])
    if lc != 1:
        dn = [x / lc for x in dn]
        dd = [x / lc for x in dd]
    if len(dd) == 1:
        return _from_dense(shift, dn), ONE_L
    return _from_dense(shift, dn), _from_dense(0, dd)


def normalize(num: LaurentPoly, den: LaurentPoly) -> RatFunc:
    """Canonical reduced representative of num/den; raises on den = 0."""
    return RatFunc(num, den)


ZERO = RatFunc._raw(ZERO_L, ONE_L)
ONE = RatFunc._raw(ONE_L, ONE_L)
V = RatFunc._raw(LaurentPoly.mono(1), ONE_L)
Q = RatFunc._raw(LaurentPoly.mono(2), ONE_L)


def vpow(k: int) -> RatFunc:
    return RatFunc._raw(LaurentPoly.mono(k), ONE_L)


def qpow(k: int) -> RatFunc:
    return vpow(2 * k)


def as_ratfunc(x) -> RatFunc:
    r = _coerce(x)
    if r is None:
        raise TypeError(f"cannot interpret {x!r} as an element of Q(v)")
    return r


def step(m: int, e: int) -> LaurentPoly:
    """
    1 + v^e + v^{2e} + ... + v^{(m-1)e}; zero when m = 0.

    >>> step(3, 2)
    v^4 + v^2 + 1
    """
    if m < 0 or e < 1:
        raise ValueError("step needs m >= 0 and e >= 1")
    return LaurentPoly._raw({k * e: 1 for k in range(m)})


def step_diff(m: int, e1: int, e2: int) -> LaurentPoly:
    return step(m, e1) - step(m, e2)


def qint(m: int) -> RatFunc:
    """[[m]]_q as an element of Q(v)."""
    return RatFunc._raw(step(m, 2), ONE_L)


def q2int(m: int) -> RatFunc:
    """[[m]]_{q^2}."""
    return RatFunc._raw(step(m, 4), ONE_L)


def q2_minus_q(m: int) -> RatFunc:
    """[[m]]_{q^2} - [[m]]_q."""
    return RatFunc._raw(step_diff(m, 4, 2), ONE_L)


def parse_ratfunc(obj) -> RatFunc:
    return RatFunc.from_json(obj)


def total(items: Iterable[RatFunc]) -> RatFunc:
    out = ZERO
    for x in items:
        out = out + x
    return out
