"""
The Hecke-Clifford superalgebra H^c_r over Q(v), q = v^2.

Elements are stored in the normal form T_w c^alpha (Clifford part on the
right).  ``alpha`` is a bitmask: bit j-1 stands for c_j.  Products are
computed by feeding the right factor into the left one generator by
generator; the same rewriting drives the induced modules x_lambda H^c_r used
by the Schur algebra code.
"""
from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import combin as cb
from .ring import ONE, ZERO, Q, RatFunc, as_ratfunc, qpow, vpow

Key = Tuple[cb.Permutation, int]
Vec = Dict[Key, RatFunc]

QM1 = Q - ONE
NEG_QM1 = -QM1
NEG_ONE = -ONE


def _bit(j: int) -> int:
    return 1 << (j - 1)


def mask_from_alpha(alpha: Sequence[int]) -> int:
    return sum(1 << k for k, a in enumerate(alpha) if a)


def alpha_from_mask(mask: int, r: int) -> Tuple[int, ...]:
    return tuple((mask >> k) & 1 for k in range(r))


def _add_into(acc: Vec, key: Key, x: RatFunc) -> None:
    y = acc.get(key)
    acc[key] = x if y is None else y + x


def _clean(acc: Vec) -> Vec:
    return {k: x for k, x in acc.items() if not x.is_zero()}


# Clifford pair c_i^a c_{i+1}^b moved to the right of T_i.
# Entries: (keeps T_i, bits for (c_i, c_{i+1}), coefficient).
_PUSH = {
    (0, 0): ((True, (0, 0), ONE),),
    (0, 1): ((True, (1, 0), ONE),),
    (1, 0): ((True, (0, 1), ONE), (False, (1, 0), QM1), (False, (0, 1), NEG_QM1)),
    (1, 1): ((True, (1, 1), NEG_ONE), (False, (0, 0), NEG_QM1), (False, (1, 1), QM1)),
}


def _algebra_rule(w: cb.Permutation, i: int):
    if w[i - 1] < w[i]:
        return ((cb.times_s(w, i), ONE),)
    return ((w, QM1), (cb.times_s(w, i), Q))


def _make_coset_rule(lam: cb.Composition):
    gens = cb.young_generators(lam)

    def rule(d: cb.Permutation, i: int):
        x, y = d[i - 1], d[i]
        if x > y:
            return ((d, QM1), (cb.times_s(d, i), Q))
        if y == x + 1 and x in gens:
            # d s_i = s_x d with s_x in S_lambda, absorbed by x_lambda
            return ((d, Q),)
        return ((cb.times_s(d, i), ONE),)
    return rule


def act_T(vec: Mapping[Key, RatFunc], i: int, rule) -> Vec:
    """Right multiplication by T_i."""
    acc: Vec = {}
    lo = i - 1
    clear = ~(3 << lo)
    for (w, mask), coef in vec.items():
        pair = ((mask >> lo) & 1, (mask >> i) & 1)
        base = mask & clear
        for keep, (a, b), f in _PUSH[pair]:
            m = base | (a << lo) | (b << i)
            c = coef if f is ONE else coef * f
            if keep:
                for w2, g in rule(w, i):
                    _add_into(acc, (w2, m), c if g is ONE else c * g)
            else:
                _add_into(acc, (w, m), c)
    return _clean(acc)


def act_c(vec: Mapping[Key, RatFunc], j: int) -> Vec:
    """Right multiplication by c_j."""
    out: Vec = {}
    b = _bit(j)
    for (w, mask), coef in vec.items():
        neg = bin(mask >> j).count("1") & 1
        if mask & b:
            out[(w, mask ^ b)] = coef if neg else -coef
        else:
            out[(w, mask | b)] = -coef if neg else coef
    return out


def act_mask(vec: Mapping[Key, RatFunc], mask: int) -> Vec:
    out = dict(vec)
    j = 1
    while mask:
        if mask & 1:
            out = act_c(out, j)
        mask >>= 1
        j += 1
    return out


def act_word(vec: Mapping[Key, RatFunc], word: Iterable[int], rule) -> Vec:
    out = dict(vec)
    for i in word:
        out = act_T(out, i, rule)
    return out


def scale(vec: Mapping[Key, RatFunc], x: RatFunc) -> Vec:
    if x.is_zero():
        return {}
    return {k: c * x for k, c in vec.items()}


def add_vecs(a: Mapping[Key, RatFunc], b: Mapping[Key, RatFunc], sb: RatFunc = ONE) -> Vec:
    acc = dict(a)
    for k, x in b.items():
        _add_into(acc, k, x if sb is ONE else x * sb)
    return _clean(acc)


def act_terms(vec: Mapping[Key, RatFunc], terms: Mapping[Key, RatFunc], rule) -> Vec:
    """Right multiplication by sum_{(w, a)} coef T_w c^a."""
    by_w: Dict[cb.Permutation, List[Tuple[int, RatFunc]]] = {}
    for (w, mask), coef in terms.items():
        by_w.setdefault(w, []).append((mask, coef))
    acc: Vec = {}
    for w, parts in by_w.items():
        base = act_word(vec, cb.reduced_word(w), rule)
        for mask, coef in parts:
            for k, x in act_mask(base, mask).items():
                _add_into(acc, k, x * coef)
    return _clean(acc)


class HCElement:
    """
    A sparse element sum coef * T_w c^alpha of H^c_r.

    >>> t = HCElement.T(2, 1)
    >>> t * t == (Q - ONE) * t + Q * HCElement.one(2)
    True
    """

    __slots__ = ("r", "terms")

    def __init__(self, r: int, terms: Optional[Mapping[Key, RatFunc]] = None):
        self.r = r
        self.terms: Vec = {k: as_ratfunc(x) for k, x in (terms or {}).items()
                           if not as_ratfunc(x).is_zero()}

    @classmethod
    def _raw(cls, r: int, terms: Vec) -> "HCElement":
        e = object.__new__(cls)
        e.r = r
        e.terms = terms
        return e

    # constructors
    @classmethod
    def zero(cls, r: int) -> "HCElement":
        return cls._raw(r, {})

    @classmethod
    def one(cls, r: int) -> "HCElement":
        return cls._raw(r, {(cb.identity(r), 0): ONE})

    @classmethod
    def scalar(cls, r: int, x) -> "HCElement":
        return cls(r, {(cb.identity(r), 0): x})

    @classmethod
    def T(cls, r: int, i: int) -> "HCElement":
        if not 1 <= i < r:
            raise IndexError(f"T_{i} not in H^c_{r}")
        return cls._raw(r, {(cb.times_s(cb.identity(r), i), 0): ONE})

    @classmethod
    def Tw(cls, w: cb.Permutation) -> "HCElement":
        return cls._raw(len(w), {(tuple(w), 0): ONE})

    @classmethod
    def c(cls, r: int, j: int) -> "HCElement":
        if not 1 <= j <= r:
            raise IndexError(f"c_{j} not in H^c_{r}")
        return cls._raw(r, {(cb.identity(r), _bit(j)): ONE})

    @classmethod
    def T_inv(cls, r: int, i: int) -> "HCElement":
        """T_i^{-1} = q^{-1} (T_i - (q - 1))."""
        return (cls.T(r, i) - cls.scalar(r, QM1)) * qpow(-1)

    # arithmetic
    def _check(self, other: "HCElement") -> None:
        if self.r != other.r:
            raise ValueError(f"rank mismatch: {self.r} vs {other.r}")

    def __add__(self, other):
        if not isinstance(other, HCElement):
            other = HCElement.scalar(self.r, other)
        self._check(other)
        return HCElement._raw(self.r, add_vecs(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return HCElement._raw(self.r, {k: -x for k, x in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, HCElement):
            other = HCElement.scalar(self.r, other)
        self._check(other)
        return HCElement._raw(self.r, add_vecs(self.terms, other.terms, NEG_ONE))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HCElement):
            return mul(self, other)
        return HCElement._raw(self.r, scale(self.terms, as_ratfunc(other)))

    def __rmul__(self, other):
        return HCElement._raw(self.r, scale(self.terms, as_ratfunc(other)))

    def __pow__(self, k: int):
        out = HCElement.one(self.r)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, HCElement):
            return NotImplemented
        return self.r == other.r and self.terms == other.terms

    def __hash__(self):
        return hash((self.r, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> Optional[int]:
        """0 or 1 for homogeneous elements, None otherwise (zero counts as even)."""
        ps = {bin(m).count("1") & 1 for (_, m) in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def coefficient(self, w: cb.Permutation, alpha: Sequence[int]) -> RatFunc:
        return self.terms.get((tuple(w), mask_from_alpha(alpha)), ZERO)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (w, m) in sorted(self.terms, key=lambda k: (cb.length(k[0]), k)):
            word = cb.reduced_word(w)
            t = "".join(f"T{i}" for i in word)
            c = "".join(f"c{j + 1}" for j in range(self.r) if (m >> j) & 1)
            parts.append(f"({self.terms[(w, m)]})*{t + c or '1'}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        keys = sorted(self.terms, key=lambda k: (cb.length(k[0]), k[0], k[1]))
        return {"r": self.r, "terms": [{"w": list(w), "alpha": list(alpha_from_mask(m, self.r)),
                                        "coeff": self.terms[(w, m)].to_json()} for w, m in keys]}

    @classmethod
    def from_json(cls, d) -> "HCElement":
        r = int(d["r"])
        terms: Vec = {}
        for t in d["terms"]:
            w = tuple(int(x) for x in t["w"])
            if sorted(w) != list(range(1, r + 1)):
                raise ValueError(f"not a permutation of 1..{r}: {w}")
            alpha = t.get("alpha", [0] * r)
            if len(alpha) != r:
                raise ValueError("alpha has the wrong length")
            _add_into(terms, (w, mask_from_alpha(alpha)), RatFunc.from_json(t.get("coeff", "1")))
        return cls._raw(r, _clean(terms))


def mul(x: HCElement, y: HCElement) -> HCElement:
    """Product in H^c_r, normal form T_w c^alpha."""
    x._check(y)
    if not x.terms or not y.terms:
        return HCElement.zero(x.r)
    return HCElement._raw(x.r, act_terms(x.terms, y.terms, _algebra_rule))


def product(factors: Sequence[HCElement], r: int) -> HCElement:
    out = HCElement.one(r)
    for f in factors:
        out = out * f
    return out


# ------------------------------------------------------------ special elements

def x_lambda(lam: Sequence[int]) -> HCElement:
    """Sum of T_w over the standard Young subgroup S_lambda."""
    lam = tuple(lam)
    r = sum(lam)
    return HCElement._raw(r, {(w, 0): ONE for w in cb.young_subgroup(lam)})


def c_interval(r: int, i: int, j: int, primed: bool = False) -> HCElement:
    """
    c_{q,i,j} = q^{j-i} c_i + ... + c_j, or its primed variant
    c_i + q c_{i+1} + ... + q^{j-i} c_j; zero when i > j.
    """
    if i > j:
        return HCElement.zero(r)
    if not (1 <= i <= r and 1 <= j <= r):
        raise IndexError(f"c interval [{i},{j}] outside 1..{r}")
    e = cb.identity(r)
    return HCElement._raw(r, {(e, _bit(m)): qpow(m - i if primed else j - m) for m in range(i, j + 1)})


def c_super_terms(parts: Sequence[int], alpha: Sequence[int], primed: bool = False) -> Dict[int, RatFunc]:
    """
    c^alpha_lambda (or its primed form) as {clifford mask: coefficient}.

    Blocks are disjoint and increasing, so multiplying out never reorders
    Clifford generators and no signs appear.
    """
    ps = cb.partial_sums(parts)
    out: Dict[int, RatFunc] = {0: ONE}
    for k, a in enumerate(alpha):
        if not a:
            continue
        lo, hi = ps[k] + 1, ps[k + 1]
        if lo > hi:
            return {}
        nxt: Dict[int, RatFunc] = {}
        for mask, coef in out.items():
            for m in range(lo, hi + 1):
                nxt[mask | _bit(m)] = coef * qpow(m - lo if primed else hi - m)
        out = nxt
    return out


def c_super(parts: Sequence[int], alpha: Sequence[int], primed: bool = False) -> HCElement:
    r = sum(parts)
    e = cb.identity(r)
    return HCElement._raw(r, {(e, m): x for m, x in c_super_terms(parts, alpha, primed).items()})


def t_sum(r: int, i: int, j: int, direction: str = "asc") -> HCElement:
    """
    asc:  1 + T_i + T_i T_{i+1} + ... + T_i ... T_j   (1 when j = i - 1)
    desc: 1 + T_j + T_j T_{j-1} + ... + T_j ... T_i   (here called with
          (j, i) as in the descending notation; 1 when i = j + 1)

    For ``desc`` the first index is the starting generator:
    ``t_sum(3, 2, 1, "desc") = 1 + T_2 + T_2 T_1``.
    """
    e = cb.identity(r)
    terms: Vec = {(e, 0): ONE}
    w = e
    if direction == "asc":
        for k in range(i, j + 1):
            w = cb.times_s(w, k)
            terms[(w, 0)] = ONE
    elif direction == "desc":
        for k in range(i, j - 1, -1):
            w = cb.times_s(w, k)
            terms[(w, 0)] = ONE
    else:
        raise ValueError("direction must be 'asc' or 'desc'")
    return HCElement._raw(r, terms)


def _h_prime_parts(a: cb.SuperMatrix):
    hat = a.hat
    nu = cb.column_reading(hat)
    alpha = cb.column_reading(a.odd)
    return cb.d_word(hat), c_super_terms(nu, alpha), cb.coset_reps(nu, cb.col_sums(hat))


def h_prime(a: cb.SuperMatrix) -> HCElement:
    """T_{d_A} c_A sum_{sigma in D_{nu_A} cap S_{co(A)}} T_sigma."""
    r = a.size
    word, cterms, sigmas = _h_prime_parts(a)
    d = cb.from_word(word, r)
    left = HCElement._raw(r, {(d, m): x for m, x in cterms.items()})
    right = HCElement._raw(r, {(s, 0): ONE for s in sigmas})
    return left * right


def standard_T(a: cb.SuperMatrix) -> HCElement:
    """T_A = x_{ro(A)} T_{d_A} c_A sum T_sigma."""
    return x_lambda(a.ro()) * h_prime(a)


# ----------------------------------------------------------- induced modules

class InducedModule:
    """
    The right module x_lambda H^c_r with basis x_lambda T_d c^alpha,
    d shortest in S_lambda d.  Vectors are dicts keyed like HCElement terms.
    """

    def __init__(self, lam: Sequence[int]):
        self.lam = tuple(lam)
        self.r = sum(self.lam)
        self.rule = _make_coset_rule(self.lam)

    def generator(self) -> Vec:
        return {(cb.identity(self.r), 0): ONE}

    def act_T(self, vec: Vec, i: int) -> Vec:
        return act_T(vec, i, self.rule)

    def act_c(self, vec: Vec, j: int) -> Vec:
        return act_c(vec, j)

    def act_word(self, vec: Vec, word: Iterable[int]) -> Vec:
        return act_word(vec, word, self.rule)

    def act(self, vec: Vec, h: HCElement) -> Vec:
        return act_terms(vec, h.terms, self.rule)

    def act_h_prime(self, vec: Vec, a: cb.SuperMatrix) -> Vec:
        """vec * T_{d_A} c_A sum T_sigma, factor by factor."""
        word, cterms, sigmas = _h_prime_parts(a)
        base = self.act_word(vec, word)
        mid: Vec = {}
        for mask, coef in cterms.items():
            for k, x in act_mask(base, mask).items():
                _add_into(mid, k, x * coef)
        mid = _clean(mid)
        acc: Vec = {}
        for s in sigmas:
            for k, x in self.act_word(mid, cb.reduced_word(s)).items():
                _add_into(acc, k, x)
        return _clean(acc)

    def from_element(self, h: HCElement) -> Vec:
        """Coordinates of an element known to lie in x_lambda H^c_r."""
        return {(w, m): x for (w, m), x in h.terms.items() if cb.is_min_right_coset(w, self.lam)}

    def to_element(self, vec: Vec) -> HCElement:
        acc: Vec = {}
        for u in cb.young_subgroup(self.lam):
            for (d, m), x in vec.items():
                _add_into(acc, (cb.compose(u, d), m), x)
        return HCElement._raw(self.r, _clean(acc))
