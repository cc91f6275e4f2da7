# Sparse exact elimination over Q(v); vectors are dicts key -> RatFunc.
from __future__ import annotations

from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Tuple

from .ring import ONE, RatFunc


class OutsideSpan(ValueError):
    """Raised when a vector that should lie in a span leaves a residual."""


class DependentRows(ValueError):
    pass


def _is_unit(x: RatFunc) -> bool:
    return x.den.is_one() and len(x.num.c) == 1


def _axpy(acc: Dict, x: Mapping, f: RatFunc) -> None:
    # acc -= f * x, in place
    for k, c in x.items():
        y = acc.get(k)
        z = -(c * f) if y is None else y - c * f
        if z.is_zero():
            acc.pop(k, None)
        else:
            acc[k] = z


def _pick_pivot(vec: Mapping) -> Hashable:
    # smallest key among unit coefficients keeps the arithmetic Laurent;
    # otherwise the smallest key
    units = [k for k, x in vec.items() if _is_unit(x)]
    return min(units) if units else min(vec)


class Echelon:
    """
    Rows in echelon form, each remembering which combination of the
    original labelled vectors it is.
    """

    def __init__(self):
        self.rows: List[Tuple[Hashable, Dict, Dict]] = []  # (pivot, vec, combo)

    def _reduce(self, vec: Dict, combo: Optional[Dict]) -> None:
        for p, rv, rc in self.rows:
            x = vec.get(p)
            if x is None:
                continue
            f = x if rv[p] == ONE else x / rv[p]
            _axpy(vec, rv, f)
            if combo is not None:
                _axpy(combo, rc, f)

    def add(self, label: Hashable, vec: Mapping, strict: bool = True) -> bool:
        v = {k: x for k, x in vec.items() if not x.is_zero()}
        combo = {label: ONE}
        self._reduce(v, combo)
        if not v:
            if strict:
                raise DependentRows(f"vector {label!r} is dependent on earlier ones")
            return False
        self.rows.append((_pick_pivot(v), v, combo))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def solve(self, vec: Mapping) -> Dict:
        """Coefficients c with vec = sum c[label] * original[label]."""
        z = {k: x for k, x in vec.items() if not x.is_zero()}
        coeffs: Dict = {}
        for p, rv, rc in self.rows:
            x = z.get(p)
            if x is None:
                continue
            f = x if rv[p] == ONE else x / rv[p]
            _axpy(z, rv, f)
            _axpy(coeffs, rc, -f)
        if z:
            raise OutsideSpan(f"residual with {len(z)} nonzero coordinates")
        return coeffs


def rank(vectors: Iterable[Mapping]) -> int:
    e = Echelon()
    for i, v in enumerate(vectors):
        e.add(i, v, strict=False)
    return e.rank
