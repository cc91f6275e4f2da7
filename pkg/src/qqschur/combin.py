"""
Compositions, integer and super matrices, permutations and the double coset
combinatorics attached to a matrix.

Conventions:

- compositions and matrices are plain tuples (``NatMatrix`` is a tuple of row
  tuples), indices in the math are 1-based, Python indices 0-based;
- a permutation is its one-line notation ``(w(1), ..., w(r))``;
  ``compose(x, y)`` is ``x o y`` and right multiplication by ``s_i`` swaps
  the entries in positions ``i`` and ``i+1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

Composition = Tuple[int, ...]
NatMatrix = Tuple[Tuple[int, ...], ...]
Permutation = Tuple[int, ...]
Word = Tuple[int, ...]


# ---------------------------------------------------------------- compositions

@lru_cache(maxsize=None)
def compositions(n: int, r: int) -> Tuple[Composition, ...]:
    """
    All compositions of ``r`` into ``n`` nonnegative parts, first part
    descending, then recursively.

    >>> compositions(2, 2)
    ((2, 0), (1, 1), (0, 2))
    """
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    if n == 1:
        return ((r,),)
    out = []
    for first in range(r, -1, -1):
        for rest in compositions(n - 1, r - first):
            out.append((first,) + rest)
    return tuple(out)


def partial_sums(parts: Sequence[int]) -> Tuple[int, ...]:
    """(0, l1, l1+l2, ..., r): entry i is the i-th partial sum."""
    out = [0]
    for x in parts:
        out.append(out[-1] + x)
    return tuple(out)


def young_generators(parts: Sequence[int]) -> frozenset:
    """Indices i with s_i in the standard Young subgroup."""
    gens = set()
    start = 0
    for x in parts:
        gens.update(range(start + 1, start + x))
        start += x
    return frozenset(gens)


# -------------------------------------------------------------------- matrices

def zero_matrix(n: int) -> NatMatrix:
    return tuple((0,) * n for _ in range(n))


def unit(n: int, i: int, j: int, x: int = 1) -> NatMatrix:
    """x * E_{i,j} (1-based)."""
    return tuple(tuple(x if (a, b) == (i - 1, j - 1) else 0 for b in range(n)) for a in range(n))


def diag(parts: Sequence[int]) -> NatMatrix:
    n = len(parts)
    return tuple(tuple(parts[i] if i == j else 0 for j in range(n)) for i in range(n))


def madd(a: NatMatrix, b: NatMatrix, sign: int = 1) -> NatMatrix:
    return tuple(tuple(x + sign * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_nonneg(a: NatMatrix) -> bool:
    return all(x >= 0 for row in a for x in row)


def size(a: NatMatrix) -> int:
    return sum(map(sum, a))


def row_sums(a: NatMatrix) -> Composition:
    return tuple(sum(row) for row in a)


def col_sums(a: NatMatrix) -> Composition:
    return tuple(sum(col) for col in zip(*a))


def column_reading(a: NatMatrix) -> Tuple[int, ...]:
    """nu_A = (a11, a21, ..., an1, a12, ..., ann)."""
    n = len(a)
    return tuple(a[i][j] for j in range(n) for i in range(n))


def _check_square(a) -> int:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    return n


@dataclass(frozen=True)
class MatrixStats:
    """
    Statistics of a square matrix A (all tables 1-based, padded at 0).

    ``at[i][j]`` is the partial sum a~_{i,j} for 0 <= i <= n, 1 <= j <= n with
    a~_{0,j} = a~_{n,j-1}; ``sigma[i][j]`` is sigma_{i,j};
    ``rowpre[h][k]`` = sum_{u<k} a_{h,u} (k = 1..n+1) and
    ``rowsuf[h][k]`` = sum_{j>k} a_{h,j} (k = 0..n).
    """
    n: int
    ro: Composition
    co: Composition
    nu: Tuple[int, ...]
    at: Tuple[Tuple[int, ...], ...]
    sigma: Tuple[Tuple[int, ...], ...]
    rowpre: Tuple[Tuple[int, ...], ...]
    rowsuf: Tuple[Tuple[int, ...], ...]


@lru_cache(maxsize=None)
def matrix_stats(a: NatMatrix) -> MatrixStats:
    n = _check_square(a)
    ro, co = row_sums(a), col_sums(a)
    mu_t = partial_sums(co)
    at = [[0] * (n + 1) for _ in range(n + 1)]
    sigma = [[0] * (n + 1) for _ in range(n + 1)]
    for j in range(1, n + 1):
        acc = mu_t[j - 1]
        at[0][j] = acc
        for i in range(1, n + 1):
            acc += a[i - 1][j - 1]
            at[i][j] = acc
        for i in range(0, n + 1):
            sigma[i][j] = mu_t[j - 1] + sum(a[u][p] for u in range(i) for p in range(j - 1, n))
    rowpre = [[0] * (n + 2) for _ in range(n + 1)]
    rowsuf = [[0] * (n + 1) for _ in range(n + 1)]
    for h in range(1, n + 1):
        row = a[h - 1]
        for k in range(1, n + 2):
            rowpre[h][k] = sum(row[:k - 1])
        for k in range(0, n + 1):
            rowsuf[h][k] = sum(row[k:])
    return MatrixStats(n, ro, co, column_reading(a),
                       tuple(map(tuple, at)), tuple(map(tuple, sigma)),
                       tuple(map(tuple, rowpre)), tuple(map(tuple, rowsuf)))


def shift_matrix(a: NatMatrix, h: int, k: int, sign: int) -> Optional[NatMatrix]:
    """
    A + sign*(E_{h,k} - E_{h+1,k}); None stands for an illegal matrix (a
    negative entry), which every formula treats as zero.
    """
    n = _check_square(a)
    if not (1 <= h <= n - 1 and 1 <= k <= n):
        raise IndexError(f"(h,k)=({h},{k}) out of range for n={n}")
    rows = [list(r) for r in a]
    rows[h - 1][k - 1] += sign
    rows[h][k - 1] -= sign
    if rows[h - 1][k - 1] < 0 or rows[h][k - 1] < 0:
        return None
    return tuple(map(tuple, rows))


@lru_cache(maxsize=None)
def nat_matrices(n: int, r: int) -> Tuple[NatMatrix, ...]:
    """M(n, r) in the order induced by compositions of r into n*n parts."""
    return tuple(tuple(tuple(c[i * n:(i + 1) * n]) for i in range(n)) for c in compositions(n * n, r))


# ---------------------------------------------------------------- permutations

def identity(r: int) -> Permutation:
    return tuple(range(1, r + 1))


def compose(x: Permutation, y: Permutation) -> Permutation:
    return tuple(x[k - 1] for k in y)


def inverse(w: Permutation) -> Permutation:
    out = [0] * len(w)
    for i, x in enumerate(w):
        out[x - 1] = i + 1
    return tuple(out)


def length(w: Permutation) -> int:
    r = len(w)
    return sum(1 for i in range(r) for j in range(i + 1, r) if w[i] > w[j])


def times_s(w: Permutation, i: int) -> Permutation:
    """w * s_i."""
    lst = list(w)
    lst[i - 1], lst[i] = lst[i], lst[i - 1]
    return tuple(lst)


def s_times(i: int, w: Permutation) -> Permutation:
    """s_i * w: swap the values i and i+1."""
    return tuple(i + 1 if x == i else (i if x == i + 1 else x) for x in w)


def from_word(word: Sequence[int], r: int) -> Permutation:
    w = identity(r)
    for i in word:
        w = times_s(w, i)
    return w


@lru_cache(maxsize=None)
def reduced_word(w: Permutation) -> Word:
    """
    A reduced word for w, found by stripping the smallest right descent
    repeatedly: w = w' s_i with i minimal and w(i) > w(i+1).
    """
    word: List[int] = []
    cur = list(w)
    while True:
        for i in range(len(cur) - 1):
            if cur[i] > cur[i + 1]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                word.append(i + 1)
                break
        else:
            break
    return tuple(reversed(word))


def in_young(w: Permutation, parts: Sequence[int]) -> bool:
    ps = partial_sums(parts)
    block = [0] * len(w)
    for b in range(len(parts)):
        for k in range(ps[b], ps[b + 1]):
            block[k] = b
    return all(block[k] == block[x - 1] for k, x in enumerate(w))


def is_min_right_coset(d: Permutation, parts: Sequence[int]) -> bool:
    """d is the shortest element of S_parts * d."""
    pos = inverse(d)
    return all(pos[j - 1] < pos[j] for j in young_generators(parts))


@lru_cache(maxsize=None)
def young_subgroup(parts: Composition) -> Tuple[Permutation, ...]:
    r = sum(parts)
    ps = partial_sums(parts)
    blocks = [range(ps[b] + 1, ps[b + 1] + 1) for b in range(len(parts))]
    out = []
    for choice in product(*(permutations(bl) for bl in blocks)):
        out.append(tuple(x for bl in choice for x in bl))
    return tuple(sorted(out, key=lambda w: (length(w), w)))


@lru_cache(maxsize=None)
def min_coset_reps(parts: Composition) -> Tuple[Permutation, ...]:
    """D_lambda: shortest representatives of the right cosets S_lambda d."""
    r = sum(parts)
    return tuple(sorted((d for d in permutations(range(1, r + 1)) if is_min_right_coset(d, parts)),
                        key=lambda w: (length(w), w)))


@lru_cache(maxsize=None)
def coset_reps(nu: Composition, mu: Composition) -> Tuple[Permutation, ...]:
    """D_nu intersected with S_mu, sorted by (length, one-line)."""
    if sum(nu) != sum(mu):
        raise ValueError("compositions of different sizes")
    return tuple(w for w in young_subgroup(mu) if is_min_right_coset(w, nu))


def double_coset_min(lam: Composition, mu: Composition) -> Tuple[Permutation, ...]:
    """D_{lambda,mu} by brute force."""
    r = sum(lam)
    return tuple(d for d in permutations(range(1, r + 1))
                 if is_min_right_coset(d, lam) and is_min_right_coset(inverse(d), mu))


# ------------------------------------------------------------------------ d_A

@lru_cache(maxsize=None)
def d_perm(a: NatMatrix) -> Permutation:
    """d_A(a~_{h-1,k} + p) = lam~_{h-1} + rowpre(h,k) + p."""
    st = matrix_stats(a)
    n = st.n
    lt = partial_sums(st.ro)
    r = lt[-1]
    w = [0] * r
    for h in range(1, n + 1):
        for k in range(1, n + 1):
            for p in range(1, a[h - 1][k - 1] + 1):
                w[st.at[h - 1][k] + p - 1] = lt[h - 1] + st.rowpre[h][k] + p
    return tuple(w)


@lru_cache(maxsize=None)
def d_word(a: NatMatrix) -> Word:
    """The reduced word of d_A as the concatenation of the blocks w_{i,j}."""
    st = matrix_stats(a)
    n = st.n
    word: List[int] = []
    for j in range(1, n):
        for i in range(2, n + 1):
            aij = a[i - 1][j - 1]
            s0, t0 = st.sigma[i - 1][j], st.at[i - 1][j]
            if aij == 0 or s0 == t0:
                continue
            for m in range(aij):
                word.extend(range(s0 + m, t0 + m, -1))
    return tuple(word)


def d_A(a: NatMatrix) -> Tuple[Permutation, Word]:
    return d_perm(a), d_word(a)


def d_is_identity_by_sums(a: NatMatrix) -> bool:
    """d_A = 1 iff sum_{u<=i-1, p>=j+1} a_{u,p} = 0 whenever a_{i,j} > 0."""
    n = len(a)
    for i in range(2, n + 1):
        for j in range(1, n):
            if a[i - 1][j - 1] > 0 and any(a[u][p] for u in range(i - 1) for p in range(j, n)):
                return False
    return True


# ----------------------------------------------------------------- supermatrix

@dataclass(frozen=True, order=True)
class SuperMatrix:
    """A pair (A0 | A1) with A0 over N and A1 over {0, 1}."""
    even: NatMatrix
    odd: NatMatrix

    def __post_init__(self):
        n = _check_square(self.even)
        if len(self.odd) != n or _check_square(self.odd) != n:
            raise ValueError("even and odd parts must be n x n")
        if any(x not in (0, 1) for row in self.odd for x in row):
            raise ValueError("odd entries must be 0 or 1")
        if any(x < 0 for row in self.even for x in row):
            raise ValueError("even entries must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.even)

    @property
    def hat(self) -> NatMatrix:
        return madd(self.even, self.odd)

    @property
    def size(self) -> int:
        return size(self.even) + size(self.odd)

    @property
    def parity(self) -> int:
        return size(self.odd) % 2

    def ro(self) -> Composition:
        return row_sums(self.hat)

    def co(self) -> Composition:
        return col_sums(self.hat)

    def to_json(self) -> dict:
        return {"even": [list(r) for r in self.even], "odd": [list(r) for r in self.odd]}

    @classmethod
    def from_json(cls, d) -> "SuperMatrix":
        return cls(tuple(map(tuple, d["even"])), tuple(map(tuple, d["odd"])))

    def __repr__(self):
        ev = "/".join(",".join(map(str, r)) for r in self.even)
        od = "/".join(",".join(map(str, r)) for r in self.odd)
        return f"({ev}|{od})"


def smat(even, odd=None) -> SuperMatrix:
    even = tuple(map(tuple, even))
    odd = tuple(map(tuple, odd)) if odd is not None else zero_matrix(len(even))
    return SuperMatrix(even, odd)


def super_add(a: SuperMatrix, even_delta: Optional[NatMatrix] = None,
              odd_delta: Optional[NatMatrix] = None) -> Optional[SuperMatrix]:
    """(A0 + even_delta | A1 + odd_delta), or None when that is not a super matrix."""
    ev = madd(a.even, even_delta) if even_delta is not None else a.even
    od = madd(a.odd, odd_delta) if odd_delta is not None else a.odd
    if any(x < 0 for row in ev for x in row):
        return None
    if any(x not in (0, 1) for row in od for x in row):
        return None
    return SuperMatrix(ev, od)


@lru_cache(maxsize=None)
def enumerate_super(n: int, r: int) -> Tuple[SuperMatrix, ...]:
    """All of M(n, r | Z2): for each hat matrix, all odd parts below it."""
    out = []
    for h in nat_matrices(n, r):
        cells = [(i, j) for i in range(n) for j in range(n) if h[i][j] > 0]
        for bits in product((0, 1), repeat=len(cells)):
            odd = [[0] * n for _ in range(n)]
            for (i, j), b in zip(cells, bits):
                odd[i][j] = b
            odd_t = tuple(map(tuple, odd))
            out.append(SuperMatrix(madd(h, odd_t, -1), odd_t))
    return tuple(out)


def enumerate_super_by_weights(n: int, lam: Composition, mu: Composition) -> Tuple[SuperMatrix, ...]:
    return tuple(a for a in _super_by_weight(n, sum(lam)).get((lam, mu), ()))


@lru_cache(maxsize=None)
def _super_by_weight(n: int, r: int) -> Dict[Tuple[Composition, Composition], Tuple[SuperMatrix, ...]]:
    buckets: Dict[Tuple[Composition, Composition], List[SuperMatrix]] = {}
    for a in enumerate_super(n, r):
        buckets.setdefault((a.ro(), a.co()), []).append(a)
    return {k: tuple(v) for k, v in buckets.items()}


def enumerate_star(n: int, max_size: int) -> Iterator[SuperMatrix]:
    """M*(n|Z2) with |A| <= max_size: super matrices with zero even diagonal."""
    for r in range(max_size + 1):
        for a in enumerate_super(n, r):
            if all(a.even[i][i] == 0 for i in range(n)):
                yield a


def is_star(a: SuperMatrix) -> bool:
    return all(a.even[i][i] == 0 for i in range(a.n))
