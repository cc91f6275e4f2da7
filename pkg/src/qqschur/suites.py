"""
Grid runners shared by the command line and the test suite.  Every runner
returns a list of report dicts {"check", "status", "witness"} in a fixed
order; sampled runners take an explicit seed.
"""
from __future__ import annotations

import random
from typing import Iterable, List, Optional, Sequence, Tuple

from . import combin as cb
from . import longform as lf
from .hecke import HCElement, x_lambda
from .ring import ONE, Q, vpow
from .schur import (KINDS, SPECIAL_KINDS, SchurElement, dimension, left_factor, phi_mul_bruteforce,
                    phi_mul_closed, special_factors)
from .sdp import HypothesisError

Report = dict


def _report(name: str, ok: bool, witness=None, **extra) -> Report:
    out = {"check": name, "status": "pass" if ok else "fail", "witness": None if ok else witness}
    out.update(extra)
    return out


def all_pass(reports: Iterable[Report]) -> bool:
    return all(r["status"] == "pass" for r in reports)


# ---------------------------------------------------------------- H^c_r relations

def _random_basis(r: int, rng: random.Random) -> HCElement:
    w = list(range(1, r + 1))
    rng.shuffle(w)
    mask = rng.randrange(1 << r)
    return HCElement._raw(r, {(tuple(w), mask): ONE})


def hecke_relations(ranks: Sequence[int] = (2, 3, 4), triples: int = 200, seed: int = 0) -> List[Report]:
    out: List[Report] = []
    rng = random.Random(seed)
    for r in ranks:
        T = lambda i: HCElement.T(r, i)
        c = lambda j: HCElement.c(r, j)
        one = HCElement.one(r)
        bad = []
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                lhs = c(i) * c(j) + c(j) * c(i)
                want = one * -2 if i == j else HCElement.zero(r)
                if lhs != want:
                    bad.append(["cliff", i, j])
        for i in range(1, r):
            if (T(i) - one * Q) * (T(i) + one) != HCElement.zero(r):
                bad.append(["quadratic", i])
            for j in range(1, r):
                if abs(i - j) > 1 and T(i) * T(j) != T(j) * T(i):
                    bad.append(["commute", i, j])
            if i < r - 1 and T(i) * T(i + 1) * T(i) != T(i + 1) * T(i) * T(i + 1):
                bad.append(["braid", i])
            for j in range(1, r + 1):
                if j not in (i, i + 1) and T(i) * c(j) != c(j) * T(i):
                    bad.append(["Tc commute", i, j])
            if T(i) * c(i) != c(i + 1) * T(i):
                bad.append(["Tc shift", i])
            if T(i) * c(i + 1) != c(i) * T(i) - (c(i) - c(i + 1)) * (Q - ONE):
                bad.append(["Tc twist", i])
            ti = HCElement.T_inv(r, i)
            if ti * T(i) != one or T(i) * ti != one:
                bad.append(["inverse", i])
            if ti * Q != T(i) - one * (Q - ONE):
                bad.append(["inverse formula", i])
            if T(i) * c(i + 1) != c(i) * ti * Q + c(i + 1) * (Q - ONE):
                bad.append(["T c inverse", i])
            if c(i) * T(i) != ti * c(i + 1) * Q + c(i) * (Q - ONE):
                bad.append(["c T inverse", i])
        for alpha in cb.compositions(r, r):
            x = x_lambda(alpha)
            for k in cb.young_generators(alpha):
                if x * HCElement.T_inv(r, k) != x * vpow(-2):
                    bad.append(["x T inverse", list(alpha), k])
        out.append(_report(f"defining relations r={r}", not bad, bad[:5]))
        bad = []
        for _ in range(triples):
            a, b, d = (_random_basis(r, rng) for _ in range(3))
            if (a * b) * d != a * (b * d):
                bad.append([a.to_json(), b.to_json(), d.to_json()])
        out.append(_report(f"associativity r={r} ({triples} random triples)", not bad, bad[:2]))
    return out


# --------------------------------------------------------------------- dimensions

def dimension_reports(pairs: Sequence[Tuple[int, int]]) -> List[Report]:
    out = []
    for n, r in pairs:
        count, rk = dimension(n, r)
        out.append(_report(f"dimension n={n} r={r}", count == rk, {"count": count, "rank": rk},
                           count=count, rank=rk))
    return out


# ----------------------------------------------------- Schur-level closed formulas

def closed_instances(n: int, r: int) -> List[Tuple[str, int, object]]:
    """(kind, h, A or mu) for every product with a closed formula at (n, r)."""
    out = []
    for a in cb.enumerate_super(n, r):
        for kind in KINDS:
            for h in range(1, (n if kind == "diag_odd" else n - 1) + 1):
                if left_factor(kind, h, a.ro()) is not None:
                    out.append((kind, h, a))
    if r >= 1:
        for mu in cb.compositions(n, r - 1):
            for h in range(1, n):
                for kind in SPECIAL_KINDS:
                    out.append((kind, h, mu))
    return out


def closed_vs_oracle(n: int, r: int, sample: Optional[int] = None, seed: int = 0) -> Report:
    """
    Closed formulas against brute force; instances outside the SDP hypothesis
    are counted as skipped.  With ``sample``, a seeded shuffle is walked until
    that many instances have been checked.
    """
    inst = closed_instances(n, r)
    if sample is not None:
        random.Random(seed).shuffle(inst)
    checked = skipped = 0
    bad = []
    for kind, h, arg in inst:
        if sample is not None and checked >= sample:
            break
        try:
            if kind in SPECIAL_KINDS:
                x, a = special_factors(kind, h, arg)
                closed = phi_mul_closed(kind, h, mu=arg)
            else:
                a = arg
                x = left_factor(kind, h, a.ro())
                closed = phi_mul_closed(kind, h, a)
        except HypothesisError:
            skipped += 1
            continue
        checked += 1
        if closed != phi_mul_bruteforce(x, a):
            bad.append([kind, h, a.to_json()])
    name = f"closed vs oracle n={n} r={r}" + (f" (sample of {sample}, seed {seed})" if sample else "")
    return _report(name, not bad and checked > 0, bad[:5], checked=checked, skipped=skipped)


# ------------------------------------------------------ long-level multiplication

CANONICAL_SYMBOLS = lambda n: ([f"G{i}" for i in range(1, n + 1)] + [f"G{i}^-1" for i in range(1, n + 1)]
                               + [f"Gbar{i}" for i in range(1, n + 1)]
                               + [f"{k}{i}" for k in ("X", "Y", "Xbar", "Ybar") for i in range(1, n)])


def j_grid(n: int) -> List[Tuple[int, ...]]:
    """0, eps_1 and -eps_n."""
    e1 = tuple(1 if k == 0 else 0 for k in range(n))
    en = tuple(-1 if k == n - 1 else 0 for k in range(n))
    return [(0,) * n, e1, en]


def long_closed_vs_eval(n: int, max_size: int, mode: str = "closed") -> Report:
    checked = skipped = 0
    bad = []
    for a in cb.enumerate_star(n, max_size):
        for j in j_grid(n):
            x = lf.LongElement.single(a, j)
            for s in CANONICAL_SYMBOLS(n):
                try:
                    c = lf.gen_mul(s, x, mode)
                except HypothesisError:
                    skipped += 1
                    continue
                checked += 1
                d = c - lf.gen_mul(s, x, "eval")
                if d.terms:
                    bad.append({"symbol": s, "matrix": a.to_json(), "j": list(j), "closed_minus_eval": d.to_json()})
    label = "closed" if mode == "closed" else "as-printed"
    return _report(f"long {label} vs eval n={n} |A|<={max_size}", not bad, bad[:4],
                   checked=checked, skipped=skipped, mismatches=len(bad))


def stabilization(n: int, max_size: int) -> Report:
    """Eval-mode fits from level windows starting at |A|+1 and |A|+2 agree."""
    checked = 0
    bad = []
    for a in cb.enumerate_star(n, max_size):
        r0 = a.size + 1
        for j in j_grid(n):
            x = lf.LongElement.single(a, j)
            for s in CANONICAL_SYMBOLS(n):
                checked += 1
                try:
                    p = lf.gen_mul(s, x, "eval", levels=(r0, r0 + 1))
                    q = lf.gen_mul(s, x, "eval", levels=(r0 + 1, r0 + 2))
                except lf.StabilizationError as exc:
                    bad.append({"symbol": s, "matrix": a.to_json(), "j": list(j), "error": str(exc)})
                    continue
                if p != q:
                    bad.append({"symbol": s, "matrix": a.to_json(), "j": list(j)})
    return _report(f"stabilization n={n} |A|<={max_size}", not bad, bad[:4], checked=checked)


# ----------------------------------------------------------------- relations

def qq_reports(pairs: Sequence[Tuple[int, int]], rewrite: bool = False) -> List[Report]:
    out = []
    for n, r in pairs:
        res = lf.verify_qq(n, r, rewrite)
        bad = [x for x in res if x["status"] != "pass"]
        out.append(_report(f"QQ relations n={n} r={r}" + (" (rewritten)" if rewrite else ""), not bad,
                           [x["check"] for x in bad], instances=len(res)))
        word = tuple(f"G{i}" for i in range(1, n + 1))
        ok = lf.word_apply(word, n, r) == SchurElement.identity(n, r, twisted=True).scale(vpow(r))
        out.append(_report(f"G1...G{n} = v^{r} n={n} r={r}", ok))
    return out


def kernel_reports(pairs: Sequence[Tuple[int, int]]) -> List[Report]:
    """The product over k in [0, r] vanishes; the shorter range [0, r-1] is recorded as is."""
    out = []
    for n, r in pairs:
        for i in range(1, n + 1):
            for odd in (False, True):
                name = f"kernel {'Gbar' if odd else ''}G{i} n={n} r={r}"
                full = lf.kernel_product(n, r, i, r, odd).is_zero()
                short = lf.kernel_product(n, r, i, r - 1, odd).is_zero()
                out.append(_report(name, full, "product up to v^r is nonzero", short_range_vanishes=short))
    return out


# --------------------------------------------------------------- triangularity

def triangularity(n: int, max_size: int) -> Report:
    total = 0
    bad = []
    for a in cb.enumerate_star(n, max_size):
        total += 1
        rep = lf.triangularity_check(a, a.size + 2)
        if rep["status"] != "pass":
            bad.append({"matrix": repr(a), "reason": rep["reason"], "witness": rep.get("witness")})
    return _report(f"triangularity n={n} |A|<={max_size}", not bad, bad, instances=total, failures=len(bad))


# ------------------------------------------------------------------------ PBW

def pbw_rank(n: int, r: int, max_weight: int, js: Optional[Sequence[Sequence[int]]] = None) -> Report:
    js = [tuple(j) for j in js] if js else [(0,) * n, tuple(1 if k == 0 else 0 for k in range(n))]
    items = [lf.pbw_word(a, j) for a in cb.enumerate_star(n, max_weight) for j in js]
    rk = lf.rank_check(items, n, r)
    return _report(f"PBW rank n={n} r={r} |A|<={max_weight}", rk == len(items),
                   {"rank": rk, "count": len(items)}, rank=rk, count=len(items))


def root_vector_independence(n: int = 4, r: int = 3) -> Report:
    bad = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if abs(i - j) < 2:
                continue
            for odd in (False, True):
                ks = range(min(i, j) + 1, max(i, j))
                vals = [lf.combo_apply(dict(lf.root_vector(i, j, odd, n, k)), n, r) for k in ks]
                if any(v != vals[0] for v in vals):
                    bad.append([i, j, odd])
    return _report(f"root vectors independent of k n={n} r={r}", not bad, bad)
