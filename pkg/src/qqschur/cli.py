"""
qqschur command line.  Inputs are inline JSON or @path; output is sorted
JSON on stdout (or --out).

Exit codes: 0 all requested checks pass, 1 a check failed, 2 malformed
input, 3 a closed formula was asked for outside its hypotheses.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import combin as cb
from . import longform as lf
from . import schur as sc
from . import sdp as sd
from . import suites
from .hecke import HCElement
from .sdp import HypothesisError


class InputError(ValueError):
    pass


def _load(text: Optional[str], what: str):
    if text is None:
        raise InputError(f"missing {what}")
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {what}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON for {what}: {exc}") from exc


def _matrix(text: Optional[str], what: str = "--matrix", n: Optional[int] = None) -> cb.SuperMatrix:
    d = _load(text, what)
    a = cb.SuperMatrix.from_json(d) if isinstance(d, dict) else cb.smat(d)
    if n is not None and a.n != n:
        raise InputError(f"{what} is {a.n}x{a.n} but --n is {n}")
    return a


def _ints(text: Optional[str], what: str) -> tuple:
    d = _load(text, what)
    if not isinstance(d, list) or not all(isinstance(x, int) for x in d):
        raise InputError(f"{what} must be a list of integers")
    return tuple(d)


def _need(args, *names):
    for k in names:
        if getattr(args, k) is None:
            raise InputError(f"--{k.replace('_', '-')} is required")


def _status(reports) -> int:
    return 0 if suites.all_pass(reports) else 1


# ------------------------------------------------------------------- commands

def cmd_hc_mul(args):
    x = HCElement.from_json(_load(args.left, "--left"))
    y = HCElement.from_json(_load(args.right, "--right"))
    if args.r is not None and x.r != args.r:
        raise InputError(f"element rank {x.r} does not match --r {args.r}")
    return (x * y).to_json(), 0


def cmd_schur_mul(args):
    if args.closed:
        _need(args, "row")
        if args.closed in sc.SPECIAL_KINDS:
            mu = _ints(args.right, "--right")
            return sc.phi_mul_closed(args.closed, args.row, mu=mu).to_json(), 0
        a = _matrix(args.right, "--right", args.n)
        if args.left is not None:
            b = _matrix(args.left, "--left", args.n)
            if b != sc.left_factor(args.closed, args.row, a.ro()):
                raise InputError(f"--left is not the {args.closed} factor at row {args.row} for --right")
        return sc.phi_mul_closed(args.closed, args.row, a).to_json(), 0
    a = _matrix(args.right, "--right", args.n)
    b = _matrix(args.left, "--left", args.n)
    if args.r is not None and a.size != args.r:
        raise InputError(f"|--right| = {a.size} but --r is {args.r}")
    if b.co() != a.ro():
        raise InputError("column sums of --left differ from row sums of --right")
    res = sc.twist_mul(b, a) if args.twisted else sc.phi_mul_bruteforce(b, a)
    return res.to_json(), 0


def cmd_sdp(args):
    a = _matrix(args.matrix, n=args.n)
    if args.family:
        _need(args, "row", "r")
        ok = sd.sdp_family(a, args.row, args.r, args.family)
        return [suites._report(f"sdp family {args.family} row {args.row} r={args.r}", ok, repr(a))], int(not ok)
    if args.h is not None or args.k is not None:
        _need(args, "h", "k")
        ok = sd.sdp_at(a, args.h, args.k)
        return [suites._report(f"sdp at ({args.h},{args.k})", ok, repr(a))], int(not ok)
    if args.row is not None:
        ok = sd.sdp_row(a, args.row)
        return [suites._report(f"sdp row {args.row}", ok, repr(a))], int(not ok)
    h = a.hat
    reps = [suites._report(f"sdp at ({i},{k})", sd.sdp_at(a, i, k), repr(a))
            for i in range(1, a.n + 1) for k in range(1, a.n + 1) if h[i - 1][k - 1] > 0]
    return reps, _status(reps)


def cmd_long_eval(args):
    _need(args, "r")
    a = _matrix(args.matrix, n=args.n)
    j = _ints(args.j, "--j")
    if len(j) != a.n:
        raise InputError("--j has the wrong length")
    return lf.LongElement.single(a, j).evaluate(args.r).to_json(), 0


def cmd_gen_mul(args):
    _need(args, "left")
    if args.right is not None:
        x = lf.LongElement.from_json(_load(args.right, "--right"))
    else:
        a = _matrix(args.matrix, n=args.n)
        x = lf.LongElement.single(a, _ints(args.j, "--j") if args.j else (0,) * a.n)
    lf.parse_symbol(args.left, x.n)
    levels = (args.r, args.r + 1) if args.r is not None else None
    try:
        return lf.gen_mul(args.left, x, args.mode, levels=levels).to_json(), 0
    except lf.StabilizationError as exc:
        return [suites._report(f"gen-mul {args.left}", False, str(exc))], 1


def cmd_verify_qq(args):
    _need(args, "n", "r")
    reps = lf.verify_qq(args.n, args.r, args.rewrite)
    return reps, _status(reps)


def cmd_triangular(args):
    a = _matrix(args.matrix, n=args.n)
    rep = lf.triangularity_check(a, args.r)
    rep.setdefault("witness", None)
    return [rep], _status([rep])


def cmd_pbw_rank(args):
    _need(args, "n", "r", "max_weight")
    js = _load(args.j, "--j") if args.j else None
    rep = suites.pbw_rank(args.n, args.r, args.max_weight, js)
    return rep, _status([rep])


def cmd_dims(args):
    _need(args, "n", "r")
    count, rk = sc.dimension(args.n, args.r)
    return {"count": count, "rank": rk}, int(count != rk)


SUITES = ("relations", "hecke-lemmas", "sdp-criteria", "dims", "schur-closed", "long-closed",
          "qq", "triangular", "pbw")


def run_suite(name: str, seed: int) -> List[dict]:
    from .identities import verify_hecke_identities, verify_sdp_criteria
    if name == "relations":
        return suites.hecke_relations(seed=seed)
    if name == "hecke-lemmas":
        return verify_hecke_identities(3, 4)
    if name == "sdp-criteria":
        return verify_sdp_criteria(3, 4)
    if name == "dims":
        return suites.dimension_reports([(1, 1), (2, 1), (2, 2), (2, 3), (3, 2)])
    if name == "schur-closed":
        return ([suites.closed_vs_oracle(2, r) for r in (1, 2, 3)]
                + [suites.closed_vs_oracle(3, 3, sample=50, seed=seed)])
    if name == "long-closed":
        return [suites.long_closed_vs_eval(2, 2), suites.stabilization(2, 2),
                suites.long_closed_vs_eval(2, 2, mode="printed")]
    if name == "qq":
        pairs = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)]
        return suites.qq_reports(pairs) + suites.kernel_reports([(2, 2), (2, 3), (3, 2)])
    if name == "triangular":
        return [suites.triangularity(2, 3), suites.triangularity(3, 2)]
    if name == "pbw":
        return [suites.pbw_rank(2, 4, 2), suites.root_vector_independence(4, 3)]
    raise InputError(f"unknown suite {name!r}")


def cmd_suite(args):
    names = SUITES if args.name == "all" else (args.name,)
    reps = [dict(rep, suite=nm) for nm in names for rep in run_suite(nm, args.seed)]
    return reps, _status(reps)


COMMANDS = {
    "hc-mul": cmd_hc_mul, "schur-mul": cmd_schur_mul, "sdp": cmd_sdp, "long-eval": cmd_long_eval,
    "gen-mul": cmd_gen_mul, "verify-qq": cmd_verify_qq, "triangular": cmd_triangular,
    "pbw-rank": cmd_pbw_rank, "dims": cmd_dims, "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the JSON result here instead of stdout")

    p = argparse.ArgumentParser(prog="qqschur", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("hc-mul", parents=[common], help="product of two Hecke-Clifford elements")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)

    s = sub.add_parser("schur-mul", parents=[common], help="phi_B phi_A by brute force or closed formula")
    s.add_argument("--left")
    s.add_argument("--right", required=True)
    s.add_argument("--closed", choices=sc.KINDS + sc.SPECIAL_KINDS)
    s.add_argument("--row", type=int, help="row index h of the closed formula")
    s.add_argument("--twisted", action="store_true", help="result in the sign-twisted basis")

    s = sub.add_parser("sdp", parents=[common], help="decide the SDP condition")
    s.add_argument("--matrix", required=True)
    s.add_argument("--h", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--row", type=int)
    s.add_argument("--family", choices=("diag", "plus"))

    s = sub.add_parser("long-eval", parents=[common], help="evaluate A(A, j) at level r")
    s.add_argument("--matrix", required=True)
    s.add_argument("--j", required=True)

    s = sub.add_parser("gen-mul", parents=[common], help="generator times a long element")
    s.add_argument("--left", help="generator symbol, e.g. X1, Gbar2, G1^-1")
    s.add_argument("--right", help="long element JSON; or use --matrix/--j")
    s.add_argument("--matrix")
    s.add_argument("--j")
    s.add_argument("--mode", choices=("closed", "printed", "eval"), default="closed")

    s = sub.add_parser("verify-qq", parents=[common], help="defining relations at level r")
    s.add_argument("--rewrite", action="store_true", help="rewrite Y, Ybar through the inverse generators")

    s = sub.add_parser("triangular", parents=[common], help="triangularity of the monomial m^A")
    s.add_argument("--matrix", required=True)

    s = sub.add_parser("pbw-rank", parents=[common], help="rank of PBW images at level r")
    s.add_argument("--max-weight", type=int)
    s.add_argument("--j", help="JSON list of j vectors (default 0 and e_1)")

    sub.add_parser("dims", parents=[common], help="count and rank of the standard basis")

    s = sub.add_parser("suite", parents=[common], help="run a named verification grid")
    s.add_argument("name", choices=SUITES + ("all",))
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result, code = COMMANDS[args.command](args)
    except HypothesisError as exc:
        print(f"qqschur: hypothesis violated: {exc}", file=sys.stderr)
        return 3
    except (InputError, ValueError, KeyError, TypeError, IndexError) as exc:
        print(f"qqschur: bad input: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
