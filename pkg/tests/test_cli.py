import json
import subprocess
import sys
from pathlib import Path

import pytest

from qqschur import combin as cb
from qqschur.cli import main
from qqschur.hecke import HCElement
from qqschur.longform import LongElement
from qqschur.ring import ONE, Q
from qqschur.schur import SchurElement

FIX = Path(__file__).resolve().parent.parent / "fixtures"
T1 = json.dumps({"r": 2, "terms": [{"w": [2, 1]}]})
E21 = json.dumps({"even": [[0, 0], [1, 0]], "odd": [[0, 0], [0, 0]]})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_dims(capsys):
    code, out, _ = run(capsys, "dims", "--n", "2", "--r", "1")
    assert code == 0 and out == {"count": 8, "rank": 8}
    assert out == json.loads((FIX / "dims_n2_r1.json").read_text())


def test_hc_mul(capsys):
    code, out, _ = run(capsys, "hc-mul", "--left", T1, "--right", T1)
    t = HCElement.T(2, 1)
    assert code == 0 and HCElement.from_json(out) == (Q - ONE) * t + Q * HCElement.one(2)
    assert out == json.loads((FIX / "hc_mul_T1_T1.json").read_text())


def test_at_path_input(capsys, tmp_path):
    p = tmp_path / "t1.json"
    p.write_text(T1)
    code, out, _ = run(capsys, "hc-mul", "--left", f"@{p}", "--right", T1)
    assert code == 0
    code, _, err = run(capsys, "hc-mul", "--left", f"@{tmp_path / 'missing.json'}", "--right", T1)
    assert code == 2 and "cannot read" in err


def test_schur_mul_golden(capsys):
    left = json.dumps({"even": [[0, 1], [0, 1]], "odd": [[0, 0], [0, 0]]})
    right = json.dumps({"even": [[0, 0], [1, 1]], "odd": [[0, 0], [0, 0]]})
    code, out, _ = run(capsys, "schur-mul", "--n", "2", "--r", "2", "--left", left, "--right", right)
    assert code == 0 and out == json.loads((FIX / "schur_mul_n2_r2.json").read_text())
    code, tw, _ = run(capsys, "schur-mul", "--left", left, "--right", right, "--twisted")
    assert tw["basis"] == "twisted"


def test_schur_mul_closed_and_refusal(capsys):
    code, out, _ = run(capsys, "schur-mul", "--closed", "upper_even", "--row", "1", "--right", E21)
    assert code == 0 and SchurElement.from_json(out).r == 1
    code, _, err = run(capsys, "schur-mul", "--closed", "diag_odd", "--row", "1",
                       "--right", "[[0, 1], [1, 0]]")
    assert code == 3 and "hypothesis" in err
    code, out, _ = run(capsys, "schur-mul", "--closed", "upper2_1", "--row", "1", "--right", "[1, 0]")
    assert code == 0
    code, _, _ = run(capsys, "schur-mul", "--left", E21, "--right", E21)
    assert code == 2


def test_sdp(capsys):
    code, out, _ = run(capsys, "sdp", "--matrix", "[[0, 1], [1, 0]]")
    assert code == 1 and [r["status"] for r in out] == ["fail", "pass"]
    code, out, _ = run(capsys, "sdp", "--matrix", "[[0, 1], [1, 0]]", "--row", "2")
    assert code == 0
    code, out, _ = run(capsys, "sdp", "--matrix", "[[0, 1], [0, 0]]", "--family", "plus", "--row", "1", "--r", "2")
    assert code == 0 and out[0]["status"] == "pass"
    code, _, _ = run(capsys, "sdp", "--matrix", "[[0, 1], [1, 0]]", "--h", "1", "--k", "1")
    assert code == 2


def test_long_eval_and_gen_mul(capsys):
    code, out, _ = run(capsys, "long-eval", "--matrix", E21, "--j", "[1, 0]", "--r", "2")
    assert code == 0 and SchurElement.from_json(out).twisted
    code, out, _ = run(capsys, "long-eval", "--matrix", '{"even":[[0,1],[0,0]],"odd":[[0,0],[1,0]]}',
                       "--j", "[1, 0]", "--r", "3")
    assert out == json.loads((FIX / "long_eval_n2_r3.json").read_text())
    code, out, _ = run(capsys, "gen-mul", "--left", "G1", "--matrix", E21, "--j", "[0, 0]")
    a = cb.SuperMatrix.from_json(json.loads(E21))
    assert code == 0 and LongElement.from_json(out) == LongElement.single(a, (1, 0))
    code, _, _ = run(capsys, "gen-mul", "--left", "Xbar1", "--matrix", E21)
    assert code == 3
    code, out, _ = run(capsys, "gen-mul", "--left", "Xbar1", "--matrix", E21, "--mode", "eval")
    assert code == 0 and out["terms"]
    code, _, _ = run(capsys, "gen-mul", "--left", "X7", "--matrix", E21)
    assert code == 2


def test_verify_qq(capsys):
    code, out, _ = run(capsys, "verify-qq", "--n", "2", "--r", "2")
    assert code == 0 and out and all(r["status"] == "pass" for r in out)


def test_triangular(capsys):
    code, out, _ = run(capsys, "triangular", "--matrix", "[[0, 1], [0, 0]]", "--r", "3")
    assert code == 0 and out[0]["status"] == "pass"
    odd21 = json.dumps({"even": [[0] * 3] * 3, "odd": [[0, 0, 0], [1, 0, 0], [0, 0, 0]]})
    code, out, _ = run(capsys, "triangular", "--matrix", odd21)
    assert code == 1 and out[0]["reason"] == "term not below A"


def test_pbw_rank(capsys):
    code, out, _ = run(capsys, "pbw-rank", "--n", "2", "--r", "4", "--max-weight", "2")
    assert code == 0 and out["rank"] == out["count"] == 48
    assert out == json.loads((FIX / "pbw_rank_n2_r4.json").read_text())


@pytest.mark.parametrize("argv", [
    ["hc-mul", "--left", "{nope", "--right", T1],
    ["hc-mul", "--left", json.dumps({"r": 2, "terms": [{"w": [1, 1]}]}), "--right", T1],
    ["long-eval", "--matrix", E21, "--j", "[1]", "--r", "2"],
    ["long-eval", "--matrix", E21, "--j", "[1, 0]"],
    ["dims", "--n", "2"],
    ["sdp", "--matrix", "[[1, 0], [0, 1]]", "--n", "3"],
])
def test_malformed_input(capsys, argv):
    assert main(argv) == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_out_file(capsys, tmp_path):
    p = tmp_path / "o.json"
    assert main(["dims", "--n", "1", "--r", "1", "--out", str(p)]) == 0
    assert json.loads(p.read_text()) == {"count": 2, "rank": 2}
    assert capsys.readouterr().out == ""


def test_round_trip(capsys):
    code, out, _ = run(capsys, "hc-mul", "--left", T1, "--right", T1)
    assert HCElement.from_json(out).to_json() == out
    code, out, _ = run(capsys, "gen-mul", "--left", "Y1", "--matrix", E21)
    assert LongElement.from_json(out).to_json() == out


def test_deterministic_output():
    cmd = [sys.executable, "-m", "qqschur.cli", "suite", "relations", "--seed", "11"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)
