import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from regbuild import ParamAssignment, canonical_string, parse_type
from regbuild.checks import load_fixture
from regbuild.cli import main

GOLD = Path(__file__).parent / "golden"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    rc = main(list(argv), out=out, err=err)
    return rc, out.getvalue(), err.getvalue()


def cfg(name):
    return str(GOLD / name)


def test_sphere_a2_vertex():
    rc, out, _ = run("sphere", "--config", cfg("a2.json"), "--I", "1,2", "--J", "1,2", "--word", "0")
    assert rc == 0
    # q(q^2+q+1)(q+1)
    assert out == "q^4 + 2*q^3 + 2*q^2 + q\n"


def test_structconst_f4():
    rc, out, _ = run(
        "structconst", "--config", cfg("f4.json"), "--I", "1,2,3", "--J", "1,2,3", "--K", "1,2,3",
        "--u-word", "0,1,2,1,0", "--v-word", "0", "--w-word", "0,1,2,1,3,2,1,0",
    )
    assert rc == 0
    assert out == "s*t^2 + s*t + s\n"


def test_structconst_rejects_unreduced_word():
    rc, out, err = run(
        "structconst", "--config", cfg("f4.json"), "--I", "1,2,3", "--J", "1,2,3", "--K", "1,2,3",
        "--u-word", "1,0", "--v-word", "0", "--w-word", "",
    )
    assert rc == 1 and out == ""
    assert err.startswith("error: NotReducedError:") and err.count("\n") == 1


def test_multable_golden_and_reference_rows():
    rc, out, _ = run("multable", "--config", cfg("f4.json"), "--I", "1,2,3", "--max-len", "15")
    assert rc == 0
    assert out == (GOLD / "f4_multable.json").read_text()
    table = json.loads(out)
    assert len(table) == 25
    fx = load_fixture("f4")
    W = parse_type("F4")
    P = ParamAssignment(fx["params"], W)
    label = lambda t: ",".join(map(str, W.from_word([int(c) - 1 for c in t]).word))
    reps = [label(t) for t in fx["reps"]]
    for i, row in fx["rows_times_A1"].items():
        want = {reps[int(k)]: canonical_string(P.poly(v)) for k, v in row.items()}
        assert table[f"{reps[int(i)]}|{reps[1]}"] == want


def test_multable_commutative_f4():
    table = json.loads((GOLD / "f4_multable.json").read_text())
    for key, row in table.items():
        u, v = key.split("|")
        assert table[f"{v}|{u}"] == row


def test_commutativity_golden():
    rc, out, _ = run("commutativity", "--config", cfg("f4.json"), "--I", "1,2,3", "--bound", "15", "--format", "json")
    assert rc == 0
    assert out == (GOLD / "f4_commutativity.json").read_text()
    rc, out, _ = run("commutativity", "--config", cfg("f4.json"), "--I", "1,2,3", "--bound", "15")
    assert out.startswith("no counterexample up to length 15")


def test_commutativity_e8_json():
    I = "0,2,3,4,5,6,7"
    rc, out, _ = run("commutativity", "--config", cfg("e8.json"), "--I", I, "--bound", "25", "--format", "json")
    assert rc == 0
    res = json.loads(out)
    assert res["commutative_up_to_bound"] is False
    W = parse_type("E8")
    named = [",".join(map(str, W.from_word([int(c) - 1 for c in t]).word)) for t in load_fixture("e8")["named_reps"]]
    # u = w1, v = w2; at w = w6: C_{2,1}^6 = c_{v,u^-1} = 1 and C_{1,2}^6 = c_{u,v^-1} = 0
    hit = [m for m in res["mismatches"] if m["w"] == named[6]]
    assert hit == [{"u": named[1], "v": named[2], "w": named[6], "c_u_vinv": "0", "c_v_uinv": "1"}]


def test_walk_golden():
    rc, out, _ = run("walk", "--config", cfg("a2_q2.json"), "--I", "0", "--steps", "12")
    assert rc == 0
    assert out == (GOLD / "a2_walk.tsv").read_text()
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    assert [r[1] for r in rows[:6]] == ["1", "0", "1/12", "5/144", "43/1728", "335/20736"]


def test_walk_probs_and_values():
    rc, out, _ = run("walk", "--config", cfg("a2.json"), "--I", "0", "--steps", "4", "--values", "q=2",
                     "--probs", cfg("probs_simple.json"), "--format", "json")
    assert rc == 0
    rows = json.loads(out)
    assert [r["p"] for r in rows] == ["1", "0", "1/12", "5/144", "43/1728"]
    rc, out, _ = run("walk", "--config", cfg("a2_q2.json"), "--I", "0", "--steps", "4", "--float", "--format", "json")
    assert abs(float(json.loads(out)[2]["p"]) - 1 / 12) < 1e-15


def test_walk_errors():
    rc, _, err = run("walk", "--config", cfg("a2_q2.json"), "--I", "0", "--steps", "3", "--probs", cfg("probs_half.json"))
    assert rc == 1 and "WalkError" in err and "defect -1/2" in err
    rc, _, err = run("walk", "--config", cfg("a2.json"), "--I", "0", "--steps", "3")
    assert rc == 1 and "--values" in err
    rc, _, err = run("walk", "--config", cfg("a2_q2.json"), "--I", "0", "--steps", "-1")
    assert rc == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["sphere", "--bogus"],
        ["nosuchcommand"],
        ["sphere", "--config", "/nonexistent.json", "--I", "", "--J", "", "--word", ""],
        ["sphere", "--config", str(GOLD / "a2.json"), "--I", "0,1,2", "--J", "0", "--word", ""],
        ["sphere", "--config", str(GOLD / "a2.json"), "--I", "7", "--J", "0", "--word", ""],
        ["check", "--suite", "nope"],
    ],
)
def test_validation_errors_exit_1(argv):
    rc, out, err = run(*argv)
    assert rc == 1
    assert err.strip().splitlines()[-1].startswith("error: ")


def test_bad_matrix_config(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"coxeter_matrix": [[1, 1], [1, 1]], "parameters": ["q", "q"]}))
    rc, _, err = run("sphere", "--config", str(p), "--I", "", "--J", "", "--word", "")
    assert rc == 1 and "CoxeterMatrixError" in err
    p.write_text(json.dumps({"coxeter_matrix": [[1, 3], [3, 1]], "parameters": ["q"]}))
    rc, _, err = run("sphere", "--config", str(p), "--I", "", "--J", "", "--word", "")
    assert rc == 1


def test_check_f4_suite():
    rc, out, _ = run("check", "--suite", "f4")
    assert rc == 0
    lines = out.splitlines()
    assert all(l.startswith("[PASS]") for l in lines if not l.startswith("[NOTE]"))


def test_determinism_subprocess():
    argv = [sys.executable, "-m", "regbuild", "multable", "--config", cfg("f4.json"), "--I", "1,2,3", "--max-len", "15"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b == (GOLD / "f4_multable.json").read_bytes()
