import io
import json
import subprocess
import sys

import pytest

from smalehom.cli import main


@pytest.fixture
def doc(tmp_path):
    def write(obj, name="in.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return write


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


GM = {"vertices": ["1", "2"], "edges": [{"id": "a", "src": "1", "tgt": "1"},
                                         {"id": "b", "src": "1", "tgt": "2"},
                                         {"id": "c", "src": "2", "tgt": "1"}]}


def test_dim_group_text(doc):
    code, out = run("dim-group", doc({"fixture": "FULL2"}), "--oracle", "4")
    assert code == 0
    assert out.splitlines()[0] == "rank 1, H=[2]"
    assert "PASS cylinder oracle depth 4" in out
    code, out = run("dim-group", doc(GM))
    assert code == 0 and out.splitlines()[0] == "rank 2, H=[[1,1],[1,0]]"


def test_dim_group_json(doc):
    code, out = run("dim-group", doc({"fixture": "GM"}), "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["group"]["H"] == [[1, 1], [1, 0]]
    assert data["limit"] == {"rank": 2, "torsion": []}


def test_oracle_and_decompose(doc):
    code, out = run("oracle", doc({"fixture": "GM"}), "--depth", "5")
    assert code == 0 and "FAIL" not in out
    code, out = run("decompose", doc({"fixture": "CYCLE2"}), "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["summands"]) == 2


def test_homology(doc):
    code, out = run("homology", doc({"fixture": "PAIR2"}))
    assert code == 0
    assert "H_0: rank 1, H=[2]" in out
    assert "N_Q=1 N_A=2 (certified)" in out
    code, out = run("homology", doc({"fixture": "PAIR2"}), "--window=-1:0")
    assert code == 0 and out.splitlines()[1:] == ["H_-1: 0", "H_0: rank 1, H=[2]"]
    code, out = run("homology", doc({"trivial": "GM"}), "--window", "0:0")
    assert code == 0 and "H_0: rank 2" in out


def test_verify_passes(doc):
    code, out = run("verify", doc({"fixture": "PAIR2"}), "--trunc", "3", "--seed", "1")
    assert code == 0
    assert out.count("PASS") > 20 and "FAIL" not in out


def test_verify_corrupt_sign_exits_one(doc):
    code, out = run("verify", doc({"fixture": "PAIR2", "harness": {"corrupt_sign": True}}), "--trunc", "3")
    assert code == 1
    assert "FAIL anticommutation" in out and "FAIL d^2 C" in out
    assert '"cell"' in out


def test_pages(doc):
    code, out = run("pages", doc({"fixture": "PAIR3"}), "--trunc", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["coherent"]


def test_presentations(doc):
    code, out = run("presentations", doc({"fixture": "FULL2"}), "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["mu"]["letter_map"] == {"0": 0, "1": 0, "2": 1, "3": 1}


def test_bad_json_reports_position(doc, capsys):
    code, _ = run("dim-group", doc('{"vertices": [1,\n  }'))
    assert code == 2
    assert "line 2, column 3" in capsys.readouterr().err


@pytest.mark.parametrize("payload", [
    {"vertices": ["1"], "edges": [{"id": "a", "src": "1", "tgt": "2"}]},
    {"vertices": ["1"], "edges": [], "colour": 1},
    {"fixture": "NOPE"},
])
def test_invalid_input_exits_two(doc, payload):
    assert run("dim-group", doc(payload))[0] == 2


def test_missing_file_and_bad_flags(tmp_path):
    assert run("dim-group", str(tmp_path / "absent.json"))[0] == 2
    assert run("verify", "x.json", "--window", "3:1")[0] == 2
    assert run("bogus")[0] == 2


def test_scan_cap_exits_three(doc):
    assert run("homology", doc({"fixture": "PAIR2"}), "--trunc", "1")[0] == 3


def test_output_is_deterministic(doc):
    path = doc({"fixture": "PAIR3"})
    cmd = [sys.executable, "-m", "smalehom", "verify", path, "--trunc", "3", "--format", "json", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
