import json
import subprocess
import sys
from pathlib import Path

import pytest

from qct.cli import main

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "dc3.txt").write_text("n 3 reflexive\n0 1\n1 2\n2 0\n")
    (tmp_path / "tt2.txt").write_text("n 2 reflexive\n0 1\n")
    (tmp_path / "bad.txt").write_text("n 3\n0 1 2\n")
    (tmp_path / "s.txt").write_text("A x E y : edge(x,y)\n")
    # 5 vertices retracting onto the 3-cycle 0->1->2->0 (3 and 4 both fold onto 0)
    (tmp_path / "h5.txt").write_text("n 5 reflexive\n0 1\n1 2\n2 0\n0 3\n3 1\n2 3\n0 4\n4 1\n2 4\n3 4\n")
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_classify(files, capsys):
    code, out, _ = run(["classify", files / "dc3.txt"], capsys)
    assert code == 0 and out["verdict"] == "NPHard"
    code, out, _ = run(["classify", files / "tt2.txt"], capsys)
    assert code == 0 and out["verdict"] == "NL"
    code, out, err = run(["classify", files / "bad.txt"], capsys)
    assert code == 2 and out is None and "line 2" in err


def test_solve(files, capsys, monkeypatch):
    code, out, _ = run(["solve", files / "tt2.txt", files / "s.txt"], capsys)
    assert code == 0 and out == {"answer": True, "engine": "q2sat"}
    code, _, err = run(["solve", files / "dc3.txt", files / "s.txt", "--engine", "q2sat"], capsys)
    assert code == 3 and "refused" in err
    names = [f"v{i}" for i in range(19)]
    (files / "big.txt").write_text(" ".join(f"E {v}" for v in names) + " A w : edge(v18,w) edge(w,v18)\n")
    monkeypatch.setenv("QCT_NODE_BUDGET", "2000")
    code, out, _ = run(["solve", files / "dc3.txt", files / "big.txt", "--engine", "game"], capsys)
    assert code == 4 and out["answer"] == "budget"
    (files / "broken.txt").write_text("A x : edge(x,q)\n")
    code, _, err = run(["solve", files / "dc3.txt", files / "broken.txt"], capsys)
    assert code == 2 and "undeclared" in err


def test_solve_free_variable(files, capsys):
    (files / "f.txt").write_text("F c A y : edge(c,y)\n")
    code, out, _ = run(["solve", files / "tt2.txt", files / "f.txt", "--assign", "c=0"], capsys)
    assert code == 0 and out["answer"] is True
    code, _, err = run(["solve", files / "tt2.txt", files / "f.txt"], capsys)
    assert code == 2 and "--assign" in err


def test_spill(files, capsys):
    code, out, _ = run(["spill", files / "h5.txt", "--core", "0,1,2"], capsys)
    assert code == 0 and out["full"] is True and out["union"] == [0, 1, 2, 3, 4]
    code, out, _ = run(["spill", files / "h5.txt", "--core", "0,1,2", "--plus"], capsys)
    assert code == 0 and out["plus"] is True
    code, _, _ = run(["spill", files / "h5.txt", "--core", "0,1,2", "--cycle", "0,2,1"], capsys)
    assert code == 2


def test_gadget(files, capsys):
    out_path = files / "cyl4.txt"
    code, out, _ = run(["gadget", "cyl", "-m", "4", "-o", out_path], capsys)
    assert code == 0 and out["n"] == 16 and out["edge_count"] == 56
    lines = out_path.read_text().splitlines()
    assert lines[0] == "n 16" and len(lines) == 57
    assert json.loads((files / "cyl4.txt.meta.json").read_text())["top_cycle"] == [12, 13, 14, 15]


def test_reduce(files, capsys):
    code, out, _ = run(["reduce", GOLDEN / "reduce_BaseII.json", "-o", files / "inst.txt"], capsys)
    assert code == 0 and out["problems"] == []
    assert out["stats"]["instance_size"] == 46
    assert (files / "inst.txt.sentence").read_text().startswith("A c1 A c2 A c3")
    (files / "junk.json").write_text("{")
    assert run(["reduce", files / "junk.json"], capsys)[0] == 2


def test_certify(files, capsys):
    code, out, _ = run(["certify", files / "dc3.txt"], capsys)
    assert code == 0 and out["route"] == "direct-endo-trivial" and out["problems"] == []
    assert run(["certify", files / "tt2.txt"], capsys)[0] == 3
    code, out, _ = run(["certify", GOLDEN / "figure4_witness.txt", "--core", "0,1,2"], capsys)
    assert code == 0 and out["route"] == "GeneralI"


def test_enum(capsys):
    code, out, _ = run(["enum", "-n", "5"], capsys)
    assert code == 0 and out["count"] == 12 and len(out["tournaments"]) == 12


def test_verify_and_usage(capsys):
    code, out, err = run(["verify", "--suite", "reduction"], capsys)
    assert code == 0 and out["passed"] and "elapsed" not in out
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_verify_spill_prints_witness(capsys):
    code, out, err = run(["verify", "--suite", "spill", "--max-n", "5"], capsys)
    assert code == 0 and out["passed"]
    assert "figure-4 witness edges: [[0, 0], [0, 1], [0, 3]" in err


def test_entry_point_is_byte_identical(files):
    cmd = [sys.executable, "-m", "qct.cli", "verify", "--suite", "solver", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["seed"] == 3
