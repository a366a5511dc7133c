import csv
import io
import json

import pytest

from squaredpairs.cli import run
from squaredpairs.reports import ReportEnvelope


def call(argv, capsys):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_json(capsys):
    code, out, _ = call(["solve", "--p", "7", "--q", "5", "--max-x", "40", "--max-y", "60", "--format", "json"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["payload"]["solutions"] == [{"x": 0, "y": 0, "n": 0}]
    assert d["config"] == {"p": 7, "q": 5, "max_x": 40, "max_y": 60, "max_bits": 4096}
    assert ReportEnvelope.from_json(out).to_json() == out


def test_solve_csv_and_text(capsys):
    code, out, _ = call(["solve", "--p", "3", "--q", "2", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [(r["x"], r["y"], r["n"]) for r in rows][-1] == ("4", "5", "7")
    code, out, _ = call(["solve", "--p", "3", "--q", "2", "--format", "text"], capsys)
    assert "x=4 y=5 n=7" in out


def test_solve_invalid_pair(capsys):
    code, _, err = call(["solve", "--p", "4", "--q", "2"], capsys)
    assert code == 2
    assert json.loads(err)["error"]["message"] == "p is not prime"


@pytest.mark.parametrize("argv", [
    ["solve", "--p", "3"],
    ["solve", "--p", "3", "--q", "2", "--bogus"],
    ["solve", "--p", "3", "--q", "2", "--max-x", "100000"],
    ["solve", "--p", "3", "--q", "2", "--max-x", "-1"],
    ["scan", "--limit", "2"],
    ["ring", "--d", "-3", "--base", "1,1", "--pow", "2"],
    ["ring", "--d", "-1", "--base", "1", "--pow", "2"],
    ["ring", "--d", "-1", "--base", "1,1", "--solve-imag", "1"],
    ["certify", "--p", "7", "--q", "5"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    code, _, err = call(argv, capsys)
    assert code == 2
    assert json.loads(err)["error"]["kind"] == "usage"


def test_unwritable_output(capsys, tmp_path):
    code, _, err = call(["solve", "--p", "3", "--q", "2", "--out", str(tmp_path / "missing" / "x.json")], capsys)
    assert code == 3
    assert json.loads(err)["error"]["kind"] == "io"


def test_out_file(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, out, _ = call(["solve", "--p", "3", "--q", "2", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert len(json.loads(path.read_text())["payload"]["solutions"]) == 5


def test_certify(capsys):
    code, out, _ = call(["certify", "--p", "7", "--q", "5", "--modulus", "4"], capsys)
    cert = json.loads(out)["payload"]
    assert code == 0 and cert["allowed_classes"] == [[0, 0]] and cert["x_period"] == 2
    code, out, _ = call(["certify", "--p", "5", "--q", "3", "--search-max-m", "10"], capsys)
    mods = [c["modulus"] for c in json.loads(out)["payload"]]
    assert code == 0 and 4 in mods and mods[-1] == 2


def test_descent(capsys):
    code, out, _ = call(["descent", "--p", "7", "--q", "5"], capsys)
    steps = json.loads(out)["payload"]["steps"]
    assert code == 0 and steps[3]["residues"] == [14, 23, 11, 2]
    code, out, _ = call(["descent", "--p", "11", "--q", "7"], capsys)
    d = json.loads(out)["payload"]
    assert code == 0 and d["outcome"] == "inconclusive" and d["step"] == "precondition"


def test_ring(capsys):
    code, out, _ = call(["ring", "--d", "-2", "--base", "1,-1", "--pow", "5"], capsys)
    assert code == 0 and json.loads(out)["payload"]["result"] == {"a": 1, "b": 11, "d": -2}
    code, out, _ = call(["ring", "--d", "-1", "--base", "2,-1", "--solve-imag", "-1", "--xmax", "300"], capsys)
    assert code == 0 and json.loads(out)["payload"]["solutions"] == [1]


def test_verify_paper_reports_mismatch(capsys):
    code, out, _ = call(["verify-paper"], capsys)
    d = json.loads(out)["payload"]
    passed = {r["proposition"]: r["passed"] for r in d["reports"]}
    assert passed == {1: True, 2: False, 3: True}
    assert d["errata_flag"]
    # (5, 3) has the extra solution (2, 2, 4), so the run signals a mismatch.
    assert code == 1


def test_scan_formats_agree(capsys, tmp_path):
    code, out_json, _ = call(["scan", "--limit", "120", "--max-x", "10", "--max-y", "10"], capsys)
    assert code == 0
    code, out_csv, _ = call(["scan", "--limit", "120", "--max-x", "10", "--max-y", "10", "--format", "csv"], capsys)
    assert code == 0
    from_json = [(r["pair"]["p"], r["verdict"]) for r in json.loads(out_json)["payload"]["records"]]
    from_csv = [(int(r["p"]), r["verdict"]) for r in csv.DictReader(io.StringIO(out_csv))]
    assert from_json == from_csv
    code, out_text, _ = call(["scan", "--limit", "120", "--format", "text"], capsys)
    assert "(5,3), (17,13), (37,31), (101,97)" in out_text


def test_scan_checkpoint_and_resume(capsys, tmp_path):
    out = tmp_path / "scan.json"
    args = ["scan", "--limit", "300", "--max-x", "10", "--max-y", "10", "--checkpoint-every", "20"]
    assert run(args + ["--out", str(out)]) == 0
    ckpt = tmp_path / "scan.json.ckpt"
    assert json.loads(ckpt.read_text())["last_p"] == 293
    # Fake an interruption by rewinding the checkpoint to its first block.
    d = json.loads(ckpt.read_text())
    d["records"] = d["records"][:20]
    d["last_p"] = d["records"][-1]["pair"]["p"]
    d["counts"] = {k: sum(r["verdict"] == k for r in d["records"]) for k in d["counts"]}
    ckpt.write_text(json.dumps(d))
    resumed = tmp_path / "resumed.json"
    assert run(args + ["--out", str(resumed), "--resume", str(ckpt), "--workers", "2"]) == 0
    assert resumed.read_bytes() == out.read_bytes()


def test_scan_bad_resume(capsys, tmp_path):
    bad = tmp_path / "bad.ckpt"
    bad.write_text("{}")
    code, _, err = call(["scan", "--limit", "50", "--resume", str(bad)], capsys)
    assert code == 2
    code, _, err = call(["scan", "--limit", "50", "--resume", str(tmp_path / "nope")], capsys)
    assert code == 3
