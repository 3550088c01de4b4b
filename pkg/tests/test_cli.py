import io
import json
import subprocess
import sys

import pytest

from repetend.cli import parse_vector, run, split_top
from repetend.errors import ParseError
from repetend.realfield import make_field


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_expand_text_and_json():
    code, out, _ = call("expand", "--field", "x^3 - 2", "--vector", "1, y, y^2", "--algorithm", "jpa")
    assert code == 0
    assert "A_JP(1,1) A_JP(2,3) overline{A_JP(3,3)}" in out
    code, out, _ = call("expand", "--field", "x^3 - 2", "--vector", "(1, y, y^2)", "--algorithm", "selmer", "--format", "json")
    doc = json.loads(out)
    assert doc["period"] == "15" and doc["preperiod"] == "0"


def test_json_output_is_byte_identical():
    argv = ("expand", "--field", "x^3 - 2", "--vector", "1, y, y^2", "--algorithm", "brun", "--format", "json")
    assert call(*argv)[1] == call(*argv)[1]


def test_error_exit_codes():
    code, _, err = call("expand", "--field", "x^2 - 4", "--vector", "y, 1", "--algorithm", "rcf-add")
    assert code == 2 and "Reducible" in err
    code, _, err = call("expand", "--field", "x^3 - 2", "--vector", "1, y, y^^2")
    assert code == 2 and "position 8" in err
    code, _, err = call("expand", "--field", "x^3 - 2", "--vector", "1, y - 2, y^2")
    assert code == 2 and "NonpositiveInput" in err
    assert call("expand", "--algorithm", "gauss")[0] == 2
    assert call("nonsense")[0] == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "job.ini"
    cfg.write_text("[job]\nfield = x^3 - 2\nvector = 1, y, y^2\nalgorithm = selmer\nformat = json\n")
    code, out, _ = call("expand", "--config", str(cfg))
    assert code == 0 and json.loads(out)["algorithm"] == "selmer"
    # flags win over the file
    code, out, _ = call("expand", "--config", str(cfg), "--algorithm", "jpa")
    assert json.loads(out)["algorithm"] == "jpa"
    bad = tmp_path / "bad.ini"
    bad.write_text("[job]\ncolour = blue\n")
    code, _, err = call("expand", "--config", str(bad))
    assert code == 2 and "colour" in err
    assert call("expand", "--config", str(tmp_path / "missing.ini"))[0] == 2


def test_check_pure():
    code, out, _ = call("check-pure", "--field", "x^2 - 2", "--root", "1", "--vector", "y + 2, 1", "--format", "json")
    assert code == 0 and json.loads(out)["pure_periodicity_excluded"] is True
    code, out, _ = call("check-pure", "--field", "x^3 - 3x + 1", "--root", "1", "--vector", "y^2, y, 1")
    assert "excluded" in out


def test_tmatrix_and_qmap():
    code, out, _ = call("tmatrix", "--field", "x^3 - 2", "--vector", "y^2, y, 1", "--lambda", "y^2 + y + 1", "--format", "json")
    doc = json.loads(out)
    assert doc["matrix"] == [["1", "2", "2"], ["1", "1", "2"], ["1", "1", "1"]] and doc["eigen_verified"]
    code, out, _ = call("tmatrix", "--field", "x^3 - 2", "--vector", "y^2, y, 1", "--matrix", "1 2 2; 1 1 2; 1 1 1")
    assert "y^2 + y + 1" in out
    assert call("tmatrix", "--field", "x^3 - 2", "--vector", "y^2, y, 1")[0] == 2
    code, out, _ = call("qmap", "--field", "x^3 - 2", "--vector", "y^2, y, 1", "--format", "json")
    doc = json.loads(out)
    assert doc["norm_ratios"] == ["2", "1/4", "2"]
    assert doc["predicates"] == {"x_gt_1": True, "x_lt_y": False, "y_lt_1": False}
    code, out, _ = call("qmap", "--field", "x^3 + x^2 - 2x - 1", "--root", "2", "--vector", "y^2, y, 1", "--format", "json")
    assert json.loads(out)["predicates"] is None


def test_candidates_command():
    base = ("candidates", "--field", "x^3 + x^2 - 2*x - 1", "--root", "2", "--units", "-1 + y + y^2; 2 - y^2")
    code, out, _ = call(*base, "--vector", "y^2, y, 1", "--bound", "3", "--format", "json")
    assert code == 0 and len(json.loads(out)["candidates"]) == 48
    code, out, _ = call(*base, "--vector", "y^2, y, 1", "--algorithm", "brun", "--format", "json")
    assert json.loads(out)["match"]["result"]["exponents"] == ["3", "-3"]
    code, out, _ = call(*base, "--vector", "1, y, y^2", "--match", "3 9 4; 4 11 5; 5 14 6")
    assert "exponents (1, -3)" in out
    code, _, err = call("candidates", "--field", "x^3 - 2", "--vector", "1, y, y^2", "--units", "y")
    assert code == 2 and "NotAUnit" in err


def test_family_commands():
    code, out, _ = call("family", "tamura", "--m", "2", "--verify", "--format", "json")
    doc = json.loads(out)
    assert doc["verification"]["result"] == "PASS" and doc["predicted_period"] == "3"
    code, _, err = call("family", "ajpa", "--s", "4", "--t", "4")
    assert code == 2 and "ConstraintViolated" in err
    code, out, _ = call("family", "ajpa", "--scan", "--max-t", "3", "--max-r", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["passed"] == doc["total"]


def test_scan_with_workers_matches_sequential():
    seq = call("family", "ajpa", "--scan", "--max-t", "3", "--max-r", "0", "--format", "json")[1]
    par = call("family", "ajpa", "--scan", "--max-t", "3", "--max-r", "0", "--workers", "2", "--format", "json")[1]
    assert seq == par


def test_vector_helpers():
    assert [p for _, p in split_top("1, (y, 2), y")] == ["1", " (y, 2)", " y"]
    k = make_field("x^3 - 2")
    assert len(parse_vector(k, "(y^2, y, 1)")) == 3
    with pytest.raises(ParseError) as info:
        parse_vector(k, "1, y, y+")
    assert info.value.pos == 8


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "repetend", "expand", "--field", "x^2-2", "--root", "positive",
         "--vector", "y, 1", "--algorithm", "rcf-mult"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "C1 overline{C2^2 C1^2}" in proc.stdout
