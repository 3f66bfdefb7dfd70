import json
import subprocess
import sys

import jsonschema
import pytest

from papnlab import report, search
from papnlab.cli import main
from papnlab.gf2n import field_new
from papnlab.spectral import walsh_full
from papnlab.differential import ddt
from papnlab.vbf import from_power


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_json_schema(capsys):
    code, out, _ = run(capsys, "analyze", "--n", "6", "--fn", "x^27",
                       "--checks", "apn,weak,delta,spectrum,papn0,papn-all,moments")
    assert code == 0
    doc = json.loads(out)
    report.validate_analysis(doc)
    checks = doc["checks"]
    assert checks["delta"] == 12 and checks["apn"] is False and checks["papn0"] is True
    assert doc["field"] == {"n": 6, "modulus": "0x43"}
    assert all(isinstance(m["value"], str) for m in checks["moments"])
    assert int(checks["moments"][0]["value"]) == 1 << 18


def test_schema_rejects_bad_report():
    doc = {"field": {"n": 3, "modulus": "0xb"}, "function": {"expression": "x^3"}, "seed": 0,
           "checks": {"moments": [{"k": 3, "twist": None, "value": 1408}]}}
    with pytest.raises(jsonschema.ValidationError):
        report.validate_analysis(doc)


def test_output_is_byte_identical(capsys):
    argv = ("analyze", "--n", "5", "--fn", "x^3 + Tr(x^9)", "--checks", "papn-all,moments")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_analyze_human_and_csv(capsys):
    code, out, _ = run(capsys, "analyze", "--n", "3", "--fn", "x^7 + x^6",
                       "--checks", "spectrum,papn-all", "--format", "human")
    assert code == 0
    assert "spectrum: {0^31, 2^22, 4^3}" in out
    assert "x0-APN points: 0x1, 0x3, 0x5, 0x7" in out
    code, out, _ = run(capsys, "analyze", "--n", "2", "--fn", "x^3", "--checks", "walsh-csv",
                       "--format", "csv")
    assert out.splitlines()[0] == "a,b,w" and len(out.splitlines()) == 17


def test_exit_codes(capsys):
    code, _, err = run(capsys, "analyze", "--n", "3", "--fn", "x^3 +")
    assert code == 2 and "at byte 5" in err
    code, _, err = run(capsys, "analyze", "--n", "3", "--fn", "x^3", "--checks", "bogus")
    assert code == 2
    code, _, err = run(capsys, "papn-scan", "--n", "6")
    assert code == 2 and "core-hours" in err
    code, _, err = run(capsys, "families", "--n", "4", "--family", "gold-trace")
    assert code == 2 and "--d" in err
    with pytest.raises(SystemExit) as info:
        main(["analyze", "--n", "3"])
    assert info.value.code == 2


def test_table1_cli(tmp_path, capsys):
    path = tmp_path / "t1.csv"
    code, out, _ = run(capsys, "table1", "--n-min", "6", "--n-max", "7", "--csv", str(path),
                       "--jobs", "1")
    assert code == 0 and out == ""
    rows = report.table1_from_csv(path.read_text())
    assert rows == search.table1_scan(6, 7)
    code, out, _ = run(capsys, "table1", "--n-min", "6", "--n-max", "6", "--json")
    assert json.loads(out) == {"rows": [{"delta": 12, "exponents": [27], "n": 6}]}


def test_papn_scan_cli(capsys):
    code, out, _ = run(capsys, "papn-scan", "--n", "3", "--jobs", "1")
    doc = json.loads(out)
    assert code == 0 and doc["hits"] == "64" and doc["candidates"] == "256"


def test_verify_cli(capsys):
    code, out, _ = run(capsys, "verify", "--n-min", "2", "--n-max", "3", "--trials", "3")
    lines = out.splitlines()
    summary = json.loads(lines[-1])
    assert code == 0 and summary["failures"] == 0 and len(lines) == 1
    assert summary["summary"]["walsh-diff"]["pass"] > 0


def test_families_cli(capsys):
    code, out, _ = run(capsys, "families", "--n", "4", "--family", "trace-f", "--d", "2")
    doc = json.loads(out)
    assert code == 0 and doc["predicted_0apn"] is False and doc["consistent"]
    code, out, _ = run(capsys, "families", "--n", "3", "--family", "binomial", "--grid")
    assert code == 0 and all(json.loads(line)["consistent"] for line in out.splitlines())
    code, out, _ = run(capsys, "families", "--n", "5", "--family", "leander-rodier", "--d", "3",
                       "--beta", "1f")
    assert json.loads(out)["params"]["beta"] == "0x1f"


def test_conjecture_and_field_cli(capsys):
    code, out, _ = run(capsys, "conjecture", "--n-max", "4")
    assert code == 0 and json.loads(out)["counterexamples"] == []
    code, out, _ = run(capsys, "field", "--n", "11")
    assert json.loads(out) == {"generator_order": 2047, "modulus": "0x805", "n": 11, "size": 2048}
    code, _, err = run(capsys, "field", "--n", "4", "--modulus", "1f")
    assert code == 2


def test_csv_writers():
    F = from_power(field_new(2), 3)
    assert report.walsh_csv(walsh_full(F)).count("\n") == 17
    text = report.ddt_csv(ddt(F))
    assert text.startswith("a,b,count\n0,0,4\n")


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "papnlab.cli", "field", "--n", "3"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["modulus"] == "0xb"
