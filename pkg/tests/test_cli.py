import csv
import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from latinlab import cli
from latinlab import degenerations as dg

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    data = json.loads(out)
    kind = data["schema"].split("/")[1]
    jsonschema.validate(data, json.loads((SCHEMAS / f"{kind}.json").read_text()))
    return code, data


def test_gen_and_roundtrip(capsys, tmp_path):
    code, data = run_json(capsys, "gen", "--group", "S3")
    assert code == 0 and data["n"] == 6 and data["group"] == "S3"
    f = tmp_path / "sq.txt"
    assert cli.main(["gen", "--n", "5", "--format", "text", "--out", str(f)]) == 0
    assert f.read_text().splitlines()[0] == "5"
    code, data = run_json(capsys, "transversals", "--square", str(f))
    assert code == 0 and data["transversals"] == 15 and data["source"] == "file"


def test_sample_is_seeded(capsys):
    _, a = run_json(capsys, "sample", "--n", "6", "--seed", "4")
    _, b = run_json(capsys, "sample", "--n", "6", "--seed", "4")
    _, c = run_json(capsys, "sample", "--n", "6", "--seed", "5")
    assert a == b and a["seed"] == 4
    assert a["grid"] != c["grid"]


def test_transversals(capsys):
    code, data = run_json(capsys, "transversals", "--n", "7")
    assert data["transversals"] == 133 and Fraction(data["factorial_ratio"]) == Fraction(5040 ** 2, 7 ** 7)
    code, data = run_json(capsys, "transversals", "--jm", "--n", "5", "--seed", "1")
    assert data["source"] == "jm" and data["seed"] == 1


def test_rho_and_trace(capsys):
    code, data = run_json(capsys, "rho", "--group", "A5")
    assert code == 0 and abs(data["rho"] - 1 / 3) < 1e-6 and data["method"] == "iterative"
    code, data = run_json(capsys, "trace6", "--n", "4")
    assert code == 0 and data["trace6"] == "4/1" and data["equal"]


def test_spectrum(capsys):
    code, data = run_json(capsys, "spectrum", "--group", "Q8")
    assert code == 0 and data["match"]
    assert sum(r["multiplicity"] for r in data["rows"]) == 64


def test_fourier_and_crank(capsys):
    code, data = run_json(capsys, "fourier-check", "--n", "4")
    assert code == 0 and data["passed"] and len(data["rows"]) == 16
    code, data = run_json(capsys, "crank-check", "--m", "3")
    assert code == 0 and data["count"] == 125


def test_sigma_m(capsys):
    for m, value in ((0, "1/1"), (1, "1/1"), (2, "1/2"), (3, "1/2"), (4, "5/8")):
        code, data = run_json(capsys, "sigma-m", str(m))
        assert code == 0 and data["value"] == value


def test_probe_deterministic(capsys):
    _, out1, _ = run(capsys, "probe", "--n", "4", "--samples", "3", "--seed", "9")
    _, out2, _ = run(capsys, "probe", "--n", "4", "--samples", "3", "--seed", "9")
    assert out1 == out2
    code, data = run_json(capsys, "probe", "--n", "2", "--samples", "3", "--seed", "1")
    assert all(r["transversals"] == 0 for r in data["rows"])


def test_formats(capsys):
    code, out, _ = run(capsys, "crank-check", "--m", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 8 and {"crank", "trank", "lrank"} <= set(rows[0])
    code, out, _ = run(capsys, "sigma-m", "4", "--format", "csv")
    assert "value,5/8" in out
    code, out, _ = run(capsys, "sigma-m", "4", "--format", "text")
    assert "value: 5/8" in out
    code, out, _ = run(capsys, "gen", "--n", "3", "--format", "text")
    assert out.split() == "3 0 1 2 1 2 0 2 0 1".split()


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "trace6", "--n", "8", "--budget", "10")
    assert code == 2 and "budget" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 1\n0 1\n")
    code, _, err = run(capsys, "transversals", "--square", str(bad))
    assert code == 1 and "error" in err
    code, _, _ = run(capsys, "transversals", "--square", str(tmp_path / "missing.txt"))
    assert code == 1
    code, _, _ = run(capsys, "probe", "--n", "13", "--samples", "1")
    assert code == 1


@pytest.mark.parametrize("suite", ["transversals", "spectral"])
def test_verify(capsys, suite):
    code, data = run_json(capsys, "verify", suite)
    assert code == 0 and data["passed"] and data["failures"] == 0 and data["rows"]


def test_degenerations_command(capsys, tmp_path, monkeypatch, degen_records):
    monkeypatch.setattr(dg, "enumerate_degenerations", lambda *a, **k: degen_records)
    cert = tmp_path / "cert.json"
    code, data = run_json(capsys, "degenerations", "--certificate", str(cert))
    assert code == 0 and data["k"] == 1206 and data["class_count"] == 154
    assert data["quantity_H1"] == 5 and data["max_quantity_other"] <= 4
    assert len(data["top_classes"]) == 8
    c = json.loads(cert.read_text())
    jsonschema.validate(c, json.loads((SCHEMAS / "certificate.json").read_text()))
    assert len(c["classes"]) == 154


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "latinlab", "sigma-m", "2"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["value"] == "1/2"


def test_schemas_are_valid():
    for f in SCHEMAS.glob("*.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(f.read_text()))
