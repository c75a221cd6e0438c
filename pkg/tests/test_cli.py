import csv
import hashlib
import json
import math
import subprocess
import sys

import pytest

from maxkxor.cli import main, parse_range, UsageError
from maxkxor.instances import read_instance


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_parse_range():
    assert parse_range("2-4,7", "k") == [2, 3, 4, 7]
    assert parse_range("5-3", "k") == []
    with pytest.raises(UsageError):
        parse_range("2-x", "k")


def test_qaoa_limit_table(tmp_path):
    assert run(tmp_path, "qaoa-table", "--k", "2-19", "--D", "limit") == 0
    table = rows(tmp_path / "qaoa-table.csv")
    assert len(table) == 18 and table[0]["D"] == "inf"
    manifest = json.loads((tmp_path / "qaoa-table.manifest.json").read_text())
    assert manifest["subcommand"] == "qaoa-table" and manifest["seed"] == 0
    digest = hashlib.sha256((tmp_path / "qaoa-table.csv").read_bytes()).hexdigest()
    assert manifest["outputs"] == {"qaoa-table.csv": digest}


def test_qaoa_finite_row(tmp_path):
    assert run(tmp_path, "qaoa-table", "--k", "2", "--D", "1") == 0
    (row,) = rows(tmp_path / "qaoa-table.csv")
    assert abs(float(row["fraction"]) - 0.75) <= 1e-9


def test_empty_range_header_only(tmp_path):
    assert run(tmp_path, "qaoa-table", "--k", "3", "--D", "5-4") == 0
    assert (tmp_path / "qaoa-table.csv").read_text().strip() == "k,D,constant,fraction,gamma,beta,t"


def test_threshold_table_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(a, "threshold-table", "--k", "3", "--D", "0-40") == 0
    assert run(b, "threshold-table", "--k", "3", "--D", "0-40") == 0
    assert (a / "threshold-table.csv").read_bytes() == (b / "threshold-table.csv").read_bytes()


def test_threshold_limit_json(tmp_path):
    assert run(tmp_path, "threshold-table", "--k", "2", "--format", "json") == 0
    (row,) = json.loads((tmp_path / "threshold-table.json").read_text())
    assert row["D"] == "inf" and abs(row["constant"] - 0.33649) <= 1e-4


def test_usage_errors(tmp_path, capsys):
    assert run(tmp_path, "qaoa-table", "--k", "1") == 2
    assert run(tmp_path, "qaoa-table", "--k", "2", "--D", "300") == 2
    assert run(tmp_path, "parisi") == 2
    with pytest.raises(SystemExit) as exc:
        main(["qaoa-table", "--format", "xml"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_parisi_zero_piece_model_and_cache(tmp_path, capsys):
    model = tmp_path / "model.json"
    model.write_text(json.dumps({"xi": [{"p": 2, "c": 1.0}], "pieces": 0, "grid": 201}))
    assert run(tmp_path, "parisi", "--model", str(model), "--format", "json") == 0
    first = (tmp_path / "parisi.json").read_bytes()
    (row,) = json.loads(first)
    assert abs(row["value"] - 2 / math.sqrt(math.pi)) <= 1e-12
    assert "computed" in capsys.readouterr().err
    assert len(list((tmp_path / "cache").glob("parisi-*.json"))) == 1
    assert run(tmp_path, "parisi", "--model", str(model), "--format", "json") == 0
    assert "cached" in capsys.readouterr().err
    assert (tmp_path / "parisi.json").read_bytes() == first


def test_parisi_golden_failure(tmp_path):
    # one piece on a 41-point grid is far from the known P(2)
    assert run(tmp_path, "parisi", "--k", "2", "--pieces", "1", "--grid", "41", "--restarts", "1") == 1
    assert run(tmp_path / "x", "parisi", "--k", "2", "--pieces", "1", "--grid", "41", "--restarts", "1", "--no-golden") == 0


def test_compare_needs_cache(tmp_path, capsys):
    assert run(tmp_path, "compare", "--k", "3") == 1
    assert "maxkxor parisi" in capsys.readouterr().err


def test_compare_with_cache(tmp_path):
    assert run(tmp_path, "parisi", "--k", "5", "--ci") == 0
    assert run(tmp_path, "compare", "--k", "5", "--D", "limit") == 0
    (row,) = rows(tmp_path / "compare.csv")
    assert float(row["qaoa"]) > float(row["threshold"])
    assert run(tmp_path, "compare", "--k", "5", "--D", "50-52") == 0
    assert len(rows(tmp_path / "compare.csv")) == 3


def test_ksat_skipped(tmp_path, capsys):
    assert run(tmp_path, "ksat", "--k", "3") == 0
    (row,) = json.loads((tmp_path / "ksat.json").read_text())
    assert row["status"] == "SKIPPED-CONDITIONAL" and row["identity_ok"]
    assert "SKIPPED-CONDITIONAL" in capsys.readouterr().err


def test_ksat_with_model(tmp_path):
    model = tmp_path / "m.json"
    model.write_text(json.dumps({"xi": [{"p": 2, "c": 0.5}, {"p": 3, "c": 1.0}], "pieces": 1, "grid": 201}))
    # a toy covariance misses the tabulated B(4), so the golden check fails
    assert run(tmp_path, "ksat", "--k", "4", "--model", str(model), "--restarts", "1") == 1
    assert run(tmp_path, "ksat", "--k", "4", "--model", str(model), "--restarts", "1", "--no-golden") == 0
    (row,) = json.loads((tmp_path / "ksat.json").read_text())
    assert abs(row["C"] - row["B"] / 16) <= 1e-12


def test_nlts_files(tmp_path):
    assert run(tmp_path, "nlts", "--inner", "cycle:7") == 0
    report = json.loads((tmp_path / "nlts-report.json").read_text())
    assert report["partial_z2"] and report["ground_states"] == 2 and report["optimal_fraction"] == "1"
    assert read_instance(tmp_path / "nlts-instance.json").m == 14
    assert "sources" in json.loads((tmp_path / "nlts-sidecar.json").read_text())
    assert run(tmp_path, "nlts", "--inner", "regular:30:3") == 0
    assert run(tmp_path, "nlts", "--inner", "cycle:6", "--r", "3") == 2
    assert run(tmp_path, "nlts", "--inner", "nonsense") == 2


def test_nlts_edge_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"n": 5, "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [4, 0]]}))
    assert run(tmp_path, "nlts", "--inner", str(path)) == 0


def test_gen(tmp_path):
    assert run(tmp_path, "gen", "--k", "3", "--degree", "2", "--n", "15", "--seed", "4", "--name", "i.json") == 0
    inst = read_instance(tmp_path / "i.json")
    assert inst.is_regular() and inst.m == 10
    assert run(tmp_path, "gen", "--k", "3", "--degree", "2", "--n", "16") == 2
    assert run(tmp_path, "gen", "--k", "3", "--degree", "3", "--n", "9", "--budget", "20") == 1


def test_verify_single_check(tmp_path):
    assert run(tmp_path, "verify", "nlts-groundstates", "--check", "bound-formulas") == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] and [c["name"] for c in report["checks"]] == ["bound-formulas"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "maxkxor", "qaoa-table", "--k", "2", "--D", "1-2", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "qaoa-table.csv").exists()
