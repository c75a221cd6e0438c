import json

import pytest

from maxkxor import reference, verify
from maxkxor.cli import main


def test_schema_and_nlts_suite():
    report = verify.run_suite("nlts-groundstates")
    assert set(report) == {"suite", "seed", "passed", "checks"}
    assert report["passed"]
    for c in report["checks"]:
        assert set(c) == {"suite", "name", "status", "detail", "seconds"}
        assert c["status"] == "pass"


def test_fast_qaoa_checks():
    names = ["eight-cycle-three-quarters", "k2-reduction-identity", "large-degree-table", "k3-finite-degree-relation"]
    report = verify.run_suite("qaoa-oracle", only=names)
    assert report["passed"] and [c["name"] for c in report["checks"]] == names


def test_corrupted_constant_is_named(monkeypatch, tmp_path, capsys):
    table = dict(reference.LARGE_DEGREE_TABLE)
    C, t, beta, Ct, alpha = table[4]
    table[4] = (C + 0.01, t, beta, Ct, alpha)
    monkeypatch.setattr(reference, "LARGE_DEGREE_TABLE", table)
    report = verify.run_suite("qaoa-oracle", only=["large-degree-table"])
    (check,) = report["checks"]
    assert not report["passed"] and check["name"] == "large-degree-table" and check["status"] == "fail"
    code = main(["verify", "qaoa-oracle", "--check", "large-degree-table", "--out", str(tmp_path)])
    assert code == 1
    assert "large-degree-table" in capsys.readouterr().err
    assert json.loads((tmp_path / "verify.json").read_text())["passed"] is False


def test_crashing_check_fails(monkeypatch):
    def boom(seed):
        raise ZeroDivisionError("x")

    monkeypatch.setitem(verify.CHECKS, "nlts-groundstates", [("boom", boom)])
    report = verify.run_suite("nlts-groundstates")
    assert report["checks"][0]["detail"].startswith("ZeroDivisionError")


def test_unknown_suite():
    with pytest.raises(ValueError, match="unknown suite"):
        verify.run_suite("nope")


def test_k3_winner_set_includes_degree_one():
    assert verify.k3_winner_degrees(30) == [1, 3, 4, 6, 8, 11, 13, 18, 20, 27]


def test_monte_carlo_matrix_small():
    rows = verify.monte_carlo_matrix(seed=0, trials=20000, ks=(2,), D_max=2)
    assert len(rows) == sum(D + 1 for D in range(3))
    assert all(len(r) == 7 for r in rows)
