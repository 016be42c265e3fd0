import csv
import io
import json

import pytest

from fig8rt.cli import main, parse_r_list


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_r_list():
    assert parse_r_list("5..11") == [5, 7, 9, 11]
    assert parse_r_list("4..9") == [5, 7, 9]
    assert parse_r_list("51..151:50") == [51, 101, 151]
    assert parse_r_list("5,7") == [5, 7]
    with pytest.raises(ValueError):
        parse_r_list("6")


def test_invariant_rows(capsys):
    code, out, _ = run(capsys, "invariant", "-p", "5", "-q", "2", "-r", "5..31")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 14
    assert all(float(row["cross_check"]) < 1e-9 for row in rows)
    assert "\r" not in out


def test_output_is_deterministic(capsys):
    a = run(capsys, "invariant", "-p", "7", "-q", "3", "-r", "5..15")[1]
    b = run(capsys, "invariant", "-p", "7", "-q", "3", "-r", "5..15")[1]
    assert a == b
    # 17 significant digits round-trip
    row = list(csv.DictReader(io.StringIO(a)))[0]
    assert repr(float(row["re"])) == repr(float("%.17g" % float(row["re"])))


def test_nonhyperbolic_warning(capsys):
    code, _, err = run(capsys, "invariant", "-p", "1", "-q", "1", "-r", "7")
    assert code == 0
    assert "non-hyperbolic" in err


def test_usage_errors(capsys):
    assert run(capsys, "invariant", "-p", "1", "-q", "0", "-r", "5")[0] == 2
    assert run(capsys, "invariant", "-p", "5", "-q", "2", "-r", "8")[0] == 2
    assert run(capsys, "invariant", "-p", "5", "-q", "2")[0] == 2
    assert run(capsys, "geometry", "-p", "5", "-q", "2", "--tol.fourier", "-1")[0] == 2


def test_domain_and_budget_errors(capsys):
    assert run(capsys, "geometry", "-p", "0", "-q", "1")[0] == 3
    code, _, err = run(capsys, "invariant", "-p", "5", "-q", "2", "-r", "101", "--budget.terms=10")
    assert code == 3 and "BudgetExceeded" in err


def test_geometry_json(capsys, tmp_path):
    out = tmp_path / "g.json"
    code, _, _ = run(capsys, "geometry", "-p", "5", "-q", "2", "--format", "json", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"config", "rows", "summary"}
    row = doc["rows"][0]
    assert row["residual_c"] < 1e-10 and row["residual_hg"] < 1e-10
    assert row["volume"] == pytest.approx(1.5294773294)


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\np = 5\nq = 2\nr = 51..101:50\nformat = json\n")
    code, out, _ = run(capsys, "asymptotics", "--config", str(cfg), "-r", "51")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["r_list"] == [51]
    assert doc["rows"][0]["residual"] > 0


def test_fourier_pretty(capsys):
    code, out, _ = run(capsys, "fourier", "-p", "5", "-q", "2", "-r", "51", "--pretty")
    assert code == 0
    assert "rel_error" in out.splitlines()[0]
