"""
Command-line tests: each subcommand emits one schema-valid document.
"""

import json

import pytest
from click.testing import CliRunner

from app.cli import cli
from app.core.report_engine import validate_document


def _invoke(tmp_path, *args):
    """Run the CLI with the document written to a file; returns (result, text)."""
    out = tmp_path / "out.txt"
    result = CliRunner().invoke(cli, ["--out", str(out), *args], obj={})
    text = out.read_text(encoding="utf-8") if out.exists() else ""
    return result, text


def _invoke_json(tmp_path, *args):
    result, text = _invoke(tmp_path, *args)
    assert result.exit_code == 0, result.output
    document = json.loads(text)
    validate_document(document)
    return document


def test_count_reports_value_and_coefficients(tmp_path):
    doc = _invoke_json(tmp_path, "count", "-d", "2", "-n", "2", "--q", "2")
    assert doc["command"] == "count"
    assert doc["schema_version"] == "1"
    assert doc["irreducible"]["value"] == "35"
    assert doc["irreducible"]["coefficients"] == {"5": "1/1", "4": "1/2", "2": "-1/1", "1": "-1/2"}
    assert doc["partition_of_unity"] is True
    assert [s["partition"] for s in doc["strata"]] == ["2", "1+1"]


def test_count_rejects_non_prime_power(tmp_path):
    result, _ = _invoke(tmp_path, "count", "-d", "2", "-n", "2", "--q", "6")
    assert result.exit_code == 2


def test_euler_table(tmp_path):
    doc = _invoke_json(tmp_path, "euler", "--d-max", "4", "--n-max", "3")
    assert doc["vanishing_holds"] is True
    assert len(doc["table"]) == 12


def test_euler_csv_header(tmp_path):
    result, text = _invoke(tmp_path, "--format", "csv", "euler", "--d-max", "2", "--n-max", "2")
    assert result.exit_code == 0
    assert text.splitlines() == ["d,n,chi", "1,1,1", "1,2,2", "2,1,0", "2,2,0"]


def test_carlitz(tmp_path):
    doc = _invoke_json(tmp_path, "carlitz", "--d-max", "4")
    assert doc["limit"] == "2/1"
    assert doc["rows"][1]["ratio"] == "35/32"
    assert doc["increasing_from_d2"] is True


def test_carlitz_rejects_composite_q(tmp_path):
    result, _ = _invoke(tmp_path, "carlitz", "--q", "4")
    assert result.exit_code == 2


def test_hyde(tmp_path):
    doc = _invoke_json(tmp_path, "hyde", "-d", "2")
    assert doc["found"] is True
    assert doc["n0"] == 6


def test_betti_naive_quartic(tmp_path):
    doc = _invoke_json(tmp_path, "betti", "-d", "4", "--max-degree", "11", "--convention", "naive")
    assert doc["betti"]["11"] == "1"
    assert all(doc["betti"][str(i)] == "0" for i in range(11))
    assert doc["exact"] is True


def test_betti_koszul_quartic_reports_divergence(tmp_path):
    doc = _invoke_json(tmp_path, "betti", "-d", "4", "--convention", "koszul")
    assert doc["betti"]["11"] == "0"
    assert doc["convention_divergence"]["diverges"] is True


def test_betti_beyond_window_is_usage_error(tmp_path):
    result, _ = _invoke(tmp_path, "betti", "-d", "5")
    assert result.exit_code == 2


def test_e1_json_and_markdown(tmp_path):
    doc = _invoke_json(tmp_path, "e1", "-d", "4", "--convention", "naive")
    assert doc["betti"]["11"] == "1"
    result, text = _invoke(tmp_path, "--format", "md", "e1", "-d", "4", "--convention", "naive")
    assert result.exit_code == 0
    assert "| q \\ p |" in text
    assert "- 2+1+1 < 2+2" in text


def test_bounds(tmp_path):
    doc = _invoke_json(tmp_path, "bounds", "-d", "4", "-n", "30")
    assert doc["high_stability"]["max_i"] == 17
    assert doc["high_stability"]["bound"] == "18/1"


def test_brute_default_params_pass(tmp_path):
    doc = _invoke_json(tmp_path, "brute", "--params", "2,2,2", "--params", "2,1,2")
    assert doc["pass"] is True
    assert doc["params"] == [[2, 2, 2], [2, 1, 2]]


def test_brute_csv_census(tmp_path):
    result, text = _invoke(tmp_path, "--format", "csv", "brute", "--params", "2,2,2")
    assert result.exit_code == 0
    assert text.splitlines()[:2] == ["p,n,d,partition,count", "2,2,2,2,35"]


def test_brute_bad_params(tmp_path):
    result, _ = _invoke(tmp_path, "brute", "--params", "2,2")
    assert result.exit_code == 2


def test_series_reports_printed_deviation_without_failing(tmp_path):
    doc = _invoke_json(tmp_path, "series", "-d", "3", "--order", "20")
    assert doc["printed_comparison"]["first_deviation"] == 12
    assert doc["series"]["coeffs"][10] == "1"


def test_series_for_a_stratum(tmp_path):
    doc = _invoke_json(tmp_path, "series", "--partition", "2+2", "--order", "12", "--convention", "naive")
    assert doc["series"]["coeffs"][10] == "1"


def test_series_for_quartics_points_to_betti(tmp_path):
    result, _ = _invoke(tmp_path, "series", "-d", "4")
    assert result.exit_code == 2
    assert "betti" in result.output


def test_audit(tmp_path):
    doc = _invoke_json(tmp_path, "audit", "--d-max", "4", "--r-max", "20")
    assert doc["r_function"]["holds"] is True
    assert doc["vanishing"]["holds"] is True
    assert len(doc["stratum_assertions"]) == 4


def test_audit_fails_when_a_degree_cannot_be_checked(tmp_path):
    result, text = _invoke(tmp_path, "audit", "--d-max", "6", "--r-max", "10")
    assert result.exit_code == 1
    doc = json.loads(text)
    validate_document(doc)
    assert doc["ok"] is False
    assert doc["vanishing"]["holds"] is None


@pytest.mark.parametrize("d", ["0", "-1"])
def test_series_rejects_nonpositive_degree(tmp_path, d):
    result, _ = _invoke(tmp_path, "series", "-d", d)
    assert result.exit_code == 2
    assert "positive" in result.output


def test_dims(tmp_path):
    doc = _invoke_json(tmp_path, "dims", "-d", "4", "-n", "2")
    assert doc["tight_at"] == ["3+1"]
    assert doc["holds"] is True


@pytest.mark.parametrize("args", [["count", "-d", "3", "-n", "2"], ["betti", "-d", "3"]])
def test_output_is_deterministic(tmp_path, args):
    _, first = _invoke(tmp_path, *args)
    _, second = _invoke(tmp_path, *args)
    assert first == second
    assert first
