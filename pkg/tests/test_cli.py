"""Command-line contract tests: outputs, exit codes, determinism."""

import json

import pytest

from shiftmarket.casefile import parse_case, serialize_case
from shiftmarket.cases import case_3bus
from shiftmarket.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_builtin_table(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "--builtin", "3bus", "--scenario", "1",
                       "--format", "table", "--out", str(tmp_path))
    assert code == 0
    assert "welfare  2920" in out
    assert "[10, 30, 18]" in out


def test_solve_case_file(capsys, tmp_path):
    path = tmp_path / "s4.case"
    path.write_text(serialize_case(case_3bus(4)))
    code, out, _ = run(capsys, "solve", "--case", str(path),
                       "--format", "table", "--out", str(tmp_path))
    assert code == 0
    assert "welfare  3000" in out


def test_solve_missing_file_is_input_error(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--case", str(tmp_path / "none.case"),
                       "--out", str(tmp_path))
    assert code == 3
    assert "cannot read" in err


def test_solve_malformed_file(capsys, tmp_path):
    path = tmp_path / "broken.case"
    path.write_text("[case\nname = ")
    code, _, err = run(capsys, "solve", "--case", str(path),
                       "--out", str(tmp_path))
    assert code == 3
    assert "syntax" in err


def test_solve_unknown_builtin(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--builtin", "nosuch",
                       "--out", str(tmp_path))
    assert code == 3
    assert "nosuch" in err


def test_solve_bad_scenario(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--builtin", "3bus", "--scenario", "9",
                       "--out", str(tmp_path))
    assert code == 3


def test_solve_unknown_format(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--builtin", "3bus", "--scenario", "1",
                       "--format", "yaml", "--out", str(tmp_path))
    assert code == 3


def test_solve_json_scenario7_shifts(capsys, tmp_path):
    code, _, _ = run(capsys, "solve", "--builtin", "1bus5t", "--scenario", "7",
                     "--format", "json", "--out", str(tmp_path))
    assert code == 0
    payload = json.loads((tmp_path / "1bus5t-s7.solution.json").read_text())
    assert payload["welfare"] == pytest.approx(6200.0)
    shifts = [payload["shifts"][f"w{t}{t+1}"] for t in range(1, 5)]
    assert shifts == pytest.approx([20.0, 0.0, 20.0, 10.0])


def test_json_output_byte_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "solve", "--builtin", "3bus", "--scenario", "3",
        "--format", "json", "--out", str(a))
    run(capsys, "solve", "--builtin", "3bus", "--scenario", "3",
        "--format", "json", "--out", str(b))
    assert (a / "3bus-s3.solution.json").read_bytes() == \
           (b / "3bus-s3.solution.json").read_bytes()


def test_solve_csv_and_svg_outputs(capsys, tmp_path):
    code, _, _ = run(capsys, "solve", "--builtin", "3bus", "--scenario", "1",
                     "--format", "csv,svg", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "3bus-s1.prices.csv").exists()
    assert (tmp_path / "3bus-s1.stats.csv").exists()
    svg = (tmp_path / "3bus-s1.prices.svg").read_text()
    assert svg.startswith("<svg")


def test_sweep_golden_pass(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--builtin", "3bus",
                       "--out", str(tmp_path))
    assert code == 0
    assert "golden check: pass" in out
    assert (tmp_path / "3bus.sweep.csv").exists()


def test_sweep_1bus_reports_dual_notes(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--builtin", "1bus5t",
                       "--out", str(tmp_path))
    assert code == 0
    assert "non-unique dual vertex" in out


def test_export_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "export", "--builtin", "3bus",
                       "--scenario", "4", "--out", str(tmp_path))
    assert code == 0
    reparsed = parse_case((tmp_path / "3bus-s4.case").read_bytes())
    assert reparsed == case_3bus(4)


def test_export_unknown_builtin(capsys, tmp_path):
    code, _, err = run(capsys, "export", "--builtin", "nosuch",
                       "--out", str(tmp_path))
    assert code == 3
    assert "unknown builtin" in err


def test_export_ieee30_documents_dc_placement(capsys, tmp_path):
    code, out, _ = run(capsys, "export", "--builtin", "ieee30",
                       "--out", str(tmp_path))
    assert code == 0
    text = (tmp_path / "ieee30-flex.case").read_text()
    assert "dc_capacity" in text
    assert '"b21"' in text and '"b30"' in text


def test_env_variable_provides_default_format(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SHIFTMARKET_FORMAT", "json")
    monkeypatch.setenv("SHIFTMARKET_OUT", str(tmp_path))
    code, out, _ = run(capsys, "solve", "--builtin", "3bus", "--scenario", "1")
    assert code == 0
    assert (tmp_path / "3bus-s1.solution.json").exists()
