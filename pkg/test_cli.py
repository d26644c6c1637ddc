"""
End-to-end tests for the clifford-coxeter command line
"""
import json
from pathlib import Path

import pandas as pd
import pytest

from cli import OUTPUT_DIR_ENV, CommandConfig, main, parse_order, parse_pairs
from database import ResultsDatabase
from roots import close_roots, load_catalog, read_roots_csv

H3_FILE = """dim=3 field=sqrt-5
0,1,0
1/2-1/2*t,-1/2,-1/2*t
0,0,1
"""


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(out[-1])


def read_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_roots_csv(tmp_path, capsys):
    output = tmp_path / "h3.csv"
    code, status = run_cli(capsys, "roots", "--system", "H3", "--output", str(output))
    assert code == 0
    assert status == {"command": "roots", "output": str(output)}
    frame = pd.read_csv(output, dtype=str)
    assert list(frame.columns) == ["index", "coord1", "coord2", "coord3"]
    assert len(frame) == 30


def test_roots_json_reports_axioms(tmp_path, capsys):
    output = tmp_path / "b4.json"
    code, _ = run_cli(capsys, "roots", "--system", "B4", "--format", "json", "--output", str(output))
    assert code == 0
    payload = read_json(output)
    assert payload["count"] == 32
    assert payload["axioms"]["axiom1"] and payload["axioms"]["axiom2"]


def test_metric_override_recloses(tmp_path, capsys):
    output = tmp_path / "e8-standard.json"
    code, _ = run_cli(capsys, "roots", "--system", "E8", "--metric", "standard", "--format", "json",
                      "--output", str(output))
    assert code == 0
    payload = read_json(output)
    assert payload["metric"] == "standard"
    assert payload["count"] == 240
    assert payload["axioms"]["axiom1"] is False


def test_default_output_path_uses_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    roots_file = tmp_path / "my_h3.txt"
    roots_file.write_text(H3_FILE, encoding="utf-8")
    code, status = run_cli(capsys, "roots", "--system", str(roots_file))
    assert code == 0
    assert Path(status["output"]) == tmp_path / "my-h3-roots.csv"
    assert len(pd.read_csv(status["output"])) == 30


def test_cartan_json_and_csv(tmp_path, capsys):
    output = tmp_path / "h4-cartan.json"
    assert run_cli(capsys, "cartan", "--system", "H4", "--output", str(output))[0] == 0
    payload = read_json(output)
    assert payload["diagram"]["edges"] == [[1, 2, 3], [2, 3, 3], [3, 4, 5]]
    assert payload["coxeter_matrix"][2][3] == 5

    csv_output = tmp_path / "b4-cartan.csv"
    assert run_cli(capsys, "cartan", "--system", "B4", "--format", "csv", "--output", str(csv_output))[0] == 0
    frame = pd.read_csv(csv_output, dtype=str)
    assert list(frame.iloc[2]) == ["0", "-1", "2", "-2"]


def test_pinors(tmp_path, capsys):
    output = tmp_path / "h3-pinors.json"
    assert run_cli(capsys, "pinors", "--system", "H3", "--output", str(output))[0] == 0
    payload = read_json(output)
    assert payload["pin_order"] == 240
    assert payload["spin_order"] == 120
    assert payload["closed"] is True
    assert payload["distinct_root_permutations"] == 120
    assert len(payload["spin_conjugacy_classes"]) == 9


def test_induce(tmp_path, capsys):
    output = tmp_path / "h3-induced.json"
    assert run_cli(capsys, "induce", "--system", "H3", "--format", "json", "--output", str(output))[0] == 0
    payload = read_json(output)
    assert payload["count"] == 120
    assert payload["axioms"]["axiom2"] is True
    assert payload["spinorial_symmetry"] == {"left": True, "right": True}


def test_e8_from_h3(tmp_path, capsys):
    output = tmp_path / "e8.json"
    assert run_cli(capsys, "e8-from-h3", "--output", str(output))[0] == 0
    payload = read_json(output)
    assert payload["root_count"] == 240
    assert payload["pinor_count"] == 240
    assert payload["closure_regenerates_roots"] is True
    assert payload["flattened_rank"] == 8
    assert payload["cartan"]["entries"][4] == ["0", "0", "0", "-1", "2", "-1", "0", "-1"]
    assert payload["odd_map"]["left_equals_right"] is True


def test_coxeter_factorization(tmp_path, capsys):
    output = tmp_path / "h4-coxeter.json"
    db = tmp_path / "results.duckdb"
    code, _ = run_cli(capsys, "coxeter", "--system", "H4", "--factorize", "--db", str(db), "--output", str(output))
    assert code == 0
    payload = read_json(output)
    assert payload["h"] == 30
    assert payload["factorization"]["exponents"] == [1, 11, 19, 29]
    assert payload["coxeter_plane"]["stabilization_error"] < 1e-9

    database = ResultsDatabase(str(db))
    try:
        stored = database.get_factorization("H4")
        assert stored["exponents"] == [1, 11, 19, 29]
        assert database.get_root_system("H4")["root_count"] == 120
    finally:
        database.close()


def test_coxeter_with_explicit_order(tmp_path, capsys):
    output = tmp_path / "e8-cl8.json"
    code, _ = run_cli(capsys, "coxeter", "--system", "E8-cl8", "--order", "1,7,2,6,3,5,4,8", "--output", str(output))
    assert code == 0
    payload = read_json(output)
    assert payload["order"] == [1, 7, 2, 6, 3, 5, 4, 8]
    assert payload["h"] == 30


def test_coxeter_in_the_reduced_metric(tmp_path, capsys):
    output = tmp_path / "e8-reduced.json"
    assert run_cli(capsys, "coxeter", "--system", "E8", "--output", str(output))[0] == 0
    assert read_json(output)["h"] == 30

    code, error = run_cli(capsys, "coxeter", "--system", "E8", "--factorize", "--output", str(output))
    assert code == 1
    assert error["error"] == "CommandError"
    assert error["command"] == "coxeter"


def test_fold(tmp_path, capsys):
    output = tmp_path / "fold.json"
    assert run_cli(capsys, "fold", "--system", "E8-cl8", "--output", str(output))[0] == 0
    payload = read_json(output)
    assert payload["chain_orders"] == [3, 3, 5]
    assert payload["folded_versor_residual"] < 1e-12

    code, error = run_cli(capsys, "fold", "--system", "A4", "--pairs", "1-2", "--output", str(output))
    assert code == 1
    assert error["error"] == "FoldingError"


def test_project_svg_is_deterministic(tmp_path, capsys):
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    for output in (first, second):
        assert run_cli(capsys, "project", "--system", "A4", "--format", "svg", "--output", str(output))[0] == 0
    text = first.read_text(encoding="utf-8")
    assert text.startswith("<?xml")
    assert text.rstrip().endswith("</svg>")
    assert first.read_bytes() == second.read_bytes()


def test_project_eigenplane_csv(tmp_path, capsys):
    output = tmp_path / "a4-plane2.csv"
    assert run_cli(capsys, "project", "--system", "A4", "--plane", "2", "--output", str(output))[0] == 0
    frame = pd.read_csv(output)
    assert len(frame) == 20
    assert sorted(frame.groupby("orbit_id").size()) == [5, 5, 5, 5]

    code, error = run_cli(capsys, "project", "--system", "A4", "--plane", "9", "--output", str(output))
    assert code == 1
    assert error["error"] == "CommandError"


def test_table_csv(tmp_path, capsys):
    output = tmp_path / "table.csv"
    code, _ = run_cli(capsys, "table", "--systems", "H4,A4", "--output", str(output))
    assert code == 0
    frame = pd.read_csv(output, dtype=str)
    assert list(frame["System"]) == ["A4", "H4"]
    assert list(frame["Exponents"]) == ["1, 2, 3, 4", "1, 11, 19, 29"]


def test_table_xlsx(tmp_path, capsys):
    from openpyxl import load_workbook

    output = tmp_path / "table.xlsx"
    code, _ = run_cli(capsys, "table", "--systems", "B4,D4", "--format", "xlsx", "--db", str(tmp_path / "t.duckdb"),
                      "--output", str(output))
    assert code == 0
    workbook = load_workbook(output)
    assert workbook.sheetnames == ["Factorizations", "Eigenplanes", "Root Systems"]
    assert workbook["Factorizations"]["A1"].value == "System"


@pytest.mark.parametrize(
    "argv, error",
    [
        (["roots", "--system", "G9"], "UnknownCatalogError"),
        (["roots", "--system", "H3", "--format", "svg"], "CommandError"),
        (["pinors", "--system", "I2(5)"], "NotUnitNormalizableError"),
    ],
)
def test_errors_are_reported_as_json(tmp_path, capsys, monkeypatch, argv, error):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    code, document = run_cli(capsys, *argv)
    assert code == 1
    assert document["error"] == error
    assert document["message"]


def test_invalid_log_level_is_an_argument_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["roots", "--system", "H3", "--log-level", "loud"])
    assert excinfo.value.code == 2


def test_log_file(tmp_path, capsys):
    log_file = tmp_path / "run.log"
    output = tmp_path / "a3.csv"
    assert run_cli(capsys, "roots", "--system", "A3", "--log-file", str(log_file), "--output", str(output))[0] == 0
    assert "Closed A3" in log_file.read_text(encoding="utf-8")


def test_option_parsers():
    assert parse_order("2,4,6,8,3,5,1,7") == (2, 4, 6, 8, 3, 5, 1, 7)
    assert parse_pairs("1-7, 2-6") == ((1, 7), (2, 6))
    config = CommandConfig(command="project", system="I2(5)", format="svg")
    assert config.output_path().name == "i2-5-project.svg"


def test_roots_csv_recloses_to_the_same_set(tmp_path, capsys):
    output = tmp_path / "h4.csv"
    assert run_cli(capsys, "roots", "--system", "H4", "--output", str(output))[0] == 0
    roots = read_roots_csv(output.read_text(encoding="utf-8"), 5)
    assert len(roots) == 120
    assert close_roots(roots).root_set() == load_catalog("H4").root_set()


@pytest.mark.parametrize(
    "argv, fmt",
    [
        (["roots", "--system", "F4"], "csv"),
        (["cartan", "--system", "H4"], "json"),
        (["coxeter", "--system", "D4", "--factorize"], "json"),
        (["project", "--system", "H3"], "csv"),
    ],
)
def test_reruns_are_byte_identical(tmp_path, capsys, argv, fmt):
    first, second = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
    for output in (first, second):
        assert run_cli(capsys, *argv, "--format", fmt, "--output", str(output))[0] == 0
    assert first.read_bytes() == second.read_bytes()


def test_coxeter_reports_a_missing_plane(tmp_path, capsys):
    roots_file = tmp_path / "a1.txt"
    roots_file.write_text("dim=2 field=sqrt-5\n1,0\n", encoding="utf-8")
    output = tmp_path / "a1.json"
    code, _ = run_cli(capsys, "coxeter", "--system", str(roots_file), "--output", str(output))
    assert code == 0
    payload = read_json(output)
    assert payload["h"] == 2
    assert "coxeter_plane" not in payload
    assert payload["plane_error"]["error"] == "DegeneratePlaneError"
