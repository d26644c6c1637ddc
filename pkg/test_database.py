#!/usr/bin/env python3
"""
Tests for the DuckDB results store and the Excel export
"""
import logging

import pytest

from coxeter import coxeter_versor, factorize_versor
from database import ResultsDatabase
from export_to_excel import SUMMARY_COLUMNS, FactorizationTableExporter, export_to_excel, summary_frame
from logger_config import LoggerConfig
from roots import load_catalog


@pytest.fixture
def logger(tmp_path):
    logger_config = LoggerConfig(
        name="DatabaseTest",
        log_level=logging.DEBUG,
        log_file=str(tmp_path / "test_database.log"),
    )
    yield logger_config.get_logger()
    logger_config.remove_handlers()


@pytest.fixture
def db(tmp_path, logger):
    database = ResultsDatabase(str(tmp_path / "test_results.duckdb"), logger)
    yield database
    database.close()


def store(db, name):
    rs = load_catalog(name)
    db.upsert_root_system(rs)
    return db.insert_factorization(factorize_versor(coxeter_versor(rs)))


def test_root_system_round_trip(db):
    rs = load_catalog("H3")
    system_id = db.upsert_root_system(rs)

    stored = db.get_root_system("H3")
    assert stored["id"] == system_id
    assert stored["dim"] == 3
    assert stored["rank"] == 3
    assert stored["metric"] == "standard"
    assert stored["field"] == "sqrt-5"
    assert stored["root_count"] == 30
    assert len(stored["roots"]) == 30
    assert stored["roots"][0] == ["0", "1", "0"]


def test_upsert_keeps_the_id(db):
    first = db.upsert_root_system(load_catalog("A4"))
    second = db.upsert_root_system(load_catalog("A4"))
    other = db.upsert_root_system(load_catalog("I2(5)"))
    assert first == second
    assert other != first
    assert db.get_root_system("I2(5)")["field"] == "float"
    assert len(db.get_root_system("A4")["roots"]) == 20


def test_factorization_round_trip(db):
    fact_id = store(db, "H4")
    stored = db.get_factorization("H4")
    assert stored["id"] == fact_id
    assert stored["h"] == 30
    assert stored["rank"] == 4
    assert stored["exponents"] == [1, 11, 19, 29]
    assert stored["reflection_pairs"] == 0
    assert stored["factor_form"] == "exp(π/30 B1) exp(11π/30 B2)"
    assert stored["residual"] < 1e-8
    assert [p["m"] for p in stored["planes"]] == [1, 11]
    assert [p["h_minus_m"] for p in stored["planes"]] == [29, 19]
    assert all(p["kind"] == "rotation" for p in stored["planes"])


def test_reflection_pairs_are_stored_as_planes(db):
    store(db, "D4")
    stored = db.get_factorization("D4")
    assert [p["kind"] for p in stored["planes"]] == ["rotation", "reflection_pair"]
    assert stored["planes"][1]["angle_over_pi"] == pytest.approx(1.0)


def test_reinserting_replaces_planes(db):
    first = store(db, "A4")
    second = store(db, "A4")
    assert first == second
    assert len(db.get_factorization("A4")["planes"]) == 2


def test_list_factorizations_order(db):
    for name in ("H4", "B3", "A4"):
        store(db, name)
    names = [r["system_name"] for r in db.list_factorizations()]
    assert names == ["B3", "A4", "H4"]


def test_missing_records(db):
    assert db.get_root_system("G2") is None
    assert db.get_factorization("G2") is None


def test_summary_frame():
    frame = summary_frame([
        {
            "system_name": "A4", "rank": 4, "h": 5, "exponents": [1, 2, 3, 4],
            "factor_form": "exp(π/5 B1) exp(2π/5 B2)", "reflection_pairs": 0, "residual": 1.23456e-15,
        }
    ])
    assert list(frame.columns) == SUMMARY_COLUMNS
    assert frame.loc[0, "Exponents"] == "1, 2, 3, 4"
    assert frame.loc[0, "Residual"] == pytest.approx(1.23e-15)


def test_excel_export(tmp_path, db, logger):
    from openpyxl import load_workbook

    for name in ("B4", "D4"):
        store(db, name)
    db.close()

    output = tmp_path / "factorizations.xlsx"
    assert export_to_excel(str(tmp_path / "test_results.duckdb"), str(output), logger=logger)
    workbook = load_workbook(output)
    sheet = workbook["Factorizations"]
    assert [c.value for c in sheet[1]] == SUMMARY_COLUMNS
    assert sheet["A2"].value == "D4"
    assert sheet["D3"].value == "1, 3, 5, 7"
    assert sheet.freeze_panes == "A2"
    assert workbook["Eigenplanes"].max_row == 1 + 2 + 2
    assert workbook["Root Systems"].max_row == 3


def test_excel_export_guards(tmp_path, logger):
    missing = FactorizationTableExporter(tmp_path / "missing.duckdb", tmp_path / "out.xlsx", logger=logger)
    assert missing.run() is False

    database = ResultsDatabase(str(tmp_path / "empty.duckdb"), logger)
    database.close()
    existing = tmp_path / "exists.xlsx"
    existing.write_bytes(b"")
    blocked = FactorizationTableExporter(tmp_path / "empty.duckdb", existing, logger=logger)
    assert blocked.run() is False

    empty = FactorizationTableExporter(tmp_path / "empty.duckdb", existing, overwrite=True, logger=logger)
    assert empty.run() is True
