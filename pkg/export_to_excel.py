#!/usr/bin/env python3
"""
Export stored Coxeter factorizations from DuckDB to an Excel workbook.
"""
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import duckdb
import pandas as pd

from logger_config import LoggerConfig

SUMMARY_COLUMNS = ["System", "Rank", "h", "Exponents", "Factor Form", "Reflection Pairs", "Residual"]
PLANE_COLUMNS = ["System", "Plane", "Kind", "m", "h - m", "Angle / pi", "Bivector"]
ROOT_SYSTEM_COLUMNS = ["System", "Dim", "Rank", "Metric", "Field", "Roots"]


def summary_frame(records: Iterable[Dict]) -> pd.DataFrame:
    """One row per factorization: rank, Coxeter number, exponents and factor form."""
    rows = [
        {
            "System": r["system_name"],
            "Rank": r["rank"],
            "h": r["h"],
            "Exponents": ", ".join(str(m) for m in r["exponents"]),
            "Factor Form": r["factor_form"],
            "Reflection Pairs": r["reflection_pairs"],
            "Residual": float(f"{r['residual']:.3g}"),
        }
        for r in records
    ]
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


class FactorizationTableExporter:
    """Encapsulates the DuckDB → Excel export of the factorization tables."""

    def __init__(self, db_path: Path, output_path: Path, overwrite: bool = False,
                 logger: Optional[logging.Logger] = None):
        self.db_path = Path(db_path)
        self.output_path = Path(output_path)
        self.overwrite = overwrite
        self.logger = logger or logging.getLogger(__name__)

    # ------------------------------------------------------------------ #
    # Public API
    # ------------------------------------------------------------------ #
    def run(self) -> bool:
        """Execute the export pipeline."""
        if not self._validate_paths():
            return False

        payload: Optional[Dict[str, pd.DataFrame]] = None

        try:
            with duckdb.connect(str(self.db_path), read_only=True) as con:
                self.logger.info("Connected to database: %s", self.db_path)
                payload = self._collect_payload(con)
                self._write_workbook(payload)
        except Exception as exc:  # pragma: no cover - top level guard
            self.logger.error("Export failed: %s", exc)
            return False

        self._log_summary(payload)
        return True

    # ------------------------------------------------------------------ #
    # Data loading
    # ------------------------------------------------------------------ #
    def _collect_payload(self, con: duckdb.DuckDBPyConnection) -> Dict[str, pd.DataFrame]:
        return {
            "summary": self._load_summary(con),
            "planes": self._load_planes(con),
            "root_systems": self._load_root_systems(con),
        }

    def _load_summary(self, con: duckdb.DuckDBPyConnection) -> pd.DataFrame:
        self.logger.info("Querying factorizations...")
        df = con.execute(
            """
            SELECT system_name, rank, h, exponents, reflection_pairs, factor_form, residual
            FROM factorizations
            ORDER BY rank, h, system_name
        """
        ).fetchdf()
        records: List[Dict] = [
            {**row, "exponents": [int(m) for m in str(row["exponents"]).split(",") if m]}
            for row in df.to_dict(orient="records")
        ]
        self.logger.info("Found %d factorizations", len(records))
        return summary_frame(records)

    def _load_planes(self, con: duckdb.DuckDBPyConnection) -> pd.DataFrame:
        df = con.execute(
            """
            SELECT
                f.system_name AS "System",
                p.plane_index AS "Plane",
                p.kind AS "Kind",
                p.m AS "m",
                p.h_minus_m AS "h - m",
                p.angle_over_pi AS "Angle / pi",
                p.bivector AS "Bivector"
            FROM eigenplanes p
            JOIN factorizations f ON f.id = p.factorization_id
            ORDER BY f.rank, f.h, f.system_name, p.plane_index
        """
        ).fetchdf()
        self.logger.info("Found %d eigenplanes", len(df))
        return df

    def _load_root_systems(self, con: duckdb.DuckDBPyConnection) -> pd.DataFrame:
        return con.execute(
            """
            SELECT
                name AS "System",
                dim AS "Dim",
                rank AS "Rank",
                metric AS "Metric",
                field AS "Field",
                root_count AS "Roots"
            FROM root_systems
            ORDER BY rank, name
        """
        ).fetchdf()

    # ------------------------------------------------------------------ #
    # Workbook generation
    # ------------------------------------------------------------------ #
    def _write_workbook(self, payload: Dict[str, pd.DataFrame]) -> None:
        self.logger.info("Writing to Excel file: %s", self.output_path)
        self.output_path.parent.mkdir(parents=True, exist_ok=True)
        with pd.ExcelWriter(self.output_path, engine="openpyxl") as writer:
            self._write_sheet(writer, "Factorizations", payload["summary"], empty_columns=SUMMARY_COLUMNS)
            self._write_sheet(writer, "Eigenplanes", payload["planes"], empty_columns=PLANE_COLUMNS)
            self._write_sheet(writer, "Root Systems", payload["root_systems"], empty_columns=ROOT_SYSTEM_COLUMNS)
            self._format_workbook(writer)

    def _write_sheet(
        self,
        writer: pd.ExcelWriter,
        sheet_name: str,
        df: pd.DataFrame,
        *,
        empty_columns: Optional[Iterable[str]] = None,
    ) -> None:
        if df.empty and empty_columns:
            pd.DataFrame(columns=list(empty_columns)).to_excel(writer, sheet_name=sheet_name, index=False)
            self.logger.info("Created empty '%s' tab (no data available)", sheet_name)
        else:
            df.to_excel(writer, sheet_name=sheet_name, index=False)
            self.logger.info("Written %s rows to '%s' tab", len(df), sheet_name)

    def _format_workbook(self, writer: pd.ExcelWriter) -> None:
        from openpyxl.styles import Alignment, Font
        from openpyxl.utils import get_column_letter

        for worksheet in writer.sheets.values():
            for column in worksheet.columns:
                cells = list(column)
                if not cells:
                    continue
                longest = max(len(str(cell.value)) if cell.value is not None else 0 for cell in cells)
                header = str(cells[0].value or "").lower()
                limit = 80 if header in ("factor form", "bivector") else 30
                worksheet.column_dimensions[cells[0].column_letter].width = min(longest + 2, limit)
                for cell in cells:
                    cell.alignment = Alignment(wrap_text=True, vertical="top")

            for cell in next(worksheet.iter_rows(min_row=1, max_row=1), []):
                cell.font = Font(bold=True)

            if worksheet.max_row > 1:
                max_col_letter = get_column_letter(worksheet.max_column)
                worksheet.auto_filter.ref = f"A1:{max_col_letter}{worksheet.max_row}"
                for row in worksheet.iter_rows(min_row=2):
                    width = max(
                        math.ceil(len(str(c.value)) / max(worksheet.column_dimensions[c.column_letter].width or 10, 10))
                        for c in row
                    )
                    worksheet.row_dimensions[row[0].row].height = max(15, width * 15)

            worksheet.freeze_panes = "A2"

    # ------------------------------------------------------------------ #
    # Helpers
    # ------------------------------------------------------------------ #
    def _validate_paths(self) -> bool:
        if not self.db_path.exists():
            self.logger.error("Database file %s not found", self.db_path)
            return False

        if self.output_path.exists():
            if not self.overwrite:
                self.logger.error(
                    "Output file %s already exists. Use overwrite=True to replace it.",
                    self.output_path,
                )
                return False
            try:
                self.logger.info("Output file %s exists, overwriting...", self.output_path)
                self.output_path.unlink()
            except OSError as exc:
                self.logger.error("Failed to delete existing file %s: %s", self.output_path, exc)
                return False

        return True

    def _log_summary(self, payload: Optional[Dict[str, pd.DataFrame]]) -> None:
        if not payload:
            return

        self.logger.info("Excel export completed successfully!")
        self.logger.info("Output file: %s", self.output_path)
        self.logger.info("Factorizations exported: %d", len(payload["summary"]))
        self.logger.info("Eigenplanes exported: %d", len(payload["planes"]))


# ---------------------------------------------------------------------- #
# Module API
# ---------------------------------------------------------------------- #
def export_to_excel(db_path: str = "results.duckdb", output_file: str = "factorizations.xlsx",
                    overwrite: bool = False, logger: Optional[logging.Logger] = None) -> bool:
    """Export every stored factorization; used by the table command of the CLI."""
    logger = logger or LoggerConfig(name="FactorizationExport", log_level=logging.INFO).get_logger()
    logger.info("Starting Excel export process")

    exporter = FactorizationTableExporter(
        db_path=Path(db_path), output_path=Path(output_file), overwrite=overwrite, logger=logger
    )
    return exporter.run()
