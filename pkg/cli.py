#!/usr/bin/env python3
"""
Command-line entry point: builds root systems, versor groups, Coxeter versors,
foldings and projections, and writes the results as CSV, JSON, SVG or XLSX.
"""
import argparse
import json
import logging
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import pandas as pd

from coxeter import (
    coxeter_number,
    coxeter_plane,
    coxeter_versor,
    eigenplane_projections,
    factorize_versor,
    fold_diagram,
    project_to_plane,
)
from database import ResultsDatabase
from export_to_excel import export_to_excel, summary_frame
from induction import (
    action_permutations,
    conjugacy_classes,
    e8_construction,
    induce_4d,
    pinor_closure,
    spin_subgroup,
    spinorial_symmetry_check,
    verify_group_closure,
)
from logger_config import LoggerConfig
from roots import (
    CATALOG,
    Metric,
    RootSystem,
    UnknownCatalogError,
    cartan_matrix,
    close_roots,
    extract_diagram,
    flatten_tau,
    load_catalog,
    parse_simple_roots_file,
    rational_rank,
    roots_frame,
    verify_root_axioms,
)
from svg_render import SvgStyle, write_svg

OUTPUT_DIR_ENV = "CLIFFORD_COXETER_OUTPUT_DIR"

COMMAND_FORMATS = {
    "roots": ("csv", "json"),
    "cartan": ("json", "csv"),
    "pinors": ("json",),
    "induce": ("csv", "json"),
    "e8-from-h3": ("json", "csv"),
    "coxeter": ("json",),
    "fold": ("json",),
    "project": ("csv", "svg"),
    "table": ("csv", "xlsx"),
}

DEFAULT_TABLE_SYSTEMS = ("A4", "B4", "D4", "F4", "H4")

logger = logging.getLogger(__name__)


@dataclass
class CommandConfig:
    command: str
    system: Optional[str] = None
    n: Optional[int] = None
    metric: Optional[str] = None
    order: Optional[Tuple[int, ...]] = None
    output: Optional[Path] = None
    format: Optional[str] = None
    factorize: bool = False
    pairs: Optional[Tuple[Tuple[int, int], ...]] = None
    plane: int = 1
    systems: Tuple[str, ...] = DEFAULT_TABLE_SYSTEMS
    db: Optional[Path] = None
    log_level: str = "INFO"
    log_file: Optional[Path] = None

    @property
    def output_format(self) -> str:
        return self.format or COMMAND_FORMATS[self.command][0]

    def output_path(self) -> Path:
        if self.output:
            return Path(self.output)
        directory = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
        stem = _slug(self.system or ("e8" if self.command == "e8-from-h3" else "systems"))
        return directory / f"{stem}-{self.command}.{self.output_format}"


class CommandError(ValueError):
    """Invalid combination of command-line options."""


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", Path(text).stem).strip("-").lower()


# ---- argument parsing ----

def parse_order(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"order must look like '2,4,6,8,3,5,1,7', got {text!r}") from exc


def parse_pairs(text: str) -> Tuple[Tuple[int, int], ...]:
    pairs = []
    for chunk in text.split(","):
        match = re.fullmatch(r"\s*(\d+)\s*-\s*(\d+)\s*", chunk)
        if not match:
            raise argparse.ArgumentTypeError(f"pairs must look like '1-7,2-6', got {text!r}")
        pairs.append((int(match.group(1)), int(match.group(2))))
    return tuple(pairs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clifford-coxeter",
        description="Root systems, spinor induction and Coxeter versor factorizations in Clifford algebra.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", type=Path, help=f"output file (default: ${OUTPUT_DIR_ENV} or the working directory)")
    common.add_argument("--format", help="output format")
    common.add_argument("--db", type=Path, help="also store results in this DuckDB file")
    common.add_argument("--log-level", default="INFO", type=str.upper,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging level")
    common.add_argument("--log-file", type=Path, help="also log to this file")

    system = argparse.ArgumentParser(add_help=False)
    system.add_argument("--system", required=True,
                        help=f"catalog name ({', '.join(['I2(n)', *CATALOG])}) or a simple-roots file")
    system.add_argument("--n", type=int, help="n for I2(n)")
    system.add_argument("--metric", choices=[m.value for m in Metric], help="override the catalog metric")

    ordered = argparse.ArgumentParser(add_help=False)
    ordered.add_argument("--order", type=parse_order, help="simple-root order, e.g. 2,4,6,8,3,5,1,7")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("roots", parents=[common, system], help="close simple roots under reflections")
    commands.add_parser("cartan", parents=[common, system], help="Cartan matrix and Coxeter diagram")
    commands.add_parser("pinors", parents=[common, system], help="pinor group, spin subgroup and classes")
    commands.add_parser("induce", parents=[common, system], help="4D root system induced by the spin group")
    commands.add_parser("e8-from-h3", parents=[common], help="E8 from the 240 icosahedral pinors")
    coxeter = commands.add_parser("coxeter", parents=[common, system, ordered], help="Coxeter versor")
    coxeter.add_argument("--factorize", action="store_true", help="factorize into eigenplane rotations")
    fold = commands.add_parser("fold", parents=[common, system], help="fold the Coxeter diagram")
    fold.add_argument("--pairs", type=parse_pairs, help="orthogonal simple-root pairs, e.g. 1-7,2-6,3-5,4-8")
    project = commands.add_parser("project", parents=[common, system, ordered], help="project roots into a plane")
    project.add_argument("--plane", type=int, default=1,
                         help="1 for the Coxeter plane, k for the k-th eigenplane of the factorization")
    table = commands.add_parser("table", parents=[common], help="factorization summary table")
    table.add_argument("--systems", default=",".join(DEFAULT_TABLE_SYSTEMS), help="comma-separated catalog names")
    return parser


def config_from_args(args: argparse.Namespace) -> CommandConfig:
    systems = getattr(args, "systems", None)
    return CommandConfig(
        command=args.command,
        system=getattr(args, "system", None),
        n=getattr(args, "n", None),
        metric=getattr(args, "metric", None),
        order=getattr(args, "order", None),
        output=args.output,
        format=args.format,
        factorize=getattr(args, "factorize", False),
        pairs=getattr(args, "pairs", None),
        plane=getattr(args, "plane", 1),
        systems=tuple(s.strip() for s in systems.split(",") if s.strip()) if systems else DEFAULT_TABLE_SYSTEMS,
        db=args.db,
        log_level=args.log_level,
        log_file=args.log_file,
    )


# ---- system resolution ----

def resolve_system(config: CommandConfig) -> RootSystem:
    """Catalog name or simple-roots file, optionally re-closed in another metric."""
    name = config.system
    if not name:
        raise CommandError(f"{config.command} needs --system")
    path = Path(name)
    if name in CATALOG or name.startswith("I2"):
        rs = load_catalog(name, config.n)
    elif path.is_file():
        parsed = parse_simple_roots_file(path.read_text(encoding="utf-8"))
        metric = Metric(config.metric) if config.metric else Metric.STANDARD
        return close_roots(parsed.roots, metric=metric, name=path.stem)
    else:
        raise UnknownCatalogError(f"{name!r} is neither a catalog name nor a simple-roots file")
    if config.metric and Metric(config.metric) != rs.metric:
        rs = close_roots(rs.simple_roots, metric=Metric(config.metric), name=rs.name,
                         coxeter_order=rs.coxeter_order, fold_pairs=rs.fold_pairs)
    return rs


# ---- commands ----

def _roots_payload(rs: RootSystem) -> Dict[str, Any]:
    frame = roots_frame(rs)
    return {
        "name": rs.label(),
        "metric": rs.metric.value,
        "count": len(rs.roots),
        "axioms": verify_root_axioms(rs).to_dict(),
        "roots": frame.drop(columns="index").values.tolist(),
    }


def _cmd_roots(config: CommandConfig):
    rs = resolve_system(config)
    _store_root_system(config, rs)
    if config.output_format == "csv":
        return roots_frame(rs)
    return _roots_payload(rs)


def _cmd_cartan(config: CommandConfig):
    rs = resolve_system(config)
    cartan = cartan_matrix(rs.simple_roots, rs.metric)
    if config.output_format == "csv":
        entries = cartan.to_json()["entries"]
        return pd.DataFrame(entries, columns=[f"alpha{i}" for i in cartan.labels])
    diagram = extract_diagram(cartan)
    return {
        "name": rs.label(),
        "metric": rs.metric.value,
        "cartan": cartan.to_json(),
        "diagram": diagram.to_json(),
        "coxeter_matrix": diagram.coxeter_matrix(),
    }


def _cmd_pinors(config: CommandConfig):
    rs = resolve_system(config)
    pin = pinor_closure(rs)
    spin = spin_subgroup(pin)
    closure = verify_group_closure(pin)
    classes = conjugacy_classes(spin)
    return {
        "name": rs.label(),
        "pin_order": len(pin),
        "spin_order": len(spin),
        "closed": closure.passed,
        "distinct_root_permutations": len(action_permutations(pin, rs)),
        "spin_conjugacy_classes": [c.to_json() for c in classes],
        "spin_elements": [x.terms() for x in spin.elements],
    }


def _cmd_induce(config: CommandConfig):
    rs = resolve_system(config)
    spin = spin_subgroup(pinor_closure(rs))
    induced = induce_4d(spin)
    _store_root_system(config, induced.rootsystem)
    if config.output_format == "csv":
        return roots_frame(induced.rootsystem)
    symmetry = spinorial_symmetry_check(spin)
    payload = _roots_payload(induced.rootsystem)
    payload["spinorial_symmetry"] = {"left": symmetry.left, "right": symmetry.right}
    return payload


def _cmd_e8_from_h3(config: CommandConfig):
    construction = e8_construction()
    rs = construction.rootsystem
    _store_root_system(config, rs)
    if config.output_format == "csv":
        return roots_frame(rs)
    reclosed = close_roots(rs.simple_roots, metric=Metric.REDUCED, name="E8")
    payload = construction.to_json()
    payload["cartan"] = cartan_matrix(rs.simple_roots, Metric.REDUCED).to_json()
    payload["closure_regenerates_roots"] = reclosed.root_set() == rs.root_set()
    payload["flattened_rank"] = rational_rank([flatten_tau(r) for r in rs.simple_roots])
    return payload


def _cmd_coxeter(config: CommandConfig):
    rs = resolve_system(config)
    if rs.metric != Metric.STANDARD:
        if config.factorize:
            raise CommandError(f"{rs.label()} uses the {rs.metric.value} metric; factorize E8-cl8 instead")
        return {
            "name": rs.label(),
            "order": list(config.order or rs.coxeter_order or range(1, rs.rank + 1)),
            "h": coxeter_number(rs, config.order),
            "note": "Coxeter element computed as a permutation of the roots; no versor form in this metric",
        }
    cv = coxeter_versor(rs, config.order)
    payload = cv.to_json()
    try:
        plane = coxeter_plane(rs, order=cv.order)
        payload["coxeter_plane"] = plane.to_json()
        payload["coxeter_plane"]["stabilization_error"] = plane.stabilization_error(cv)
    except ValueError as exc:
        logger.warning("No Coxeter plane for %s: %s", rs.label(), exc)
        payload["plane_error"] = {"error": type(exc).__name__, "message": str(exc)}
    if config.factorize:
        fact = factorize_versor(cv)
        payload["factorization"] = fact.to_json()
        _store_factorization(config, rs, fact)
    return payload


def _cmd_fold(config: CommandConfig):
    rs = resolve_system(config)
    folding = fold_diagram(rs, config.pairs)
    payload = folding.to_json()
    if folding.folded_generators is not None:
        flattened = tuple(i for pair in folding.pairs for i in pair)
        if len(flattened) == rs.rank:
            w = coxeter_versor(rs, flattened).versor.mv.to_float()
            folded = folding.folded_versor().mv.to_float()
            payload["folded_versor_residual"] = min(folded.max_abs_diff(w), folded.max_abs_diff(-w))
    return payload


def _cmd_project(config: CommandConfig):
    rs = resolve_system(config)
    if config.plane < 1:
        raise CommandError("--plane counts from 1")
    if config.plane == 1:
        projection = project_to_plane(rs, coxeter_plane(rs, order=config.order))
    else:
        fact = factorize_versor(coxeter_versor(rs, config.order))
        planes = eigenplane_projections(rs, fact)
        if config.plane > len(planes):
            raise CommandError(f"{rs.label()} has {len(planes)} eigenplanes, asked for {config.plane}")
        projection = planes[config.plane - 1]
    if config.output_format == "svg":
        write_svg(config.output_path(), projection.points, SvgStyle(title=f"{rs.label()} plane {config.plane}"))
        return None
    return pd.DataFrame(projection.rows(), columns=["root_index", "x", "y", "radius", "orbit_id"])


def _cmd_table(config: CommandConfig):
    with tempfile.TemporaryDirectory() as scratch:
        db_path = config.db or Path(scratch) / "table.duckdb"
        db = ResultsDatabase(str(db_path), logger.getChild("db"))
        try:
            for name in config.systems:
                rs = load_catalog(name)
                db.upsert_root_system(rs)
                db.insert_factorization(factorize_versor(coxeter_versor(rs)))
            records = [r for r in db.list_factorizations() if r["system_name"] in config.systems]
        finally:
            db.close()
        if config.output_format == "csv":
            return summary_frame(records)
        if not export_to_excel(str(db_path), str(config.output_path()), overwrite=True,
                               logger=logger.getChild("excel")):
            raise RuntimeError(f"XLSX export to {config.output_path()} failed")
        return None


COMMANDS = {
    "roots": _cmd_roots,
    "cartan": _cmd_cartan,
    "pinors": _cmd_pinors,
    "induce": _cmd_induce,
    "e8-from-h3": _cmd_e8_from_h3,
    "coxeter": _cmd_coxeter,
    "fold": _cmd_fold,
    "project": _cmd_project,
    "table": _cmd_table,
}


def _store_root_system(config: CommandConfig, rs: RootSystem) -> None:
    if config.db:
        db = ResultsDatabase(str(config.db), logger.getChild("db"))
        try:
            db.upsert_root_system(rs)
        finally:
            db.close()


def _store_factorization(config: CommandConfig, rs: RootSystem, fact) -> None:
    if config.db:
        db = ResultsDatabase(str(config.db), logger.getChild("db"))
        try:
            db.upsert_root_system(rs)
            db.insert_factorization(fact)
        finally:
            db.close()


# ---- output ----

def write_result(result, path: Path, fmt: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if result is None:
        return
    if isinstance(result, pd.DataFrame):
        result.to_csv(path, index=False, lineterminator="\n")
    elif isinstance(result, str):
        path.write_text(result, encoding="utf-8")
    else:
        path.write_text(json.dumps(result, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    logger.info("Wrote %s output to %s", fmt, path)


def error_document(exc: BaseException, command: str) -> Dict[str, str]:
    message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
    return {"error": type(exc).__name__, "message": str(message), "command": command}


def run(config: CommandConfig) -> int:
    """Execute one command; 0 on success, 1 with an error document on stdout otherwise."""
    try:
        if config.command not in COMMANDS:
            raise CommandError(f"unknown command {config.command!r}")
        allowed = COMMAND_FORMATS[config.command]
        if config.output_format not in allowed:
            raise CommandError(f"{config.command} writes {', '.join(allowed)}, not {config.output_format}")
        path = config.output_path()
        result = COMMANDS[config.command](config)
        write_result(result, path, config.output_format)
    except (ValueError, ArithmeticError, RuntimeError, KeyError, OSError) as exc:
        logger.error("%s failed: %s", config.command, exc)
        print(json.dumps(error_document(exc, config.command)))
        return 1
    print(json.dumps({"command": config.command, "output": str(path)}))
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI entrypoint."""
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    logger_config = LoggerConfig(
        name="clifford_coxeter",
        log_level=config.log_level,
        log_file=str(config.log_file) if config.log_file else None,
    )
    logger_config.get_logger()
    try:
        return run(config)
    finally:
        logger_config.remove_handlers()


if __name__ == "__main__":
    raise SystemExit(main())
