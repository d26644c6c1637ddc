import duckdb
import logging
from pathlib import Path
from typing import List, Optional, Dict, Any

from coxeter import CoxeterFactorization
from roots import RootSystem
from scalars import format_scalar


class ResultsDatabase:
    def __init__(self, db_path: str = "results.duckdb", logger=None):
        self.db_path = db_path
        self.logger = logger or logging.getLogger(__name__)
        self.conn = None
        self._initialize_database()

    def _initialize_database(self):
        """Initialize DuckDB connection and create tables"""
        try:
            abs_path = Path(self.db_path).resolve()
            self.logger.info(f"Connecting to database at: {abs_path}")

            self.conn = duckdb.connect(str(self.db_path))
            self._create_tables()
            self.logger.info(f"Database initialized successfully at {abs_path}")
        except Exception as e:
            self.logger.error(f"Failed to initialize database: {e}")
            raise

    def _create_tables(self):
        """Create the root system, root, factorization and eigenplane tables"""
        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS root_systems (
                id INTEGER PRIMARY KEY,
                name VARCHAR,
                dim INTEGER,
                rank INTEGER,
                metric VARCHAR,
                field VARCHAR,
                root_count INTEGER,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            )
        """)

        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS roots (
                system_id INTEGER,
                root_index INTEGER,
                coords VARCHAR,
                PRIMARY KEY (system_id, root_index)
            )
        """)

        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS factorizations (
                id INTEGER PRIMARY KEY,
                system_name VARCHAR,
                rank INTEGER,
                h INTEGER,
                exponents VARCHAR,
                reflection_pairs INTEGER,
                factor_form VARCHAR,
                residual DOUBLE,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            )
        """)

        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS eigenplanes (
                factorization_id INTEGER,
                plane_index INTEGER,
                kind VARCHAR,
                m INTEGER,
                h_minus_m INTEGER,
                angle_over_pi DOUBLE,
                bivector VARCHAR,
                PRIMARY KEY (factorization_id, plane_index)
            )
        """)

        self.conn.commit()
        self.logger.debug("Database tables created successfully")

    def _next_id(self, table: str) -> int:
        return self.conn.execute(f"SELECT COALESCE(MAX(id), 0) + 1 FROM {table}").fetchone()[0]

    def upsert_root_system(self, rs: RootSystem) -> int:
        """Insert or replace a root system and all of its roots; return its ID"""
        name = rs.label()
        try:
            existing = self.conn.execute(
                "SELECT id FROM root_systems WHERE name = ?", [name]
            ).fetchone()
            if existing:
                system_id = existing[0]
                action = "Updated"
            else:
                system_id = self._next_id("root_systems")
                action = "Added"

            field = "float" if rs.field is None else f"sqrt-{rs.field}"
            self.conn.execute("""
                INSERT INTO root_systems (
                    id, name, dim, rank, metric, field, root_count, created_at
                ) VALUES (?, ?, ?, ?, ?, ?, ?, CURRENT_TIMESTAMP)
                ON CONFLICT (id) DO UPDATE SET
                    dim = EXCLUDED.dim,
                    rank = EXCLUDED.rank,
                    metric = EXCLUDED.metric,
                    field = EXCLUDED.field,
                    root_count = EXCLUDED.root_count
            """, [system_id, name, rs.dim, rs.rank, rs.metric.value, field, len(rs.roots)])

            self.conn.execute("DELETE FROM roots WHERE system_id = ?", [system_id])
            self.conn.executemany(
                "INSERT INTO roots (system_id, root_index, coords) VALUES (?, ?, ?)",
                [[system_id, i, ",".join(format_scalar(x) for x in r)] for i, r in enumerate(rs.roots)],
            )

            self.conn.commit()
            self.logger.info(f"{action} root system '{name}' with ID {system_id} ({len(rs.roots)} roots)")
            return system_id

        except Exception as e:
            self.logger.error(f"Failed to insert/update root system '{name}': {e}")
            self.conn.rollback()
            raise

    def insert_factorization(self, fact: CoxeterFactorization) -> int:
        """Insert or replace the factorization stored for a system; return its ID"""
        name = fact.name or f"rank-{fact.dim}"
        try:
            existing = self.conn.execute(
                "SELECT id FROM factorizations WHERE system_name = ?", [name]
            ).fetchone()
            fact_id = existing[0] if existing else self._next_id("factorizations")

            self.conn.execute("""
                INSERT INTO factorizations (
                    id, system_name, rank, h, exponents, reflection_pairs, factor_form, residual, created_at
                ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, CURRENT_TIMESTAMP)
                ON CONFLICT (id) DO UPDATE SET
                    rank = EXCLUDED.rank,
                    h = EXCLUDED.h,
                    exponents = EXCLUDED.exponents,
                    reflection_pairs = EXCLUDED.reflection_pairs,
                    factor_form = EXCLUDED.factor_form,
                    residual = EXCLUDED.residual
            """, [
                fact_id, name, fact.dim, fact.h,
                ",".join(str(m) for m in fact.exponents()),
                len(fact.reflection_pairs), fact.factor_form(), fact.residual,
            ])

            self.conn.execute("DELETE FROM eigenplanes WHERE factorization_id = ?", [fact_id])
            rows = []
            for index, plane in enumerate(fact.all_planes(), start=1):
                record = plane.to_json()
                rows.append([
                    fact_id, index, plane.kind, plane.exponents[0], plane.exponents[1],
                    record["angle_over_pi"],
                    " + ".join(f"({coeff})*{blade}" for blade, coeff in record["bivector"]),
                ])
            if rows:
                self.conn.executemany("""
                    INSERT INTO eigenplanes (
                        factorization_id, plane_index, kind, m, h_minus_m, angle_over_pi, bivector
                    ) VALUES (?, ?, ?, ?, ?, ?, ?)
                """, rows)

            self.conn.commit()
            self.logger.info(f"Stored factorization of '{name}' with ID {fact_id}")
            return fact_id

        except Exception as e:
            self.logger.error(f"Failed to store factorization of '{name}': {e}")
            self.conn.rollback()
            raise

    def get_root_system(self, name: str) -> Optional[Dict]:
        """Get a stored root system with its roots as lists of scalar strings"""
        try:
            result = self.conn.execute("""
                SELECT id, name, dim, rank, metric, field, root_count, created_at
                FROM root_systems WHERE name = ?
            """, [name]).fetchone()
            if not result:
                return None

            roots = self.conn.execute(
                "SELECT coords FROM roots WHERE system_id = ? ORDER BY root_index", [result[0]]
            ).fetchall()
            return {
                'id': result[0],
                'name': result[1],
                'dim': result[2],
                'rank': result[3],
                'metric': result[4],
                'field': result[5],
                'root_count': result[6],
                'created_at': result[7],
                'roots': [row[0].split(",") for row in roots],
            }

        except Exception as e:
            self.logger.error(f"Failed to get root system '{name}': {e}")
            return None

    def _factorization_record(self, row) -> Dict[str, Any]:
        return {
            'id': row[0],
            'system_name': row[1],
            'rank': row[2],
            'h': row[3],
            'exponents': [int(m) for m in row[4].split(",")] if row[4] else [],
            'reflection_pairs': row[5],
            'factor_form': row[6],
            'residual': row[7],
            'created_at': row[8],
        }

    def get_factorization(self, name: str) -> Optional[Dict]:
        """Get a stored factorization with its eigenplanes"""
        try:
            result = self.conn.execute("""
                SELECT id, system_name, rank, h, exponents, reflection_pairs, factor_form, residual, created_at
                FROM factorizations WHERE system_name = ?
            """, [name]).fetchone()
            if not result:
                return None

            record = self._factorization_record(result)
            planes = self.conn.execute("""
                SELECT plane_index, kind, m, h_minus_m, angle_over_pi, bivector
                FROM eigenplanes WHERE factorization_id = ? ORDER BY plane_index
            """, [result[0]]).fetchall()
            record['planes'] = [
                {
                    'plane_index': p[0],
                    'kind': p[1],
                    'm': p[2],
                    'h_minus_m': p[3],
                    'angle_over_pi': p[4],
                    'bivector': p[5],
                }
                for p in planes
            ]
            return record

        except Exception as e:
            self.logger.error(f"Failed to get factorization '{name}': {e}")
            return None

    def list_factorizations(self) -> List[Dict]:
        """All stored factorizations ordered by rank, then Coxeter number, then name"""
        try:
            results = self.conn.execute("""
                SELECT id, system_name, rank, h, exponents, reflection_pairs, factor_form, residual, created_at
                FROM factorizations ORDER BY rank, h, system_name
            """).fetchall()
            return [self._factorization_record(row) for row in results]

        except Exception as e:
            self.logger.error(f"Failed to list factorizations: {e}")
            return []

    def close(self):
        """Close database connection"""
        if self.conn:
            self.conn.close()
            self.conn = None
            self.logger.info("Database connection closed")
