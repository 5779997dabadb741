"""Embedded warehouse: entities, dimensions, users, and the load-run metadata.

One SQLite file holds everything, so the whole system runs from a checkout
with no server. Concurrency contract: any number of reader threads (each
thread gets its own connection; WAL mode gives snapshot reads), writes
serialized behind a single re-entrant gate. A reader never sees a partially
applied batch.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
import sqlite3
import threading
from contextlib import contextmanager
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .model import (
    Applicability,
    Dimension,
    DimensionCatalog,
    DimensionEntry,
    EmployeeRecord,
    LecturerRecord,
)

SCHEMA_VERSION = 1

# Default operator accounts created with a fresh store. The serve command
# warns until these passwords are changed (see README).
DEFAULT_USERS = (
    ("dekan", "dekan123", "DEAN"),
    ("sdm", "sdm123", "HR_STAFF"),
)

ROLES = ("DEAN", "HR_STAFF")

_SCHEMA = """
CREATE TABLE IF NOT EXISTS dimensions (
    dim TEXT NOT NULL,
    code TEXT NOT NULL,
    label TEXT NOT NULL,
    applicability TEXT NOT NULL,
    position INTEGER NOT NULL,
    PRIMARY KEY (dim, code)
);
CREATE TABLE IF NOT EXISTS lecturers (
    lecturer_id TEXT PRIMARY KEY,
    name TEXT NOT NULL,
    birth_date TEXT NOT NULL,
    education_level TEXT NOT NULL,
    functional_position TEXT NOT NULL,
    employment_status TEXT NOT NULL,
    hire_date TEXT
);
CREATE TABLE IF NOT EXISTS employees (
    employee_id TEXT PRIMARY KEY,
    name TEXT NOT NULL,
    birth_date TEXT NOT NULL,
    hire_date TEXT NOT NULL,
    employment_status TEXT NOT NULL,
    department TEXT NOT NULL,
    education_level TEXT
);
CREATE TABLE IF NOT EXISTS users (
    username TEXT PRIMARY KEY,
    salt TEXT NOT NULL,
    verifier TEXT NOT NULL,
    iterations INTEGER NOT NULL,
    role TEXT NOT NULL CHECK (role IN ('DEAN', 'HR_STAFF'))
);
CREATE TABLE IF NOT EXISTS load_runs (
    run_id INTEGER PRIMARY KEY AUTOINCREMENT,
    started_at TEXT NOT NULL,
    finished_at TEXT NOT NULL,
    status TEXT NOT NULL,
    report_json TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS lineage (
    run_id INTEGER NOT NULL,
    entity_kind TEXT NOT NULL,
    natural_key TEXT NOT NULL,
    action TEXT NOT NULL,
    PRIMARY KEY (run_id, entity_kind, natural_key)
);
"""

_ENTITY_TABLES = {
    "LECTURER": (
        "lecturers",
        "lecturer_id",
        (
            "lecturer_id",
            "name",
            "birth_date",
            "education_level",
            "functional_position",
            "employment_status",
            "hire_date",
        ),
    ),
    "EMPLOYEE": (
        "employees",
        "employee_id",
        (
            "employee_id",
            "name",
            "birth_date",
            "hire_date",
            "employment_status",
            "department",
            "education_level",
        ),
    ),
}


class WarehouseError(Exception):
    """Base class for storage failures."""


class WarehouseBusyError(WarehouseError):
    """The single-writer gate could not be acquired within the timeout."""


class SchemaVersionError(WarehouseError):
    """The store file was written by an incompatible schema version."""


class UnknownFieldError(WarehouseError):
    """A query filter referenced a field the entity does not declare."""


def _hash_password(password: str, salt: bytes, iterations: int) -> str:
    return hashlib.pbkdf2_hmac("sha256", password.encode(), salt, iterations).hex()


def _record_from_row(kind: str, row: Mapping[str, object]):
    def d(value):
        return date.fromisoformat(value) if value else None

    if kind == "LECTURER":
        return LecturerRecord(
            lecturer_id=row["lecturer_id"],
            name=row["name"],
            birth_date=d(row["birth_date"]),
            education_level=row["education_level"],
            functional_position=row["functional_position"],
            employment_status=row["employment_status"],
            hire_date=d(row["hire_date"]),
        )
    return EmployeeRecord(
        employee_id=row["employee_id"],
        name=row["name"],
        birth_date=d(row["birth_date"]),
        hire_date=d(row["hire_date"]),
        employment_status=row["employment_status"],
        department=row["department"],
        education_level=row["education_level"],
    )


class Warehouse:
    """Handle on one warehouse file. Open the same path twice and you see
    the same data; the schema version is stamped and checked on open."""

    def __init__(self, path: str | Path, write_timeout: float = 5.0, pbkdf2_iterations: int = 60_000):
        self.path = Path(path)
        self.write_timeout = write_timeout
        self.pbkdf2_iterations = pbkdf2_iterations
        self._local = threading.local()
        self._all_conns: list[sqlite3.Connection] = []
        self._conns_guard = threading.Lock()
        self._write_lock = threading.RLock()
        self._tx_depth = 0
        # Held for the duration of an ETL run; acquired non-blocking so a
        # second run is rejected, not queued.
        self.etl_gate = threading.Lock()
        self._init_schema()

    # -- connection plumbing -------------------------------------------------

    def _conn(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            conn = sqlite3.connect(str(self.path), timeout=10.0)
            conn.row_factory = sqlite3.Row
            conn.isolation_level = None  # explicit BEGIN/COMMIT only
            conn.execute("PRAGMA journal_mode=WAL")
            conn.execute("PRAGMA synchronous=NORMAL")
            self._local.conn = conn
            with self._conns_guard:
                self._all_conns.append(conn)
        return conn

    def close(self) -> None:
        with self._conns_guard:
            for conn in self._all_conns:
                try:
                    conn.close()
                except sqlite3.Error:
                    pass
            self._all_conns.clear()
        self._local = threading.local()

    def _init_schema(self) -> None:
        conn = self._conn()
        version = conn.execute("PRAGMA user_version").fetchone()[0]
        if version == 0:
            # executescript() would commit mid-transaction, so run each
            # statement individually inside the write gate.
            with self.write():
                for statement in _SCHEMA.split(";"):
                    if statement.strip():
                        conn.execute(statement)
                conn.execute(f"PRAGMA user_version = {SCHEMA_VERSION}")
                for username, password, role in DEFAULT_USERS:
                    self._seed_user(conn, username, password, role)
        elif version != SCHEMA_VERSION:
            raise SchemaVersionError(
                f"store {self.path} has schema version {version}, expected {SCHEMA_VERSION}"
            )

    @property
    def schema_version(self) -> int:
        return self._conn().execute("PRAGMA user_version").fetchone()[0]

    @contextmanager
    def write(self, timeout: Optional[float] = None):
        """Single-writer transaction. Nested calls join the outer transaction
        through savepoints; the outermost commit publishes the batch atomically."""
        wait = self.write_timeout if timeout is None else timeout
        if not self._write_lock.acquire(timeout=wait):
            raise WarehouseBusyError("another write is in progress")
        conn = self._conn()
        self._tx_depth += 1
        depth = self._tx_depth
        try:
            if depth == 1:
                conn.execute("BEGIN IMMEDIATE")
            else:
                conn.execute(f"SAVEPOINT sp{depth}")
            yield conn
            if depth == 1:
                conn.execute("COMMIT")
            else:
                conn.execute(f"RELEASE sp{depth}")
        except BaseException:
            if depth == 1:
                conn.execute("ROLLBACK")
            else:
                conn.execute(f"ROLLBACK TO sp{depth}")
                conn.execute(f"RELEASE sp{depth}")
            raise
        finally:
            self._tx_depth -= 1
            self._write_lock.release()

    # -- entities ------------------------------------------------------------

    def upsert_entity(self, kind: str, record) -> str:
        """Insert-or-update by natural key; returns INSERTED, UPDATED or
        UNCHANGED (stored fields identical to the incoming record)."""
        table, key_col, columns = _ENTITY_TABLES[kind]
        values = record.as_dict()
        with self.write() as conn:
            row = conn.execute(
                f"SELECT * FROM {table} WHERE {key_col} = ?", (values[key_col],)
            ).fetchone()
            if row is None:
                placeholders = ", ".join("?" for _ in columns)
                conn.execute(
                    f"INSERT INTO {table} ({', '.join(columns)}) VALUES ({placeholders})",
                    tuple(values[c] for c in columns),
                )
                return "INSERTED"
            if all(row[c] == values[c] for c in columns):
                return "UNCHANGED"
            assignments = ", ".join(f"{c} = ?" for c in columns if c != key_col)
            conn.execute(
                f"UPDATE {table} SET {assignments} WHERE {key_col} = ?",
                tuple(values[c] for c in columns if c != key_col) + (values[key_col],),
            )
            return "UPDATED"

    def query_entities(self, kind: str, filters: Optional[Mapping[str, str]] = None) -> list:
        """All records matching every equality filter, ordered by natural key."""
        table, key_col, columns = _ENTITY_TABLES[kind]
        filters = dict(filters or {})
        for field in filters:
            if field not in columns:
                raise UnknownFieldError(f"{kind.lower()} has no field {field!r}")
        where = " AND ".join(f"{f} = ?" for f in filters) or "1=1"
        rows = self._conn().execute(
            f"SELECT * FROM {table} WHERE {where} ORDER BY {key_col}",
            tuple(filters.values()),
        ).fetchall()
        return [_record_from_row(kind, row) for row in rows]

    def get_entity(self, kind: str, natural_key: str):
        table, key_col, _ = _ENTITY_TABLES[kind]
        row = self._conn().execute(
            f"SELECT * FROM {table} WHERE {key_col} = ?", (natural_key,)
        ).fetchone()
        return _record_from_row(kind, row) if row else None

    def count_entities(self, kind: str) -> int:
        table, _, _ = _ENTITY_TABLES[kind]
        return self._conn().execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0]

    # -- dimensions ----------------------------------------------------------

    def upsert_dimension(self, dim: Dimension, entry: DimensionEntry) -> str:
        """Same upsert semantics as entities; first insertion order fixes the
        catalog (and therefore chart axis) position of each code."""
        with self.write() as conn:
            row = conn.execute(
                "SELECT label, applicability FROM dimensions WHERE dim = ? AND code = ?",
                (dim.value, entry.code),
            ).fetchone()
            if row is None:
                position = conn.execute(
                    "SELECT COALESCE(MAX(position), -1) + 1 FROM dimensions WHERE dim = ?",
                    (dim.value,),
                ).fetchone()[0]
                conn.execute(
                    "INSERT INTO dimensions (dim, code, label, applicability, position)"
                    " VALUES (?, ?, ?, ?, ?)",
                    (dim.value, entry.code, entry.label, entry.applicability.value, position),
                )
                return "INSERTED"
            if row["label"] == entry.label and row["applicability"] == entry.applicability.value:
                return "UNCHANGED"
            conn.execute(
                "UPDATE dimensions SET label = ?, applicability = ? WHERE dim = ? AND code = ?",
                (entry.label, entry.applicability.value, dim.value, entry.code),
            )
            return "UPDATED"

    def catalog(self) -> DimensionCatalog:
        rows = self._conn().execute(
            "SELECT dim, code, label, applicability FROM dimensions ORDER BY dim, position"
        ).fetchall()
        grouped: dict[str, list[DimensionEntry]] = {d.value: [] for d in Dimension}
        for row in rows:
            grouped[row["dim"]].append(
                DimensionEntry(row["code"], row["label"], Applicability(row["applicability"]))
            )
        return DimensionCatalog(
            statuses=tuple(grouped[Dimension.STATUS.value]),
            departments=tuple(grouped[Dimension.DEPARTMENT.value]),
            positions=tuple(grouped[Dimension.POSITION.value]),
            education_levels=tuple(grouped[Dimension.EDUCATION.value]),
        )

    # -- load-run metadata ---------------------------------------------------

    def record_load_run(
        self, report: dict, lineage: Iterable[tuple[str, str, str]] = ()
    ) -> int:
        """Persist a run report plus its lineage rows; returns the new run id
        (strictly greater than every earlier one, across restarts)."""
        with self.write() as conn:
            cur = conn.execute(
                "INSERT INTO load_runs (started_at, finished_at, status, report_json)"
                " VALUES (?, ?, ?, '{}')",
                (report["started_at"], report["finished_at"], report["status"]),
            )
            run_id = cur.lastrowid
            report["run_id"] = run_id
            conn.execute(
                "UPDATE load_runs SET report_json = ? WHERE run_id = ?",
                (json.dumps(report, ensure_ascii=False), run_id),
            )
            conn.executemany(
                "INSERT INTO lineage (run_id, entity_kind, natural_key, action)"
                " VALUES (?, ?, ?, ?)",
                [(run_id, kind, key, action) for kind, key, action in lineage],
            )
            return run_id

    def get_load_history(self, limit: int = 20) -> list[dict]:
        rows = self._conn().execute(
            "SELECT report_json FROM load_runs ORDER BY run_id DESC LIMIT ?", (max(limit, 1),)
        ).fetchall()
        return [json.loads(row["report_json"]) for row in rows]

    def get_lineage(self, run_id: int) -> list[dict]:
        rows = self._conn().execute(
            "SELECT entity_kind, natural_key, action FROM lineage"
            " WHERE run_id = ? ORDER BY entity_kind, natural_key",
            (run_id,),
        ).fetchall()
        return [dict(row) for row in rows]

    # -- users ---------------------------------------------------------------

    def _seed_user(self, conn: sqlite3.Connection, username: str, password: str, role: str) -> None:
        salt = secrets.token_bytes(16)
        conn.execute(
            "INSERT OR REPLACE INTO users (username, salt, verifier, iterations, role)"
            " VALUES (?, ?, ?, ?, ?)",
            (
                username,
                salt.hex(),
                _hash_password(password, salt, self.pbkdf2_iterations),
                self.pbkdf2_iterations,
                role,
            ),
        )

    def set_user(self, username: str, password: str, role: str) -> None:
        if role not in ROLES:
            raise WarehouseError(f"unknown role {role!r}")
        with self.write() as conn:
            self._seed_user(conn, username, password, role)

    def verify_user(self, username: str, password: str) -> Optional[str]:
        """Return the role on success, None on failure. Unknown users burn the
        same hash work as wrong passwords so the two failures look alike."""
        row = self._conn().execute(
            "SELECT salt, verifier, iterations, role FROM users WHERE username = ?",
            (username,),
        ).fetchone()
        if row is None:
            _hash_password(password, b"\x00" * 16, self.pbkdf2_iterations)
            return None
        computed = _hash_password(password, bytes.fromhex(row["salt"]), row["iterations"])
        if hmac.compare_digest(computed, row["verifier"]):
            return row["role"]
        return None

    # -- snapshots -----------------------------------------------------------

    def snapshot_bytes(self) -> bytes:
        """Canonical dump of all dimension and entity rows. Two warehouses
        with identical contents produce identical bytes."""
        payload = {
            "dimensions": [
                dict(row)
                for row in self._conn().execute(
                    "SELECT dim, code, label, applicability, position FROM dimensions"
                    " ORDER BY dim, code"
                )
            ],
        }
        for kind, (table, key_col, _) in _ENTITY_TABLES.items():
            payload[table] = [
                dict(row)
                for row in self._conn().execute(f"SELECT * FROM {table} ORDER BY {key_col}")
            ]
        return json.dumps(payload, sort_keys=True, ensure_ascii=False).encode()

    def table_counts(self) -> dict[str, int]:
        counts = {}
        for table in ("dimensions", "lecturers", "employees", "users", "load_runs"):
            counts[table] = self._conn().execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0]
        return counts
