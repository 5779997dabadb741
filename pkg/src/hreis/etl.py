"""Batch ETL: CSV sources -> cleaned records -> warehouse, with quarantine.

Sources are header-carrying UTF-8 CSV files, the portable form of the
faculty's spreadsheet exports. Every data row ends up either in the
warehouse or in the run report's quarantine; nothing is silently dropped.
A run is one atomic write: if storage fails mid-way the warehouse is left
exactly as before the run, and the failure itself is recorded as a FAILED
run in the metadata tables.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Optional

from .model import (
    Applicability,
    Dimension,
    DimensionCatalog,
    DimensionEntry,
    Reason,
    ValidationViolation,
    validate_employee,
    validate_lecturer,
)
from .store import Warehouse, WarehouseError


class EtlError(Exception):
    pass


class HeaderError(EtlError):
    """The file header is missing or lacks a required column (whole-file)."""


class EtlSourceError(EtlError):
    """The source directory cannot be read; nothing was loaded."""


class EtlBusyError(EtlError):
    """Another ETL run is in progress on this warehouse."""


@dataclass(frozen=True)
class ColumnSpec:
    """One expected column; the column name doubles as the record field name."""

    name: str
    required: bool = True


@dataclass(frozen=True)
class SourceSchema:
    schema_id: str
    file_name: str
    columns: tuple[ColumnSpec, ...]
    kind: str  # "dimension" or "entity"

    def header_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)


_DIM_COLUMNS = (ColumnSpec("code"), ColumnSpec("label"), ColumnSpec("applicability"))

# Dimension files first: foreign-key cleaning of the entity files needs the
# complete catalog already in place.
SCHEMA_REGISTRY: tuple[SourceSchema, ...] = (
    SourceSchema("STATUS", "statuses.csv", _DIM_COLUMNS, "dimension"),
    SourceSchema("DEPARTMENT", "departments.csv", _DIM_COLUMNS, "dimension"),
    SourceSchema("POSITION", "positions.csv", _DIM_COLUMNS, "dimension"),
    SourceSchema("EDUCATION", "education_levels.csv", _DIM_COLUMNS, "dimension"),
    SourceSchema(
        "LECTURER",
        "lecturers.csv",
        (
            ColumnSpec("lecturer_id"),
            ColumnSpec("name"),
            ColumnSpec("birth_date"),
            ColumnSpec("education_level"),
            ColumnSpec("functional_position"),
            ColumnSpec("employment_status"),
            ColumnSpec("hire_date", required=False),
        ),
        "entity",
    ),
    SourceSchema(
        "EMPLOYEE",
        "employees.csv",
        (
            ColumnSpec("employee_id"),
            ColumnSpec("name"),
            ColumnSpec("birth_date"),
            ColumnSpec("hire_date"),
            ColumnSpec("employment_status"),
            ColumnSpec("department"),
            ColumnSpec("education_level", required=False),
        ),
        "entity",
    ),
)

_KEY_FIELD = {"LECTURER": "lecturer_id", "EMPLOYEE": "employee_id"}


def schema_for(schema_id: str) -> SourceSchema:
    for schema in SCHEMA_REGISTRY:
        if schema.schema_id == schema_id:
            return schema
    raise KeyError(schema_id)


@dataclass(frozen=True)
class RawRow:
    source_file: str
    row_number: int  # 1-based position in the file; row 1 is the header
    values: dict


@dataclass(frozen=True)
class ParseError:
    source_file: str
    row_number: int
    message: str


@dataclass(frozen=True)
class QuarantinedRow:
    row: RawRow
    reason: str  # summary: violation reasons, DUPLICATE_KEY, or PARSE_ERROR
    detail: str
    violations: tuple[ValidationViolation, ...] = ()

    def as_dict(self) -> dict:
        return {
            "row_number": self.row.row_number,
            "reason": self.reason,
            "detail": self.detail,
            "violations": [
                {"field": v.field, "reason": v.reason.value, "message": v.message}
                for v in self.violations
            ],
            "values": dict(self.row.values),
        }


@dataclass
class FileLoadStats:
    file: str
    checksum: str
    parsed: int = 0
    inserted: int = 0
    updated: int = 0
    unchanged: int = 0
    quarantined_rows: tuple[QuarantinedRow, ...] = ()
    error: Optional[str] = None

    @property
    def quarantined(self) -> int:
        return len(self.quarantined_rows)

    def conserves(self) -> bool:
        return self.parsed == self.inserted + self.updated + self.unchanged + self.quarantined

    def as_dict(self) -> dict:
        return {
            "file": self.file,
            "checksum": self.checksum,
            "parsed": self.parsed,
            "inserted": self.inserted,
            "updated": self.updated,
            "unchanged": self.unchanged,
            "quarantined": self.quarantined,
            "error": self.error,
            "quarantined_rows": [q.as_dict() for q in self.quarantined_rows],
        }


@dataclass
class LoadRunReport:
    started_at: str
    finished_at: str
    status: str  # CLEAN, PARTIAL or FAILED
    files: list[FileLoadStats] = field(default_factory=list)
    error: Optional[str] = None
    run_id: Optional[int] = None

    def totals(self) -> dict:
        keys = ("parsed", "inserted", "updated", "unchanged", "quarantined")
        return {k: sum(getattr(f, k) for f in self.files) for k in keys}

    def as_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "status": self.status,
            "error": self.error,
            "files": [f.as_dict() for f in self.files],
            "totals": self.totals(),
        }


def parse_source(data: bytes, schema: SourceSchema) -> tuple[list[RawRow], list[ParseError]]:
    """Split a CSV file into raw rows. Bad data rows become parse errors,
    never exceptions; only a bad header fails the whole file."""
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise HeaderError(f"{schema.file_name}: not valid UTF-8 ({exc})") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = [cell.strip() for cell in next(reader)]
    except StopIteration:
        raise HeaderError(f"{schema.file_name}: file is empty, header row expected") from None

    known = set(schema.header_names())
    missing = [
        c.name for c in schema.columns if c.required and c.name not in header
    ]
    if missing:
        raise HeaderError(f"{schema.file_name}: header lacks required column(s) {', '.join(missing)}")

    rows: list[RawRow] = []
    errors: list[ParseError] = []
    for index, cells in enumerate(reader, start=2):
        if not cells:
            continue  # blank line
        if len(cells) != len(header):
            errors.append(
                ParseError(
                    schema.file_name,
                    index,
                    f"expected {len(header)} columns, found {len(cells)}",
                )
            )
            continue
        values = {h: cells[i] for i, h in enumerate(header) if h in known}
        rows.append(RawRow(schema.file_name, index, values))
    return rows, errors


def _summarize(violations: list[ValidationViolation]) -> str:
    reasons = sorted({v.reason.value for v in violations})
    return ",".join(reasons)


def _validate_dimension_row(values: dict) -> DimensionEntry | list[ValidationViolation]:
    violations: list[ValidationViolation] = []
    code = (values.get("code") or "").strip().upper()
    label = (values.get("label") or "").strip()
    applicability_raw = (values.get("applicability") or "").strip().lower()
    if not code:
        violations.append(ValidationViolation("code", Reason.MISSING, "code is required"))
    if not label:
        violations.append(ValidationViolation("label", Reason.MISSING, "label is required"))
    try:
        applicability = Applicability(applicability_raw)
    except ValueError:
        applicability = None
        violations.append(
            ValidationViolation(
                "applicability",
                Reason.MALFORMED,
                f"applicability must be lecturer, employee or both, got {applicability_raw!r}",
            )
        )
    if violations:
        return violations
    return DimensionEntry(code, label, applicability)


def transform_rows(
    rows: list[RawRow],
    schema: SourceSchema,
    catalog: DimensionCatalog,
    today: Optional[date] = None,
) -> tuple[list, list[QuarantinedRow]]:
    """Clean raw rows into records; everything that fails lands in quarantine.

    Within the batch, duplicate natural keys keep the last occurrence
    (spreadsheet corrections are appended at the bottom) and quarantine the
    earlier rows. Always: len(rows) == len(valid) + len(quarantined).
    """
    validated: list[tuple[RawRow, object]] = []
    quarantined: list[QuarantinedRow] = []

    for row in rows:
        if schema.kind == "dimension":
            result = _validate_dimension_row(row.values)
        elif schema.schema_id == "LECTURER":
            result = validate_lecturer(row.values, catalog, today)
        else:
            result = validate_employee(row.values, catalog, today)
        if isinstance(result, list):
            quarantined.append(
                QuarantinedRow(
                    row,
                    reason=_summarize(result),
                    detail="; ".join(v.message for v in result),
                    violations=tuple(result),
                )
            )
        else:
            validated.append((row, result))

    # Last occurrence of each natural key wins; earlier ones are quarantined.
    def key_of(record) -> str:
        if schema.kind == "dimension":
            return record.code
        return record.natural_key()

    last_index: dict[str, int] = {}
    for i, (_, record) in enumerate(validated):
        last_index[key_of(record)] = i

    valid: list = []
    for i, (row, record) in enumerate(validated):
        key = key_of(record)
        if last_index[key] != i:
            winner_row = validated[last_index[key]][0]
            quarantined.append(
                QuarantinedRow(
                    row,
                    reason="DUPLICATE_KEY",
                    detail=(
                        f"key {key!r} appears again at row {winner_row.row_number};"
                        " the later row wins"
                    ),
                )
            )
        else:
            valid.append(record)
    return valid, quarantined


def load_batch(warehouse: Warehouse, kind: str, records: list) -> tuple[dict, list]:
    """Upsert validated records as one atomic batch.

    Returns (counts, lineage): counts maps INSERTED/UPDATED/UNCHANGED to
    totals, lineage is one (kind, key, action) triple per record.
    """
    counts = {"INSERTED": 0, "UPDATED": 0, "UNCHANGED": 0}
    lineage: list[tuple[str, str, str]] = []
    with warehouse.write():
        for record in records:
            action = warehouse.upsert_entity(kind, record)
            counts[action] += 1
            lineage.append((kind, record.natural_key(), action))
    return counts, lineage


def load_dimension_batch(
    warehouse: Warehouse, dim: Dimension, entries: list[DimensionEntry]
) -> tuple[dict, list]:
    counts = {"INSERTED": 0, "UPDATED": 0, "UNCHANGED": 0}
    lineage: list[tuple[str, str, str]] = []
    with warehouse.write():
        for entry in entries:
            action = warehouse.upsert_dimension(dim, entry)
            counts[action] += 1
            lineage.append((dim.value, entry.code, action))
    return counts, lineage


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def run_etl(source_dir: str | Path, warehouse: Warehouse, today: Optional[date] = None) -> LoadRunReport:
    """Run the whole pipeline over a source directory and record the outcome.

    Files load in registry order (dimensions, then entities); absent files
    are skipped. A header error skips that file and marks the run PARTIAL;
    so does any quarantined row. The report is persisted either way.
    """
    src = Path(source_dir)
    if not src.is_dir():
        raise EtlSourceError(f"source directory {src} does not exist or is not a directory")

    if not warehouse.etl_gate.acquire(blocking=False):
        raise EtlBusyError("an ETL run is already in progress on this warehouse")
    try:
        return _run_locked(src, warehouse, today)
    finally:
        warehouse.etl_gate.release()


def _run_locked(src: Path, warehouse: Warehouse, today: Optional[date]) -> LoadRunReport:
    started = _now_iso()
    report = LoadRunReport(started_at=started, finished_at="", status="CLEAN")
    lineage: list[tuple[str, str, str]] = []
    try:
        with warehouse.write():
            for schema in SCHEMA_REGISTRY:
                path = src / schema.file_name
                if not path.exists():
                    continue
                data = path.read_bytes()
                stats = FileLoadStats(
                    file=schema.file_name,
                    checksum="sha256:" + hashlib.sha256(data).hexdigest(),
                )
                report.files.append(stats)
                try:
                    rows, parse_errors = parse_source(data, schema)
                except HeaderError as exc:
                    stats.error = str(exc)
                    report.status = "PARTIAL"
                    continue

                stats.parsed = len(rows) + len(parse_errors)
                # Same-thread connection sees the dimensions loaded earlier
                # in this very transaction.
                catalog = warehouse.catalog()
                try:
                    valid, quarantined = transform_rows(rows, schema, catalog, today)
                except ValueError as exc:  # catalog invariant broken by this file
                    stats.error = str(exc)
                    stats.parsed = 0
                    report.status = "PARTIAL"
                    continue
                quarantined.extend(
                    QuarantinedRow(
                        RawRow(err.source_file, err.row_number, {}),
                        reason="PARSE_ERROR",
                        detail=err.message,
                    )
                    for err in parse_errors
                )
                if schema.kind == "dimension":
                    try:
                        merged = _merged_entries(warehouse, Dimension(schema.schema_id), valid)
                        DimensionCatalog(**{_CATALOG_FIELD[schema.schema_id]: merged})
                    except ValueError as exc:
                        stats.error = str(exc)
                        stats.parsed = 0
                        stats.quarantined_rows = ()
                        report.status = "PARTIAL"
                        continue
                    counts, file_lineage = load_dimension_batch(
                        warehouse, Dimension(schema.schema_id), valid
                    )
                else:
                    counts, file_lineage = load_batch(warehouse, schema.schema_id, valid)
                stats.inserted = counts["INSERTED"]
                stats.updated = counts["UPDATED"]
                stats.unchanged = counts["UNCHANGED"]
                stats.quarantined_rows = tuple(
                    sorted(quarantined, key=lambda q: q.row.row_number)
                )
                lineage.extend(file_lineage)
                if stats.quarantined:
                    report.status = "PARTIAL"
                if not stats.conserves():
                    raise EtlError(
                        f"{schema.file_name}: conservation violated:"
                        f" parsed {stats.parsed} != {stats.inserted}+{stats.updated}"
                        f"+{stats.unchanged}+{stats.quarantined}"
                    )
    except (WarehouseError, OSError, EtlError) as exc:
        report.status = "FAILED"
        report.error = str(exc)
        lineage = []

    report.finished_at = _now_iso()
    report_dict = report.as_dict()
    report.run_id = warehouse.record_load_run(report_dict, lineage)
    return report


_CATALOG_FIELD = {
    "STATUS": "statuses",
    "DEPARTMENT": "departments",
    "POSITION": "positions",
    "EDUCATION": "education_levels",
}


def _merged_entries(
    warehouse: Warehouse, dim: Dimension, incoming: list[DimensionEntry]
) -> tuple[DimensionEntry, ...]:
    """What the dimension will contain after the batch; used to pre-check
    catalog invariants (e.g. education must keep S1/S2/S3) before loading."""
    existing = {e.code: e for e in warehouse.catalog().entries(dim)}
    for entry in incoming:
        existing[entry.code] = entry
    return tuple(existing.values())
