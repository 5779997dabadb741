"""Rollups: labeled counts per dimension, drill-down, and the dashboard trio.

Everything is a full scan over the warehouse; at a few hundred personnel
records, materialized aggregates would be complexity without payoff. Zero
buckets are always emitted so chart axes stay stable and an honest
"no S3 lecturers yet" renders as a zero, not a missing bar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date

from .model import Dimension, bucket_labels, bucket_value, compute_age, compute_tenure
from .store import Warehouse


class InvalidReportKeyError(Exception):
    """The entity/dimension pair is not one of the eight valid reports."""


class UnknownBucketError(Exception):
    def __init__(self, label: str, valid: tuple[str, ...]):
        super().__init__(f"unknown bucket {label!r}; valid buckets: {', '.join(valid)}")
        self.label = label
        self.valid = valid


@dataclass(frozen=True)
class ReportKey:
    entity: str  # LECTURER or EMPLOYEE
    dimension: str  # AGE, EDUCATION, POSITION, STATUS, TENURE or DEPARTMENT


# The full report catalog, in presentation order: the four lecturer
# recaps, then the four employee recaps.
REPORT_CATALOG: tuple[tuple[ReportKey, str], ...] = (
    (ReportKey("LECTURER", "AGE"), "Kategori Usia Dosen"),
    (ReportKey("LECTURER", "EDUCATION"), "Jenjang Pendidikan Dosen"),
    (ReportKey("LECTURER", "POSITION"), "Jabatan Fungsional Akademik Dosen"),
    (ReportKey("LECTURER", "STATUS"), "Status Dosen"),
    (ReportKey("EMPLOYEE", "STATUS"), "Status Karyawan"),
    (ReportKey("EMPLOYEE", "TENURE"), "Masa Kerja Karyawan"),
    (ReportKey("EMPLOYEE", "AGE"), "Kategori Usia Karyawan"),
    (ReportKey("EMPLOYEE", "DEPARTMENT"), "Data Bagian"),
)

_TITLES = dict(REPORT_CATALOG)
VALID_KEYS = tuple(key for key, _ in REPORT_CATALOG)

# Dashboard composition, fixed: lecturer age, lecturer education,
# employee status, in that order.
DASHBOARD_KEYS = (
    ReportKey("LECTURER", "AGE"),
    ReportKey("LECTURER", "EDUCATION"),
    ReportKey("EMPLOYEE", "STATUS"),
)

_CATEGORICAL_FIELD = {
    ("LECTURER", "EDUCATION"): "education_level",
    ("LECTURER", "POSITION"): "functional_position",
    ("LECTURER", "STATUS"): "employment_status",
    ("EMPLOYEE", "STATUS"): "employment_status",
    ("EMPLOYEE", "DEPARTMENT"): "department",
}

_DIMENSION_OF = {
    "EDUCATION": "EDUCATION",
    "POSITION": "POSITION",
    "STATUS": "STATUS",
    "DEPARTMENT": "DEPARTMENT",
}


@dataclass(frozen=True)
class Distribution:
    key: ReportKey
    title: str
    reference_date: date
    buckets: tuple[tuple[str, int], ...]
    total: int

    def as_dict(self) -> dict:
        return {
            "entity": self.key.entity.lower(),
            "dimension": self.key.dimension.lower(),
            "title": self.title,
            "reference_date": self.reference_date.isoformat(),
            "buckets": [{"label": label, "count": count} for label, count in self.buckets],
            "total": self.total,
        }


@dataclass(frozen=True)
class DrillDownResult:
    key: ReportKey
    title: str
    reference_date: date
    bucket: str
    records: tuple
    count: int

    def as_dict(self) -> dict:
        return {
            "entity": self.key.entity.lower(),
            "dimension": self.key.dimension.lower(),
            "title": self.title,
            "reference_date": self.reference_date.isoformat(),
            "bucket": self.bucket,
            "count": self.count,
            "records": [r.as_dict() for r in self.records],
        }


def canonical_json(payload: dict | list) -> str:
    """The one serialization used for report bodies everywhere (API and CLI
    alike), so equal payloads are equal bytes."""
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def resolve_key(entity: str, dimension: str) -> ReportKey:
    """Case-insensitive lookup of a report key; rejects the combinations
    that make no sense (lecturer tenure, employee position, ...)."""
    key = ReportKey(entity.strip().upper(), dimension.strip().upper())
    if key not in _TITLES:
        raise InvalidReportKeyError(
            f"no report for {entity.lower()} x {dimension.lower()}; valid: "
            + ", ".join(f"{k.entity.lower()}/{k.dimension.lower()}" for k in VALID_KEYS)
        )
    return key


def report_catalog() -> list[dict]:
    return [
        {"entity": key.entity.lower(), "dimension": key.dimension.lower(), "title": title}
        for key, title in REPORT_CATALOG
    ]


def _bucket_of(record, key: ReportKey, reference_date: date) -> str:
    if key.dimension == "AGE":
        return bucket_value(compute_age(record.birth_date, reference_date), "AGE")
    if key.dimension == "TENURE":
        return bucket_value(compute_tenure(record.hire_date, reference_date), "TENURE")
    return getattr(record, _CATEGORICAL_FIELD[(key.entity, key.dimension)])


def _axis_labels(warehouse: Warehouse, key: ReportKey) -> tuple[str, ...]:
    if key.dimension in ("AGE", "TENURE"):
        return bucket_labels(key.dimension)
    catalog = warehouse.catalog()
    dim = Dimension(_DIMENSION_OF[key.dimension])
    if key.entity == "LECTURER":
        entries = [e for e in catalog.entries(dim) if e.applicability.covers_lecturer()]
    else:
        entries = [e for e in catalog.entries(dim) if e.applicability.covers_employee()]
    return tuple(e.code for e in entries)


def distribution(warehouse: Warehouse, key: ReportKey, reference_date: date) -> Distribution:
    """One chart's data: every axis bucket with its record count."""
    if key not in _TITLES:
        raise InvalidReportKeyError(f"invalid report key {key}")
    records = warehouse.query_entities(key.entity)
    labels = list(_axis_labels(warehouse, key))
    counts = {label: 0 for label in labels}
    for record in records:
        bucket = _bucket_of(record, key, reference_date)
        if bucket not in counts:
            # A code no longer in the catalog still counts: conservation
            # beats a tidy axis.
            labels.append(bucket)
            counts[bucket] = 0
        counts[bucket] += 1
    total = len(records)
    assert sum(counts.values()) == total
    return Distribution(
        key=key,
        title=_TITLES[key],
        reference_date=reference_date,
        buckets=tuple((label, counts[label]) for label in labels),
        total=total,
    )


def drill_down(
    warehouse: Warehouse, key: ReportKey, bucket: str, reference_date: date
) -> DrillDownResult:
    """The records behind one chart segment, ordered by natural key."""
    if key not in _TITLES:
        raise InvalidReportKeyError(f"invalid report key {key}")
    labels = _axis_labels(warehouse, key)
    records = warehouse.query_entities(key.entity)
    present = {_bucket_of(r, key, reference_date) for r in records}
    if bucket not in labels and bucket not in present:
        raise UnknownBucketError(bucket, labels)
    matching = tuple(
        r for r in records if _bucket_of(r, key, reference_date) == bucket
    )
    return DrillDownResult(
        key=key,
        title=_TITLES[key],
        reference_date=reference_date,
        bucket=bucket,
        records=matching,
        count=len(matching),
    )


def dashboard_summary(warehouse: Warehouse, reference_date: date) -> list[Distribution]:
    """The three fixed dashboard charts, in their fixed order."""
    return [distribution(warehouse, key, reference_date) for key in DASHBOARD_KEYS]
