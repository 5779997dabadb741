"""Shared fixtures: seed data, warehouses, and independent counting oracles."""

from __future__ import annotations

import csv
import json
import random
from datetime import date
from pathlib import Path

import pytest

from hreis.etl import run_etl
from hreis.model import DimensionCatalog, DimensionEntry, Applicability, EmployeeRecord, LecturerRecord
from hreis.seed import generate_seed_data
from hreis.store import Warehouse

SEED = 42
REF = date(2015, 4, 1)


@pytest.fixture(scope="session")
def seed_dir(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("seed") / "source"
    generate_seed_data(path, SEED)
    return path


@pytest.fixture(scope="session")
def manifest(seed_dir) -> dict:
    return json.loads((seed_dir / "seed_manifest.json").read_text())


@pytest.fixture(scope="session")
def seeded_warehouse(tmp_path_factory, seed_dir) -> Warehouse:
    """Seed data loaded once for read-only tests. Do not mutate."""
    wh = Warehouse(tmp_path_factory.mktemp("wh") / "warehouse.db")
    run_etl(seed_dir, wh)
    return wh


@pytest.fixture()
def warehouse(tmp_path) -> Warehouse:
    return Warehouse(tmp_path / "warehouse.db")


@pytest.fixture()
def loaded_warehouse(tmp_path, seed_dir) -> Warehouse:
    """A private seed-loaded warehouse, safe to mutate."""
    wh = Warehouse(tmp_path / "warehouse.db")
    run_etl(seed_dir, wh)
    return wh


@pytest.fixture(scope="session")
def catalog() -> DimensionCatalog:
    return small_catalog()


def small_catalog() -> DimensionCatalog:
    return DimensionCatalog(
        statuses=(
            DimensionEntry("PNS", "Pegawai Negeri Sipil", Applicability.BOTH),
            DimensionEntry("NONPNS", "Belum PNS", Applicability.LECTURER),
            DimensionEntry("TETAP", "Pegawai Tetap", Applicability.EMPLOYEE),
            DimensionEntry("KONTRAK", "Pegawai Kontrak", Applicability.EMPLOYEE),
        ),
        departments=(
            DimensionEntry("TU", "Tata Usaha", Applicability.EMPLOYEE),
            DimensionEntry("KEU", "Keuangan", Applicability.EMPLOYEE),
        ),
        positions=(
            DimensionEntry("AA", "Asisten Ahli", Applicability.LECTURER),
            DimensionEntry("LEKTOR", "Lektor", Applicability.LECTURER),
        ),
        education_levels=(
            DimensionEntry("S1", "Sarjana", Applicability.BOTH),
            DimensionEntry("S2", "Magister", Applicability.BOTH),
            DimensionEntry("S3", "Doktor", Applicability.BOTH),
        ),
    )


def quarantined_rows_of(manifest: dict, file_name: str) -> set[int]:
    return {
        d["quarantined_row_number"] for d in manifest["defects"] if d["file"] == file_name
    }


def scan_counts(seed_dir: Path, manifest: dict, file_name: str, field: str) -> dict[str, int]:
    """Brute-force oracle: count a column over the seed CSV directly, keeping
    exactly the rows the generator's manifest says will survive cleaning."""
    dropped = quarantined_rows_of(manifest, file_name)
    counts: dict[str, int] = {}
    with open(seed_dir / file_name, newline="", encoding="utf-8") as fh:
        for row_number, row in enumerate(csv.DictReader(fh), start=2):
            if row_number in dropped:
                continue
            value = row[field].strip().upper()
            counts[value] = counts.get(value, 0) + 1
    return counts


def scan_rows(seed_dir: Path, manifest: dict, file_name: str) -> list[dict]:
    """All surviving raw rows of one seed CSV (the non-quarantined ones)."""
    dropped = quarantined_rows_of(manifest, file_name)
    rows = []
    with open(seed_dir / file_name, newline="", encoding="utf-8") as fh:
        for row_number, row in enumerate(csv.DictReader(fh), start=2):
            if row_number not in dropped:
                rows.append(row)
    return rows


def random_lecturer(rng: random.Random, i: int) -> LecturerRecord:
    birth = date(1950 + rng.randrange(45), 1 + rng.randrange(12), 1 + rng.randrange(28))
    return LecturerRecord(
        lecturer_id=f"RL{i:04d}",
        name=f"Lecturer {i}",
        birth_date=birth,
        education_level=rng.choice(("S1", "S2", "S3")),
        functional_position=rng.choice(("AA", "LEKTOR", "LK", "GB")),
        employment_status=rng.choice(("PNS", "NONPNS")),
        hire_date=None if rng.random() < 0.2 else date(birth.year + 22, 6, 1),
    )


def random_employee(rng: random.Random, i: int) -> EmployeeRecord:
    birth = date(1955 + rng.randrange(40), 1 + rng.randrange(12), 1 + rng.randrange(28))
    return EmployeeRecord(
        employee_id=f"RK{i:04d}",
        name=f"Employee {i}",
        birth_date=birth,
        hire_date=date(min(birth.year + 18 + rng.randrange(20), REF.year - 1), 3, 15),
        employment_status=rng.choice(("PNS", "TETAP", "KONTRAK", "HONORER")),
        department=rng.choice(("TU", "KEU", "AKAD", "PERPUS", "LAB")),
        education_level=rng.choice(("S1", "S2", None)),
    )


def populate_random(wh: Warehouse, rng: random.Random, lecturers: int, employees: int) -> None:
    """Fill a fresh warehouse with the full seed catalog plus random records."""
    from hreis.model import Dimension
    from hreis.seed import STATUSES, DEPARTMENTS, POSITIONS, EDUCATION_LEVELS

    dims = {
        Dimension.STATUS: STATUSES,
        Dimension.DEPARTMENT: DEPARTMENTS,
        Dimension.POSITION: POSITIONS,
        Dimension.EDUCATION: EDUCATION_LEVELS,
    }
    with wh.write():
        for dim, entries in dims.items():
            for code, label, applicability in entries:
                wh.upsert_dimension(dim, DimensionEntry(code, label, Applicability(applicability)))
        for i in range(lecturers):
            wh.upsert_entity("LECTURER", random_lecturer(rng, i))
        for i in range(employees):
            wh.upsert_entity("EMPLOYEE", random_employee(rng, i))
