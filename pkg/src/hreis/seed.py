"""Synthetic source-file generator.

Stands in for the faculty's real HR spreadsheets, which are private. Output
is fully determined by the RNG seed (rerunning with the same seed gives
byte-identical files), and a fixed set of deliberately dirty rows is
appended to each entity file so quarantine handling can be asserted
exactly. Every injected defect is listed in ``seed_manifest.json``.
"""

from __future__ import annotations

import csv
import json
import random
from datetime import date
from pathlib import Path

MANIFEST_NAME = "seed_manifest.json"

DEFAULT_LECTURERS = 120
DEFAULT_EMPLOYEES = 80

# Fixed reference data; codes are what the entity rows point at.
STATUSES = (
    ("PNS", "Pegawai Negeri Sipil", "both"),
    ("NONPNS", "Belum PNS", "lecturer"),
    ("TETAP", "Pegawai Tetap", "employee"),
    ("KONTRAK", "Pegawai Kontrak", "employee"),
    ("HONORER", "Pegawai Honorer", "employee"),
)
DEPARTMENTS = (
    ("TU", "Tata Usaha", "employee"),
    ("KEU", "Keuangan", "employee"),
    ("AKAD", "Administrasi Akademik", "employee"),
    ("PERPUS", "Perpustakaan", "employee"),
    ("LAB", "Laboratorium", "employee"),
)
POSITIONS = (
    ("AA", "Asisten Ahli", "lecturer"),
    ("LEKTOR", "Lektor", "lecturer"),
    ("LK", "Lektor Kepala", "lecturer"),
    ("GB", "Guru Besar", "lecturer"),
)
EDUCATION_LEVELS = (
    ("S1", "Sarjana", "both"),
    ("S2", "Magister", "both"),
    ("S3", "Doktor", "both"),
)

_FIRST_NAMES = (
    "Ahmad", "Budi", "Citra", "Dewi", "Eko", "Fitri", "Gita", "Hadi",
    "Indra", "Joko", "Kartika", "Lestari", "Maya", "Nanda", "Putri",
    "Ratna", "Rudi", "Sari", "Siti", "Tono", "Umar", "Vina", "Wawan",
    "Yani", "Zaki", "Agus", "Bambang", "Dian", "Rina", "Surya",
)
_LAST_NAMES = (
    "Santoso", "Wijaya", "Saputra", "Hidayat", "Kusuma", "Pratama",
    "Utami", "Ramadhan", "Setiawan", "Hartono", "Nugroho", "Susanti",
    "Firmansyah", "Wulandari", "Halim", "Gunawan", "Maulana", "Purnomo",
    "Anggraini", "Yulianto",
)


def _random_date(rng: random.Random, lo: date, hi: date) -> date:
    return date.fromordinal(rng.randrange(lo.toordinal(), hi.toordinal() + 1))


def _name(rng: random.Random) -> str:
    return f"{rng.choice(_FIRST_NAMES)} {rng.choice(_LAST_NAMES)}"


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def generate_seed_data(
    out_dir: str | Path,
    rng_seed: int = 42,
    lecturers: int = DEFAULT_LECTURERS,
    employees: int = DEFAULT_EMPLOYEES,
) -> dict:
    """Write the six source CSVs plus the defect manifest; returns the manifest.

    Each entity file carries its clean rows first, then four dirty rows:
    a malformed date, an unknown dimension code, a row violating a field
    rule, and a valid "correction" row re-using an earlier natural key
    (which quarantines the earlier occurrence as DUPLICATE_KEY).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(rng_seed)

    dim_files = {
        "statuses.csv": STATUSES,
        "departments.csv": DEPARTMENTS,
        "positions.csv": POSITIONS,
        "education_levels.csv": EDUCATION_LEVELS,
    }
    for file_name, entries in dim_files.items():
        _write_csv(
            out / file_name,
            ["code", "label", "applicability"],
            [list(entry) for entry in entries],
        )

    defects: list[dict] = []

    # -- lecturers ------------------------------------------------------------
    lecturer_rows: list[list[str]] = []
    for i in range(1, lecturers + 1):
        birth = _random_date(rng, date(1955, 1, 1), date(1988, 12, 31))
        hire = _random_date(
            rng,
            date(birth.year + 23, 1, 1),
            date(min(birth.year + 35, 2014), 12, 31),
        )
        education = rng.choices(("S1", "S2", "S3"), weights=(15, 55, 30))[0]
        position = rng.choices(("AA", "LEKTOR", "LK", "GB"), weights=(30, 40, 22, 8))[0]
        status = rng.choices(("PNS", "NONPNS"), weights=(60, 40))[0]
        hire_text = "" if rng.random() < 0.1 else hire.isoformat()
        lecturer_rows.append(
            [f"D{i:04d}", _name(rng), birth.isoformat(), education, position, status, hire_text]
        )

    def lecturer_defect(row: list[str], kind: str, reason: str, quarantined_row: int) -> None:
        lecturer_rows.append(row)
        defects.append(
            {
                "file": "lecturers.csv",
                "kind": kind,
                "key": row[0],
                "injected_row_number": len(lecturer_rows) + 1,
                "quarantined_row_number": quarantined_row,
                "expected_reason": reason,
            }
        )

    row_no = lambda: len(lecturer_rows) + 2  # next row's 1-based file position
    lecturer_defect(
        ["D9001", _name(rng), "31/31/1985", "S2", "LEKTOR", "PNS", ""],
        "bad_date", "MALFORMED", row_no(),
    )
    lecturer_defect(
        ["D9002", _name(rng), "1975-03-12", "S9", "LEKTOR", "PNS", "2001-05-01"],
        "unknown_code", "UNKNOWN_CODE", row_no(),
    )
    lecturer_defect(
        ["D9003", "", "1969-08-23", "S3", "GB", "PNS", "1995-02-10"],
        "missing_field", "MISSING", row_no(),
    )
    # Correction row: same id as the 7th clean lecturer, new name. The later
    # row wins; the original (file row 8) is quarantined.
    correction = list(lecturer_rows[6])
    correction[1] = _name(rng)
    lecturer_defect(correction, "duplicate_key", "DUPLICATE_KEY", 8)

    _write_csv(
        out / "lecturers.csv",
        [
            "lecturer_id", "name", "birth_date", "education_level",
            "functional_position", "employment_status", "hire_date",
        ],
        lecturer_rows,
    )

    # -- employees ------------------------------------------------------------
    employee_rows: list[list[str]] = []
    for i in range(1, employees + 1):
        birth = _random_date(rng, date(1960, 1, 1), date(1992, 12, 31))
        hire = _random_date(
            rng,
            date(birth.year + 18, 1, 1),
            date(min(birth.year + 40, 2014), 12, 31),
        )
        status = rng.choices(("PNS", "TETAP", "KONTRAK", "HONORER"), weights=(25, 40, 20, 15))[0]
        department = rng.choice(("TU", "KEU", "AKAD", "PERPUS", "LAB"))
        education = rng.choices(("S1", "S2", ""), weights=(55, 15, 30))[0]
        employee_rows.append(
            [f"K{i:04d}", _name(rng), birth.isoformat(), hire.isoformat(), status, department, education]
        )

    def employee_defect(row: list[str], kind: str, reason: str, quarantined_row: int) -> None:
        employee_rows.append(row)
        defects.append(
            {
                "file": "employees.csv",
                "kind": kind,
                "key": row[0],
                "injected_row_number": len(employee_rows) + 1,
                "quarantined_row_number": quarantined_row,
                "expected_reason": reason,
            }
        )

    erow_no = lambda: len(employee_rows) + 2
    employee_defect(
        ["K9001", _name(rng), "1970-04-18", "30/02/2010", "TETAP", "TU", "S1"],
        "bad_date", "MALFORMED", erow_no(),
    )
    employee_defect(
        ["K9002", _name(rng), "1982-11-30", "2005-07-01", "TETAP", "XX", ""],
        "unknown_code", "UNKNOWN_CODE", erow_no(),
    )
    employee_defect(
        ["K9003", _name(rng), "1990-01-01", "1980-01-01", "KONTRAK", "KEU", "S1"],
        "hire_before_birth", "INCONSISTENT", erow_no(),
    )
    correction = list(employee_rows[4])
    correction[1] = _name(rng)
    employee_defect(correction, "duplicate_key", "DUPLICATE_KEY", 6)

    _write_csv(
        out / "employees.csv",
        [
            "employee_id", "name", "birth_date", "hire_date",
            "employment_status", "department", "education_level",
        ],
        employee_rows,
    )

    manifest = {
        "rng_seed": rng_seed,
        "sizes": {"lecturers": lecturers, "employees": employees},
        "files": {
            "statuses.csv": {"data_rows": len(STATUSES), "dirty_rows": 0},
            "departments.csv": {"data_rows": len(DEPARTMENTS), "dirty_rows": 0},
            "positions.csv": {"data_rows": len(POSITIONS), "dirty_rows": 0},
            "education_levels.csv": {"data_rows": len(EDUCATION_LEVELS), "dirty_rows": 0},
            "lecturers.csv": {"data_rows": len(lecturer_rows), "dirty_rows": 4},
            "employees.csv": {"data_rows": len(employee_rows), "dirty_rows": 4},
        },
        "expected_quarantined": {"lecturers.csv": 4, "employees.csv": 4},
        "expected_warehouse": {"lecturers": lecturers, "employees": employees},
        "defects": defects,
    }
    with open(out / MANIFEST_NAME, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, ensure_ascii=False, sort_keys=True)
        fh.write("\n")
    return manifest
