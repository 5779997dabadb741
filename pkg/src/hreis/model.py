"""Domain model: personnel records, dimension catalog, validation and date math.

A note on age and tenure: both are computed as a plain calendar-year
difference (``year(reference) - year(birth)``), deliberately ignoring month
and day. Someone born 1990-12-31 is 25 "years old" on 2015-01-01 even though
they have lived 24 years and a day. This mirrors how the source system
reports ages, so the numbers here reconcile with the faculty's own lists.
Do not "fix" it to exact elapsed years.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime
from enum import Enum
from typing import Mapping, Optional

# Date formats accepted anywhere a date is read from text, tried in order.
# Day-first formats are common in Indonesian spreadsheet exports; a value
# that matches an earlier format is never re-interpreted by a later one.
DATE_FORMATS = ("%Y-%m-%d", "%d/%m/%Y", "%d-%m-%Y")


class Dimension(str, Enum):
    STATUS = "STATUS"
    DEPARTMENT = "DEPARTMENT"
    POSITION = "POSITION"
    EDUCATION = "EDUCATION"


class Applicability(str, Enum):
    LECTURER = "lecturer"
    EMPLOYEE = "employee"
    BOTH = "both"

    def covers_lecturer(self) -> bool:
        return self in (Applicability.LECTURER, Applicability.BOTH)

    def covers_employee(self) -> bool:
        return self in (Applicability.EMPLOYEE, Applicability.BOTH)


class Reason(str, Enum):
    """Why a field failed validation."""

    MISSING = "MISSING"
    MALFORMED = "MALFORMED"
    UNKNOWN_CODE = "UNKNOWN_CODE"
    INCONSISTENT = "INCONSISTENT"


@dataclass(frozen=True)
class ValidationViolation:
    field: str
    reason: Reason
    message: str


@dataclass(frozen=True)
class DimensionEntry:
    code: str
    label: str
    applicability: Applicability


@dataclass(frozen=True)
class DimensionCatalog:
    """The four reference dimensions: status, department, position, education.

    Entry order is preserved (it drives chart axis order). Codes are
    uppercase trimmed tokens so joins stay case-insensitive.
    """

    statuses: tuple[DimensionEntry, ...] = ()
    departments: tuple[DimensionEntry, ...] = ()
    positions: tuple[DimensionEntry, ...] = ()
    education_levels: tuple[DimensionEntry, ...] = ()

    def __post_init__(self) -> None:
        for dim in Dimension:
            entries = self.entries(dim)
            codes = [e.code for e in entries]
            if len(codes) != len(set(codes)):
                raise ValueError(f"duplicate codes in {dim.value} dimension")
            for e in entries:
                if not e.code or e.code != e.code.strip().upper():
                    raise ValueError(f"{dim.value} code {e.code!r} is not an uppercase token")
                if not e.label:
                    raise ValueError(f"{dim.value} code {e.code} has an empty label")
        edu = {e.code for e in self.education_levels}
        if edu and not {"S1", "S2", "S3"} <= edu:
            raise ValueError("education dimension must include S1, S2 and S3")

    def entries(self, dim: Dimension) -> tuple[DimensionEntry, ...]:
        return {
            Dimension.STATUS: self.statuses,
            Dimension.DEPARTMENT: self.departments,
            Dimension.POSITION: self.positions,
            Dimension.EDUCATION: self.education_levels,
        }[dim]

    def find(self, dim: Dimension, code: str) -> Optional[DimensionEntry]:
        for entry in self.entries(dim):
            if entry.code == code:
                return entry
        return None

    def label_for(self, dim: Dimension, code: str) -> str:
        entry = self.find(dim, code)
        return entry.label if entry else code


@dataclass(frozen=True)
class LecturerRecord:
    lecturer_id: str
    name: str
    birth_date: date
    education_level: str
    functional_position: str
    employment_status: str
    hire_date: Optional[date] = None

    KIND = "LECTURER"

    def natural_key(self) -> str:
        return self.lecturer_id

    def as_dict(self) -> dict:
        return {
            "lecturer_id": self.lecturer_id,
            "name": self.name,
            "birth_date": self.birth_date.isoformat(),
            "education_level": self.education_level,
            "functional_position": self.functional_position,
            "employment_status": self.employment_status,
            "hire_date": self.hire_date.isoformat() if self.hire_date else None,
        }


@dataclass(frozen=True)
class EmployeeRecord:
    employee_id: str
    name: str
    birth_date: date
    hire_date: date
    employment_status: str
    department: str
    education_level: Optional[str] = None

    KIND = "EMPLOYEE"

    def natural_key(self) -> str:
        return self.employee_id

    def as_dict(self) -> dict:
        return {
            "employee_id": self.employee_id,
            "name": self.name,
            "birth_date": self.birth_date.isoformat(),
            "hire_date": self.hire_date.isoformat(),
            "employment_status": self.employment_status,
            "department": self.department,
            "education_level": self.education_level,
        }


def parse_flexible_date(text: str) -> date:
    """Parse a date in any accepted format; raise ValueError if none match."""
    value = text.strip()
    for fmt in DATE_FORMATS:
        try:
            return datetime.strptime(value, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unparseable date {text!r} (accepted: ISO, DD/MM/YYYY, DD-MM-YYYY)")


def compute_age(birth_date: date, reference_date: date) -> int:
    """Age in whole calendar years: year(reference) - year(birth).

    Month and day never enter the calculation (see module docstring).
    """
    years = reference_date.year - birth_date.year
    if years < 0:
        raise ValueError(
            f"birth year {birth_date.year} is after reference year {reference_date.year}"
        )
    return years


def compute_tenure(hire_date: date, reference_date: date) -> int:
    """Years of service, same year-difference rule as compute_age."""
    years = reference_date.year - hire_date.year
    if years < 0:
        raise ValueError(
            f"hire year {hire_date.year} is after reference year {reference_date.year}"
        )
    return years


AGE_BUCKETS = ("<30", "30-39", "40-49", "50-59", "60+")
TENURE_BUCKETS = ("0-4", "5-9", "10-19", "20+")

_AGE_EDGES = ((30, "<30"), (40, "30-39"), (50, "40-49"), (60, "50-59"))
_TENURE_EDGES = ((5, "0-4"), (10, "5-9"), (20, "10-19"))


def bucket_value(value: int, scheme: str) -> str:
    """Map a non-negative age or tenure onto its chart bucket label.

    Every non-negative integer lands in exactly one bucket.
    """
    if value < 0:
        raise ValueError(f"cannot bucket negative value {value}")
    if scheme == "AGE":
        edges, top = _AGE_EDGES, "60+"
    elif scheme == "TENURE":
        edges, top = _TENURE_EDGES, "20+"
    else:
        raise ValueError(f"unknown bucket scheme {scheme!r}")
    for upper, label in edges:
        if value < upper:
            return label
    return top


def bucket_labels(scheme: str) -> tuple[str, ...]:
    if scheme == "AGE":
        return AGE_BUCKETS
    if scheme == "TENURE":
        return TENURE_BUCKETS
    raise ValueError(f"unknown bucket scheme {scheme!r}")


def _clean(value) -> Optional[str]:
    """Trim a raw field; collapse absent/blank to None."""
    if value is None:
        return None
    text = str(value).strip()
    return text or None


def _check_date(
    candidate: Mapping[str, object],
    name: str,
    required: bool,
    violations: list[ValidationViolation],
) -> Optional[date]:
    raw = _clean(candidate.get(name))
    if raw is None:
        if required:
            violations.append(ValidationViolation(name, Reason.MISSING, f"{name} is required"))
        return None
    try:
        return parse_flexible_date(raw)
    except ValueError as exc:
        violations.append(ValidationViolation(name, Reason.MALFORMED, str(exc)))
        return None


def _check_code(
    candidate: Mapping[str, object],
    name: str,
    dim: Dimension,
    catalog: DimensionCatalog,
    entity: str,
    required: bool,
    violations: list[ValidationViolation],
) -> Optional[str]:
    raw = _clean(candidate.get(name))
    if raw is None:
        if required:
            violations.append(ValidationViolation(name, Reason.MISSING, f"{name} is required"))
        return None
    code = raw.upper()
    entry = catalog.find(dim, code)
    if entry is None:
        violations.append(
            ValidationViolation(
                name, Reason.UNKNOWN_CODE, f"{name} code {code!r} not in {dim.value} dimension"
            )
        )
        return None
    applicable = (
        entry.applicability.covers_lecturer()
        if entity == "LECTURER"
        else entry.applicability.covers_employee()
    )
    if not applicable:
        # A code outside the entity's applicability would fall off its
        # charts and break count conservation, so it is rejected here.
        violations.append(
            ValidationViolation(
                name,
                Reason.UNKNOWN_CODE,
                f"{name} code {code!r} is not applicable to {entity.lower()}s",
            )
        )
        return None
    return code


def validate_lecturer(
    candidate: Mapping[str, object],
    catalog: DimensionCatalog,
    today: Optional[date] = None,
) -> LecturerRecord | list[ValidationViolation]:
    """Build a LecturerRecord from raw strings, or report every failing field.

    Pure given an explicit ``today``; the default uses the current date for
    the birth-date-in-the-past check.
    """
    today = today or date.today()
    violations: list[ValidationViolation] = []

    lecturer_id = _clean(candidate.get("lecturer_id"))
    if lecturer_id is None:
        violations.append(
            ValidationViolation("lecturer_id", Reason.MISSING, "lecturer_id is required")
        )
    name = _clean(candidate.get("name"))
    if name is None:
        violations.append(ValidationViolation("name", Reason.MISSING, "name is required"))

    birth = _check_date(candidate, "birth_date", True, violations)
    if birth is not None and birth >= today:
        violations.append(
            ValidationViolation(
                "birth_date", Reason.MALFORMED, f"birth_date {birth} is not in the past"
            )
        )
    hire = _check_date(candidate, "hire_date", False, violations)
    if birth is not None and hire is not None and hire < birth:
        violations.append(
            ValidationViolation(
                "hire_date", Reason.INCONSISTENT, f"hire_date {hire} precedes birth_date {birth}"
            )
        )

    education = _check_code(
        candidate, "education_level", Dimension.EDUCATION, catalog, "LECTURER", True, violations
    )
    position = _check_code(
        candidate, "functional_position", Dimension.POSITION, catalog, "LECTURER", True, violations
    )
    status = _check_code(
        candidate, "employment_status", Dimension.STATUS, catalog, "LECTURER", True, violations
    )

    if violations:
        return violations
    return LecturerRecord(
        lecturer_id=lecturer_id,
        name=name,
        birth_date=birth,
        education_level=education,
        functional_position=position,
        employment_status=status,
        hire_date=hire,
    )


def validate_employee(
    candidate: Mapping[str, object],
    catalog: DimensionCatalog,
    today: Optional[date] = None,
) -> EmployeeRecord | list[ValidationViolation]:
    """Build an EmployeeRecord from raw strings, or report every failing field."""
    today = today or date.today()
    violations: list[ValidationViolation] = []

    employee_id = _clean(candidate.get("employee_id"))
    if employee_id is None:
        violations.append(
            ValidationViolation("employee_id", Reason.MISSING, "employee_id is required")
        )
    name = _clean(candidate.get("name"))
    if name is None:
        violations.append(ValidationViolation("name", Reason.MISSING, "name is required"))

    birth = _check_date(candidate, "birth_date", True, violations)
    if birth is not None and birth >= today:
        violations.append(
            ValidationViolation(
                "birth_date", Reason.MALFORMED, f"birth_date {birth} is not in the past"
            )
        )
    hire = _check_date(candidate, "hire_date", True, violations)
    if birth is not None and hire is not None and hire < birth:
        violations.append(
            ValidationViolation(
                "hire_date", Reason.INCONSISTENT, f"hire_date {hire} precedes birth_date {birth}"
            )
        )

    status = _check_code(
        candidate, "employment_status", Dimension.STATUS, catalog, "EMPLOYEE", True, violations
    )
    department = _check_code(
        candidate, "department", Dimension.DEPARTMENT, catalog, "EMPLOYEE", True, violations
    )
    education = _check_code(
        candidate, "education_level", Dimension.EDUCATION, catalog, "EMPLOYEE", False, violations
    )

    if violations:
        return violations
    return EmployeeRecord(
        employee_id=employee_id,
        name=name,
        birth_date=birth,
        hire_date=hire,
        employment_status=status,
        department=department,
        education_level=education,
    )
