import shutil
from datetime import date

import pytest

from hreis.etl import (
    EtlBusyError,
    EtlSourceError,
    HeaderError,
    load_batch,
    parse_source,
    run_etl,
    schema_for,
    transform_rows,
)
from hreis.model import LecturerRecord
from hreis.store import Warehouse, WarehouseError

from conftest import REF, quarantined_rows_of

LECTURER_HEADER = (
    "lecturer_id,name,birth_date,education_level,functional_position,employment_status,hire_date"
)


def lecturer_csv(*rows: str) -> bytes:
    return ("\n".join([LECTURER_HEADER, *rows]) + "\n").encode()


class TestParseSource:
    def test_well_formed_rows(self):
        rows, errors = parse_source(
            lecturer_csv(
                "0011,Ahmad,1980-06-15,S3,LEKTOR,PNS,2005-09-01",
                "0012,Budi,1975-01-20,S2,AA,NONPNS,",
            ),
            schema_for("LECTURER"),
        )
        assert len(rows) == 2 and not errors
        assert rows[0].row_number == 2
        assert rows[1].values["name"] == "Budi"

    def test_header_missing_required_column_fails_whole_file(self):
        data = b"lecturer_id,name,education_level,functional_position,employment_status\n"
        with pytest.raises(HeaderError, match="birth_date"):
            parse_source(data, schema_for("LECTURER"))

    def test_empty_file_fails(self):
        with pytest.raises(HeaderError):
            parse_source(b"", schema_for("LECTURER"))

    def test_column_count_mismatch_becomes_row_error(self):
        rows, errors = parse_source(
            lecturer_csv(
                "0011,Ahmad,1980-06-15,S3,LEKTOR,PNS,",
                "0012,Budi,1975-01-20,S2,AA,NONPNS,",
                "0013,Citra,1970-03-03,S1,AA,PNS,,EXTRA",
            ),
            schema_for("LECTURER"),
        )
        assert len(rows) == 2
        assert [e.row_number for e in errors] == [4]

    def test_header_order_insensitive(self):
        data = (
            "name,lecturer_id,birth_date,education_level,functional_position,"
            "employment_status,hire_date\nAhmad,0011,1980-06-15,S3,LEKTOR,PNS,\n"
        ).encode()
        rows, errors = parse_source(data, schema_for("LECTURER"))
        assert rows[0].values["lecturer_id"] == "0011" and not errors

    def test_unknown_extra_column_dropped(self):
        data = (LECTURER_HEADER + ",shoe_size\n0011,Ahmad,1980-06-15,S3,LEKTOR,PNS,,44\n").encode()
        rows, _ = parse_source(data, schema_for("LECTURER"))
        assert "shoe_size" not in rows[0].values

    def test_blank_lines_skipped(self):
        rows, errors = parse_source(
            lecturer_csv("0011,Ahmad,1980-06-15,S3,LEKTOR,PNS,", "", "0012,Budi,1975-01-20,S2,AA,PNS,"),
            schema_for("LECTURER"),
        )
        assert len(rows) == 2 and not errors


class TestTransformRows:
    def test_day_first_date_normalized(self, catalog):
        rows, _ = parse_source(
            lecturer_csv("0011,Ahmad,15/06/1980,S3,LEKTOR,PNS,"), schema_for("LECTURER")
        )
        valid, quarantined = transform_rows(rows, schema_for("LECTURER"), catalog, REF)
        assert not quarantined
        assert valid[0].birth_date == date(1980, 6, 15)

    def test_duplicate_key_keeps_last(self, catalog):
        rows, _ = parse_source(
            lecturer_csv(
                "0011,Original,1980-06-15,S3,LEKTOR,PNS,",
                "0011,Correction,1980-06-15,S2,LEKTOR,PNS,",
            ),
            schema_for("LECTURER"),
        )
        valid, quarantined = transform_rows(rows, schema_for("LECTURER"), catalog, REF)
        assert [r.name for r in valid] == ["Correction"]
        assert [(q.row.row_number, q.reason) for q in quarantined] == [(2, "DUPLICATE_KEY")]

    def test_status_trimmed_uppercased(self, catalog):
        rows, _ = parse_source(
            lecturer_csv('0011,Ahmad,1980-06-15,S3,LEKTOR," pns ",'), schema_for("LECTURER")
        )
        valid, _ = transform_rows(rows, schema_for("LECTURER"), catalog, REF)
        assert valid[0].employment_status == "PNS"

    def test_count_conservation(self, catalog):
        rows, _ = parse_source(
            lecturer_csv(
                "0011,Ahmad,1980-06-15,S3,LEKTOR,PNS,",
                "0012,,bogus,S9,LEKTOR,PNS,",
                "0011,Dupe,1981-01-01,S1,AA,PNS,",
                "0013,Citra,1970-02-02,S2,AA,NONPNS,",
            ),
            schema_for("LECTURER"),
        )
        valid, quarantined = transform_rows(rows, schema_for("LECTURER"), catalog, REF)
        assert len(valid) + len(quarantined) == len(rows)


class TestLoadBatch:
    def make_records(self, n, name="x"):
        return [
            LecturerRecord(f"L{i:03d}", f"{name}{i}", date(1980, 1, 1), "S2", "LEKTOR", "PNS")
            for i in range(n)
        ]

    def test_fresh_insert(self, warehouse):
        counts, lineage = load_batch(warehouse, "LECTURER", self.make_records(10))
        assert counts == {"INSERTED": 10, "UPDATED": 0, "UNCHANGED": 0}
        assert len(lineage) == 10

    def test_idempotent_reload(self, warehouse):
        load_batch(warehouse, "LECTURER", self.make_records(10))
        counts, _ = load_batch(warehouse, "LECTURER", self.make_records(10))
        assert counts == {"INSERTED": 0, "UPDATED": 0, "UNCHANGED": 10}

    def test_single_change_detected(self, warehouse):
        load_batch(warehouse, "LECTURER", self.make_records(10))
        records = self.make_records(10)
        records[3] = LecturerRecord("L003", "renamed", date(1980, 1, 1), "S2", "LEKTOR", "PNS")
        counts, _ = load_batch(warehouse, "LECTURER", records)
        assert counts == {"INSERTED": 0, "UPDATED": 1, "UNCHANGED": 9}

    def test_atomic_rollback_on_midbatch_failure(self, warehouse, monkeypatch):
        load_batch(warehouse, "LECTURER", self.make_records(4))
        before = warehouse.count_entities("LECTURER")

        original = Warehouse.upsert_entity
        calls = {"n": 0}

        def flaky(self, kind, record):
            calls["n"] += 1
            if calls["n"] == 3:
                raise WarehouseError("disk went away")
            return original(self, kind, record)

        monkeypatch.setattr(Warehouse, "upsert_entity", flaky)
        with pytest.raises(WarehouseError):
            load_batch(warehouse, "LECTURER", self.make_records(8, name="other"))
        monkeypatch.undo()

        assert warehouse.count_entities("LECTURER") == before
        # Crash consistency: a fresh handle on the same file agrees.
        reopened = Warehouse(warehouse.path)
        assert reopened.count_entities("LECTURER") == before
        assert reopened.snapshot_bytes() == warehouse.snapshot_bytes()


class TestRunEtl:
    def test_seed_first_run_counts(self, seed_dir, manifest, tmp_path):
        wh = Warehouse(tmp_path / "wh.db")
        report = run_etl(seed_dir, wh, today=REF)
        by_file = {f.file: f for f in report.files}
        assert report.status == "PARTIAL"  # dirty rows quarantined by design
        for name, info in manifest["files"].items():
            stats = by_file[name]
            assert stats.parsed == info["data_rows"]
            assert stats.quarantined == info["dirty_rows"]
            assert stats.conserves()
        assert by_file["lecturers.csv"].inserted == manifest["sizes"]["lecturers"]
        assert by_file["employees.csv"].inserted == manifest["sizes"]["employees"]

    def test_quarantine_matches_manifest_exactly(self, seed_dir, manifest, tmp_path):
        wh = Warehouse(tmp_path / "wh.db")
        report = run_etl(seed_dir, wh, today=REF)
        for file_name in ("lecturers.csv", "employees.csv"):
            stats = next(f for f in report.files if f.file == file_name)
            got = {q.row.row_number for q in stats.quarantined_rows}
            assert got == quarantined_rows_of(manifest, file_name)
            reasons = {
                q.row.row_number: q.reason for q in stats.quarantined_rows
            }
            for defect in manifest["defects"]:
                if defect["file"] == file_name:
                    assert defect["expected_reason"] in reasons[defect["quarantined_row_number"]]

    def test_second_run_idempotent(self, seed_dir, tmp_path):
        wh = Warehouse(tmp_path / "wh.db")
        first = run_etl(seed_dir, wh, today=REF)
        snapshot = wh.snapshot_bytes()
        second = run_etl(seed_dir, wh, today=REF)
        assert second.totals()["inserted"] == 0
        assert second.totals()["unchanged"] == first.totals()["inserted"]
        assert second.totals()["quarantined"] == first.totals()["quarantined"]
        assert wh.snapshot_bytes() == snapshot

    def test_entities_without_dimensions_all_quarantined(self, seed_dir, tmp_path):
        source = tmp_path / "only_lecturers"
        source.mkdir()
        shutil.copy(seed_dir / "lecturers.csv", source / "lecturers.csv")
        wh = Warehouse(tmp_path / "wh.db")
        report = run_etl(source, wh, today=REF)
        stats = report.files[0]
        assert stats.inserted == 0
        assert stats.quarantined == stats.parsed
        assert all("UNKNOWN_CODE" in q.reason for q in stats.quarantined_rows if q.reason != "DUPLICATE_KEY")
        assert wh.count_entities("LECTURER") == 0

    def test_header_error_marks_partial_but_processes_rest(self, seed_dir, tmp_path):
        source = tmp_path / "src"
        shutil.copytree(seed_dir, source)
        (source / "employees.csv").write_text("id,nome\n1,x\n")
        wh = Warehouse(tmp_path / "wh.db")
        report = run_etl(source, wh, today=REF)
        assert report.status == "PARTIAL"
        by_file = {f.file: f for f in report.files}
        assert by_file["employees.csv"].error
        assert by_file["lecturers.csv"].inserted > 0

    def test_missing_directory_fails_without_mutation(self, tmp_path):
        wh = Warehouse(tmp_path / "wh.db")
        with pytest.raises(EtlSourceError):
            run_etl(tmp_path / "nope", wh)
        assert wh.get_load_history() == []

    def test_concurrent_run_rejected(self, seed_dir, tmp_path):
        wh = Warehouse(tmp_path / "wh.db")
        assert wh.etl_gate.acquire(blocking=False)
        try:
            with pytest.raises(EtlBusyError):
                run_etl(seed_dir, wh, today=REF)
        finally:
            wh.etl_gate.release()

    def test_report_persisted_verbatim(self, seed_dir, tmp_path):
        wh = Warehouse(tmp_path / "wh.db")
        report = run_etl(seed_dir, wh, today=REF)
        stored = wh.get_load_history(limit=1)[0]
        assert stored == report.as_dict()
        assert stored["run_id"] == report.run_id == 1

    def test_lineage_recorded_per_record(self, seed_dir, manifest, tmp_path):
        wh = Warehouse(tmp_path / "wh.db")
        report = run_etl(seed_dir, wh, today=REF)
        lineage = wh.get_lineage(report.run_id)
        lecturer_rows = [l for l in lineage if l["entity_kind"] == "LECTURER"]
        assert len(lecturer_rows) == manifest["sizes"]["lecturers"]
        assert all(l["action"] == "INSERTED" for l in lecturer_rows)

    def test_storage_failure_records_failed_run(self, seed_dir, tmp_path, monkeypatch):
        wh = Warehouse(tmp_path / "wh.db")
        calls = {"n": 0}
        original = Warehouse.upsert_entity

        def flaky(self, kind, record):
            calls["n"] += 1
            if calls["n"] == 50:
                raise WarehouseError("disk went away")
            return original(self, kind, record)

        monkeypatch.setattr(Warehouse, "upsert_entity", flaky)
        report = run_etl(seed_dir, wh, today=REF)
        monkeypatch.undo()
        assert report.status == "FAILED"
        assert wh.count_entities("LECTURER") == 0
        assert wh.count_entities("EMPLOYEE") == 0
        stored = wh.get_load_history(limit=1)[0]
        assert stored["status"] == "FAILED"
