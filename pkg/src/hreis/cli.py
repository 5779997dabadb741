"""Operator entry point: seed, etl, report, serve, info.

Exit codes: 0 success / clean run, 1 failure, 2 the ETL run finished but
was PARTIAL (some rows quarantined or a file skipped). Every flag has an
env-var twin (HREIS_STORE, HREIS_SOURCE, HREIS_PORT, HREIS_RNG_SEED,
HREIS_FORMAT, HREIS_REF); an explicit flag wins over the environment.
"""

from __future__ import annotations

import socket
import sys
from datetime import date

import click
import uvicorn

from .api import create_app
from .etl import EtlError, run_etl
from .rollup import InvalidReportKeyError, VALID_KEYS, canonical_json, distribution, resolve_key
from .seed import DEFAULT_EMPLOYEES, DEFAULT_LECTURERS, generate_seed_data
from .store import DEFAULT_USERS, Warehouse, WarehouseError

_store_option = click.option(
    "--store",
    default="./warehouse.db",
    envvar="HREIS_STORE",
    show_default=True,
    help="Path of the warehouse file.",
)
_source_option = click.option(
    "--source",
    default="./source",
    envvar="HREIS_SOURCE",
    show_default=True,
    help="Directory holding the source CSV files.",
)
_format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["table", "json"]),
    default="table",
    envvar="HREIS_FORMAT",
    show_default=True,
)


def _open_store(path: str) -> Warehouse:
    try:
        return Warehouse(path)
    except WarehouseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@click.group()
@click.version_option(package_name="hreis")
def main():
    """Faculty HR executive information system."""


@main.command()
@_source_option
@click.option("--rng-seed", default=42, envvar="HREIS_RNG_SEED", show_default=True, type=int)
@click.option("--lecturers", default=DEFAULT_LECTURERS, show_default=True, type=int)
@click.option("--employees", default=DEFAULT_EMPLOYEES, show_default=True, type=int)
def seed(source, rng_seed, lecturers, employees):
    """Generate the six synthetic source CSVs plus seed_manifest.json."""
    try:
        manifest = generate_seed_data(source, rng_seed, lecturers, employees)
    except OSError as exc:
        click.echo(f"error: cannot write to {source}: {exc}", err=True)
        sys.exit(1)
    dirty = sum(f["dirty_rows"] for f in manifest["files"].values())
    click.echo(
        f"wrote {len(manifest['files'])} files to {source}"
        f" ({lecturers} lecturers, {employees} employees, {dirty} dirty rows)"
    )


@main.command()
@_source_option
@_store_option
@_format_option
def etl(source, store, fmt):
    """Run the pipeline over the source directory into the warehouse."""
    warehouse = _open_store(store)
    try:
        report = run_etl(source, warehouse)
    except (EtlError, WarehouseError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    if fmt == "json":
        click.echo(canonical_json(report.as_dict()))
    else:
        click.echo(f"run {report.run_id}: {report.status}")
        header = f"{'file':<22}{'parsed':>8}{'ins':>6}{'upd':>6}{'unch':>6}{'quar':>6}"
        click.echo(header)
        for stats in report.files:
            click.echo(
                f"{stats.file:<22}{stats.parsed:>8}{stats.inserted:>6}"
                f"{stats.updated:>6}{stats.unchanged:>6}{stats.quarantined:>6}"
                + (f"  ERROR: {stats.error}" if stats.error else "")
            )
        totals = report.totals()
        click.echo(
            f"{'TOTAL':<22}{totals['parsed']:>8}{totals['inserted']:>6}"
            f"{totals['updated']:>6}{totals['unchanged']:>6}{totals['quarantined']:>6}"
        )
    if report.status == "FAILED":
        sys.exit(1)
    sys.exit(0 if report.status == "CLEAN" else 2)


@main.command()
@click.argument("entity")
@click.argument("dimension")
@_store_option
@_format_option
@click.option("--ref", default=None, envvar="HREIS_REF", help="Reference date YYYY-MM-DD (default: today).")
def report(entity, dimension, store, fmt, ref):
    """Print one distribution, e.g. `hreis report lecturer education`."""
    try:
        key = resolve_key(entity, dimension)
    except InvalidReportKeyError:
        click.echo(f"error: no report for {entity}/{dimension}; valid reports:", err=True)
        for valid in VALID_KEYS:
            click.echo(f"  {valid.entity.lower()} {valid.dimension.lower()}", err=True)
        sys.exit(1)
    if ref is None:
        reference = date.today()
    else:
        try:
            reference = date.fromisoformat(ref)
        except ValueError:
            click.echo(f"error: --ref must be YYYY-MM-DD, got {ref!r}", err=True)
            sys.exit(1)
    warehouse = _open_store(store)
    try:
        result = distribution(warehouse, key, reference)
    except (WarehouseError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    if fmt == "json":
        # Byte-identical to the API body for the same warehouse and ref.
        click.echo(canonical_json(result.as_dict()))
    else:
        click.echo(f"{result.title} (ref {result.reference_date.isoformat()})")
        width = max([len(label) for label, _ in result.buckets] + [len("TOTAL")])
        for label, count in result.buckets:
            click.echo(f"{label:<{width}}  {count:>5}")
        click.echo(f"{'TOTAL':<{width}}  {result.total:>5}")


@main.command()
@click.option("--port", default=8000, envvar="HREIS_PORT", show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@_store_option
@_source_option
@click.option(
    "--token-ttl",
    default=8 * 3600,
    envvar="HREIS_TOKEN_TTL",
    show_default=True,
    type=int,
    help="Session token lifetime in seconds.",
)
def serve(port, host, store, source, token_ttl):
    """Serve the JSON API (and with it the browser dashboard's backend)."""
    warehouse = _open_store(store)
    for username, password, role in DEFAULT_USERS:
        if warehouse.verify_user(username, password) is not None:
            click.echo(
                f"warning: user {username!r} ({role}) still has the default password;"
                " change it before exposing this service",
                err=True,
            )
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.bind((host, port))
        probe.close()
    except OSError as exc:
        click.echo(f"error: cannot bind {host}:{port}: {exc}", err=True)
        sys.exit(1)
    app = create_app(warehouse, source_dir=source, token_ttl=token_ttl)
    click.echo(f"serving on http://{host}:{port} (schema version {warehouse.schema_version})")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@_store_option
def info(store):
    """Show the store's schema version, row counts and latest run."""
    warehouse = _open_store(store)
    click.echo(f"store: {warehouse.path}")
    click.echo(f"schema_version: {warehouse.schema_version}")
    for table, count in warehouse.table_counts().items():
        click.echo(f"{table}: {count}")
    history = warehouse.get_load_history(limit=1)
    if history:
        last = history[0]
        click.echo(f"last_run: {last['run_id']} {last['status']} at {last['finished_at']}")
    else:
        click.echo("last_run: none")


if __name__ == "__main__":
    main()
