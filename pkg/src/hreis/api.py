"""HTTP/JSON facade: login, role enforcement, reports, CRUD, ETL trigger.

Two roles: DEAN sees everything and changes nothing; HR_STAFF additionally
creates and edits records and triggers ETL runs. Report bodies are
serialized through the same canonical encoder as the CLI, so identical
queries produce identical bytes. Every 401 carries the exact same body no
matter why authentication failed.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass
from datetime import date
from typing import Callable, Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from starlette.concurrency import run_in_threadpool
from starlette.exceptions import HTTPException as StarletteHTTPException

from .etl import EtlBusyError, EtlSourceError, run_etl
from .model import validate_employee, validate_lecturer
from .rollup import (
    InvalidReportKeyError,
    UnknownBucketError,
    canonical_json,
    dashboard_summary,
    distribution,
    drill_down,
    report_catalog,
    resolve_key,
)
from .store import UnknownFieldError, Warehouse, WarehouseBusyError

DEFAULT_TOKEN_TTL = 8 * 3600

_UNAUTHENTICATED_BODY = canonical_json(
    {"code": "UNAUTHENTICATED", "message": "authentication failed"}
)

_VALIDATORS = {"LECTURER": validate_lecturer, "EMPLOYEE": validate_employee}


def _json(payload, status: int = 200) -> Response:
    return Response(canonical_json(payload), status_code=status, media_type="application/json")


def _error(status: int, code: str, message: str, details=None) -> Response:
    body = {"code": code, "message": message}
    if details is not None:
        body["details"] = details
    return _json(body, status)


def _unauthenticated() -> Response:
    # One fixed body for every authentication failure: wrong password,
    # unknown user, missing, malformed or expired token.
    return Response(_UNAUTHENTICATED_BODY, status_code=401, media_type="application/json")


def _forbidden() -> Response:
    return _error(403, "FORBIDDEN", "this action requires the HR_STAFF role")


@dataclass
class Session:
    token: str
    username: str
    role: str
    expires_at: float


class TokenStore:
    """In-memory bearer tokens with expiry; the clock is injectable."""

    def __init__(self, ttl_seconds: float, clock: Callable[[], float]):
        self.ttl = ttl_seconds
        self.clock = clock
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def issue(self, username: str, role: str) -> Session:
        session = Session(
            token=secrets.token_urlsafe(32),  # 256 bits
            username=username,
            role=role,
            expires_at=self.clock() + self.ttl,
        )
        with self._lock:
            self._sessions[session.token] = session
        return session

    def get(self, token: str) -> Optional[Session]:
        with self._lock:
            session = self._sessions.get(token)
            if session is None:
                return None
            if session.expires_at <= self.clock():
                del self._sessions[token]
                return None
            return session


def create_app(
    warehouse: Warehouse,
    source_dir: Optional[str] = None,
    token_ttl: float = DEFAULT_TOKEN_TTL,
    clock: Callable[[], float] = time.time,
) -> FastAPI:
    app = FastAPI(title="Faculty HR EIS", version="0.1.0", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    tokens = TokenStore(token_ttl, clock)
    app.state.warehouse = warehouse
    app.state.tokens = tokens
    app.state.source_dir = source_dir

    def authed(request: Request) -> Optional[Session]:
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            return None
        return tokens.get(header[len("Bearer "):].strip())

    def parse_ref(request: Request) -> tuple[Optional[date], Optional[Response]]:
        raw = request.query_params.get("ref")
        if raw is None:
            return date.today(), None
        try:
            return date.fromisoformat(raw), None
        except ValueError:
            return None, _error(422, "INVALID_INPUT", f"ref must be YYYY-MM-DD, got {raw!r}")

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        codes = {401: "UNAUTHENTICATED", 403: "FORBIDDEN", 404: "NOT_FOUND", 409: "CONFLICT"}
        return _error(exc.status_code, codes.get(exc.status_code, "ERROR"), str(exc.detail))

    # -- health and login ------------------------------------------------

    @app.get("/api/health")
    async def health():
        return _json({"status": "ok", "schema_version": warehouse.schema_version})

    @app.post("/api/login")
    async def login(request: Request):
        try:
            body = await request.json()
        except Exception:
            body = None
        if not isinstance(body, dict):
            return _error(422, "INVALID_INPUT", "request body must be a JSON object")
        details = [
            {"field": field, "reason": "MISSING", "message": f"{field} is required"}
            for field in ("username", "password")
            if not isinstance(body.get(field), str) or not body.get(field)
        ]
        if details:
            return _error(422, "INVALID_INPUT", "username and password are required", details)
        role = warehouse.verify_user(body["username"], body["password"])
        if role is None:
            return _unauthenticated()
        session = tokens.issue(body["username"], role)
        return _json(
            {"token": session.token, "role": session.role, "expires_in": int(tokens.ttl)}
        )

    # -- reports -----------------------------------------------------------

    @app.get("/api/dashboard")
    async def dashboard(request: Request):
        if authed(request) is None:
            return _unauthenticated()
        ref, err = parse_ref(request)
        if err:
            return err
        try:
            charts = dashboard_summary(warehouse, ref)
        except ValueError as exc:
            return _error(422, "INVALID_INPUT", str(exc))
        return _json([chart.as_dict() for chart in charts])

    @app.get("/api/reports")
    async def reports_index(request: Request):
        if authed(request) is None:
            return _unauthenticated()
        return _json(report_catalog())

    @app.get("/api/dimensions")
    async def dimensions(request: Request):
        if authed(request) is None:
            return _unauthenticated()
        catalog = warehouse.catalog()
        payload = {
            "statuses": catalog.statuses,
            "departments": catalog.departments,
            "positions": catalog.positions,
            "education_levels": catalog.education_levels,
        }
        return _json(
            {
                name: [
                    {"code": e.code, "label": e.label, "applicability": e.applicability.value}
                    for e in entries
                ]
                for name, entries in payload.items()
            }
        )

    @app.get("/api/reports/{entity}/{dimension}")
    async def report(entity: str, dimension: str, request: Request):
        if authed(request) is None:
            return _unauthenticated()
        ref, err = parse_ref(request)
        if err:
            return err
        try:
            key = resolve_key(entity, dimension)
        except InvalidReportKeyError as exc:
            return _error(404, "NOT_FOUND", str(exc))
        try:
            result = distribution(warehouse, key, ref)
        except ValueError as exc:
            return _error(422, "INVALID_INPUT", str(exc))
        return _json(result.as_dict())

    @app.get("/api/reports/{entity}/{dimension}/{bucket}")
    async def report_drilldown(entity: str, dimension: str, bucket: str, request: Request):
        if authed(request) is None:
            return _unauthenticated()
        ref, err = parse_ref(request)
        if err:
            return err
        try:
            key = resolve_key(entity, dimension)
        except InvalidReportKeyError as exc:
            return _error(404, "NOT_FOUND", str(exc))
        try:
            result = drill_down(warehouse, key, bucket, ref)
        except UnknownBucketError as exc:
            return _error(404, "NOT_FOUND", str(exc))
        except ValueError as exc:
            return _error(422, "INVALID_INPUT", str(exc))
        return _json(result.as_dict())

    # -- entity CRUD -------------------------------------------------------

    async def list_entities(kind: str, request: Request) -> Response:
        if authed(request) is None:
            return _unauthenticated()
        filters = dict(request.query_params)
        try:
            records = warehouse.query_entities(kind, filters)
        except UnknownFieldError as exc:
            return _error(422, "INVALID_INPUT", str(exc))
        return _json([r.as_dict() for r in records])

    async def upsert_entity(kind: str, request: Request, replace: bool) -> Response:
        session = authed(request)
        if session is None:
            return _unauthenticated()
        if session.role != "HR_STAFF":
            return _forbidden()
        try:
            body = await request.json()
        except Exception:
            body = None
        if not isinstance(body, dict):
            return _error(422, "INVALID_INPUT", "request body must be a JSON object")
        result = _VALIDATORS[kind](body, warehouse.catalog())
        if isinstance(result, list):
            details = [
                {"field": v.field, "reason": v.reason.value, "message": v.message}
                for v in result
            ]
            return _error(422, "INVALID_INPUT", "record failed validation", details)

        def store_record() -> Optional[Response]:
            with warehouse.write():
                if not replace and warehouse.get_entity(kind, result.natural_key()):
                    return _error(
                        409,
                        "CONFLICT",
                        f"{kind.lower()} {result.natural_key()!r} already exists; use PUT to replace",
                    )
                warehouse.upsert_entity(kind, result)
                return None

        try:
            # Threadpool keeps the event loop responsive while this request
            # waits on the single-writer gate (bounded by its timeout).
            conflict = await run_in_threadpool(store_record)
        except WarehouseBusyError as exc:
            return _error(423, "ETL_BUSY", str(exc))
        if conflict is not None:
            return conflict
        return _json(result.as_dict(), 201 if not replace else 200)

    @app.get("/api/lecturers")
    async def list_lecturers(request: Request):
        return await list_entities("LECTURER", request)

    @app.post("/api/lecturers")
    async def create_lecturer(request: Request):
        return await upsert_entity("LECTURER", request, replace=False)

    @app.put("/api/lecturers")
    async def replace_lecturer(request: Request):
        return await upsert_entity("LECTURER", request, replace=True)

    @app.get("/api/employees")
    async def list_employees(request: Request):
        return await list_entities("EMPLOYEE", request)

    @app.post("/api/employees")
    async def create_employee(request: Request):
        return await upsert_entity("EMPLOYEE", request, replace=False)

    @app.put("/api/employees")
    async def replace_employee(request: Request):
        return await upsert_entity("EMPLOYEE", request, replace=True)

    # -- ETL and load history ------------------------------------------------

    @app.post("/api/etl/run")
    async def trigger_etl(request: Request):
        session = authed(request)
        if session is None:
            return _unauthenticated()
        if session.role != "HR_STAFF":
            return _forbidden()
        if not app.state.source_dir:
            return _error(422, "INVALID_INPUT", "no source directory configured")
        try:
            report_obj = await run_in_threadpool(run_etl, app.state.source_dir, warehouse)
        except EtlBusyError as exc:
            return _error(423, "ETL_BUSY", str(exc))
        except WarehouseBusyError as exc:
            return _error(423, "ETL_BUSY", str(exc))
        except EtlSourceError as exc:
            return _error(422, "INVALID_INPUT", str(exc))
        return _json(report_obj.as_dict())

    @app.get("/api/loads")
    async def loads(request: Request):
        if authed(request) is None:
            return _unauthenticated()
        raw = request.query_params.get("limit", "20")
        try:
            limit = int(raw)
        except ValueError:
            limit = 0
        if limit < 1:
            return _error(422, "INVALID_INPUT", f"limit must be a positive integer, got {raw!r}")
        return _json(warehouse.get_load_history(limit))

    return app
