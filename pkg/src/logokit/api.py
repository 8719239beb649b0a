"""HTTP/JSON facade over the store, the homework engine and device sync.

Single-therapist deployment: no auth, loopback bind by default, every piece
of state lives in the store.  Error mapping is total — each domain error
code maps to exactly one HTTP status (see ERROR_STATUS) and reaches the
client as ``{"code", "message", ...}``.
"""

from __future__ import annotations

import argparse
import sys
import tempfile
import threading
import time
from dataclasses import dataclass, field, replace
from datetime import date
from pathlib import Path
from typing import Optional

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

import uvicorn
from fastapi import Body, FastAPI, Query, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .errors import BindFailure, DomainError, NotFound, ValidationFailed
from .homework import (
    assign_homework,
    assignment_status,
    child_progress,
    due_date,
    exercise_outcomes,
    ingest_report,
    outcome_payload,
    parse_report_intake,
    progress_payload,
)
from .jsonio import from_dict, to_dict, violations_payload
from .model import AssetKind, HomeworkAssignment, Kind
from .store import Store, default_data_root
from .sync import export_bundle, import_result_bundle, read_result_bundle

DEFAULT_BIND = "127.0.0.1:8470"

# Total error -> HTTP status mapping; no domain error may reach a client as a bare 500.
ERROR_STATUS = {
    "NotFound": 404,
    "UnknownAssignment": 404,
    "ValidationFailed": 422,
    "WrongExtension": 422,
    "BadAttemptSequence": 422,
    "MalformedBundle": 422,
    "SourceMissing": 422,
    "ReferentialIntegrity": 409,
    "StillReferenced": 409,
    "AlreadyReported": 409,
    "DigestMismatch": 409,
    "UniquenessViolation": 409,
    "NameCollision": 409,
    "UnknownExercise": 409,
    "AssetMissing": 409,
    "StoreOpenFailure": 500,
    "BindFailure": 500,
}

CRUD_RESOURCES: list[tuple[str, Kind]] = [
    ("words", Kind.WORD),
    ("paronyms", Kind.PARONYM),
    ("exercise-types", Kind.EXERCISE_TYPE),
    ("exercise-subtypes", Kind.EXERCISE_SUBTYPE),
    ("sounds", Kind.SOUND),
    ("associations", Kind.ASSOCIATION),
    ("instructions", Kind.INSTRUCTIONS),
    ("exercises", Kind.EXERCISE),
    ("templates", Kind.TEMPLATE),
    ("children", Kind.CHILD),
]


@dataclass(frozen=True)
class RouteSpec:
    method: str
    path: str
    operation: str


def endpoint_contract() -> list[RouteSpec]:
    """The complete, machine-checkable route table (see docs/routes.md)."""
    routes = [RouteSpec("GET", "/health", "liveness probe")]
    for segment, kind in CRUD_RESOURCES:
        routes += [
            RouteSpec("GET", f"/{segment}", f"list {kind.value} rows"),
            RouteSpec("POST", f"/{segment}", f"create a {kind.value}"),
            RouteSpec("GET", f"/{segment}/{{id}}", f"fetch one {kind.value}"),
            RouteSpec("PUT", f"/{segment}/{{id}}", f"overwrite a {kind.value}"),
            RouteSpec("DELETE", f"/{segment}/{{id}}", f"delete a {kind.value} (restrictive)"),
        ]
    routes += [
        RouteSpec("GET", "/exercises/{id}/configurations", "list an exercise's configurations"),
        RouteSpec("POST", "/exercises/{id}/configurations", "add a configuration row"),
        RouteSpec("GET", "/configurations/{id}", "fetch one configuration"),
        RouteSpec("PUT", "/configurations/{id}", "overwrite a configuration"),
        RouteSpec("DELETE", "/configurations/{id}", "delete a configuration"),
        RouteSpec("GET", "/assets", "list media assets"),
        RouteSpec("GET", "/assets/{id}", "fetch one media asset"),
        RouteSpec("DELETE", "/assets/{id}", "delete an unreferenced media asset"),
        RouteSpec("POST", "/assets/sound", "upload + register a sound file"),
        RouteSpec("POST", "/assets/image", "upload + register an image file"),
        RouteSpec("GET", "/assets/{id}/file", "download the managed media file"),
        RouteSpec("GET", "/assignments", "list homework assignments"),
        RouteSpec("POST", "/assignments", "assign a template to a child"),
        RouteSpec("GET", "/assignments/{id}", "fetch one assignment"),
        RouteSpec("DELETE", "/assignments/{id}", "delete an assignment without attempts"),
        RouteSpec("GET", "/assignments/{id}/status", "status for an as-of date"),
        RouteSpec("POST", "/assignments/{id}/report", "ingest the returned activity report"),
        RouteSpec("GET", "/assignments/{id}/outcomes", "per-exercise outcomes"),
        RouteSpec("GET", "/assignments/{id}/bundle", "download the device bundle"),
        RouteSpec("POST", "/assignments/{id}/results", "upload a device result archive"),
        RouteSpec("GET", "/children/{id}/progress", "progress summary for a child"),
        RouteSpec("GET", "/due-date", "due-date preview for an assignment draft"),
    ]
    return routes


def _error_body(exc: DomainError) -> dict:
    body: dict = {"code": exc.code, "message": exc.message}
    if isinstance(exc, ValidationFailed) and exc.violations:
        body["violations"] = violations_payload(exc.violations)
    referrers = getattr(exc, "referrers", None)
    if referrers:
        body["referrers"] = [{"kind": k, "id": i} for k, i in referrers]
    missing = getattr(exc, "missing", None)
    if missing:
        body["missing"] = [{"kind": k, "id": i} for k, i in missing]
    if exc.details:
        body["details"] = {k: v for k, v in exc.details.items()}
    return body


def _parse_date(value: str, label: str) -> date:
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise ValidationFailed(f"{label} must be an ISO-8601 date (YYYY-MM-DD), got {value!r}")


def _require_body_id(body: dict, entity_id: int, kind: Kind):
    entity = from_dict(kind, body)
    if entity.id is not None and entity.id != entity_id:
        raise ValidationFailed(
            f"body id {entity.id} does not match the path id {entity_id}"
        )
    return replace(entity, id=entity_id)


def create_app(store: Store, ui_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="logokit", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(DomainError)
    async def on_domain_error(_request: Request, exc: DomainError):
        return JSONResponse(status_code=ERROR_STATUS[exc.code], content=_error_body(exc))

    @app.exception_handler(RequestValidationError)
    async def on_request_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "ValidationFailed", "message": str(exc.errors()[:3])},
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    def register_crud(segment: str, kind: Kind):
        if kind is Kind.EXERCISE:

            @app.get(f"/{segment}")
            def list_exercises(
                limit: int = Query(100, ge=1),
                offset: int = Query(0, ge=0),
                type_id: Optional[int] = Query(None, alias="typeId"),
                subtype_id: Optional[int] = Query(None, alias="subtypeId"),
                sound_id: Optional[int] = Query(None, alias="soundId"),
                difficulty_min: Optional[int] = Query(None, alias="difficultyMin"),
                difficulty_max: Optional[int] = Query(None, alias="difficultyMax"),
            ):
                rows = store.query_exercises(
                    type_id=type_id,
                    subtype_id=subtype_id,
                    sound_id=sound_id,
                    difficulty_min=difficulty_min,
                    difficulty_max=difficulty_max,
                )
                return [to_dict(e) for e in rows[offset : offset + limit]]

        else:

            @app.get(f"/{segment}")
            def list_rows(limit: int = Query(100, ge=1), offset: int = Query(0, ge=0)):
                return [to_dict(e) for e in store.list_all(kind, limit=limit, offset=offset)]

        @app.get(f"/{segment}/{{entity_id}}")
        def get_row(entity_id: int):
            return to_dict(store.get(kind, entity_id))

        @app.post(f"/{segment}", status_code=201)
        def create_row(body: dict = Body(...)):
            entity = from_dict(kind, body)
            if entity.id is not None:
                raise ValidationFailed("POST creates a new row; use PUT to overwrite by id")
            return to_dict(store.save(entity))

        @app.put(f"/{segment}/{{entity_id}}")
        def update_row(entity_id: int, body: dict = Body(...)):
            return to_dict(store.save(_require_body_id(body, entity_id, kind)))

        @app.delete(f"/{segment}/{{entity_id}}", status_code=204)
        def delete_row(entity_id: int):
            store.delete(kind, entity_id)
            return Response(status_code=204)

    for segment, kind in CRUD_RESOURCES:
        register_crud(segment, kind)

    # Configurations hang off their exercise.
    @app.get("/exercises/{exercise_id}/configurations")
    def list_configurations(exercise_id: int, limit: int = Query(100, ge=1), offset: int = Query(0, ge=0)):
        store.get(Kind.EXERCISE, exercise_id)
        rows = [c for c in store.list_all(Kind.CONFIGURATION) if c.exercise_id == exercise_id]
        return [to_dict(c) for c in rows[offset : offset + limit]]

    @app.post("/exercises/{exercise_id}/configurations", status_code=201)
    def create_configuration(exercise_id: int, body: dict = Body(...)):
        payload = dict(body) if isinstance(body, dict) else body
        if isinstance(payload, dict):
            payload.setdefault("exerciseId", exercise_id)
        config = from_dict(Kind.CONFIGURATION, payload)
        if config.id is not None:
            raise ValidationFailed("POST creates a new row; use PUT to overwrite by id")
        if config.exercise_id != exercise_id:
            raise ValidationFailed(
                f"body exerciseId {config.exercise_id} does not match the path id {exercise_id}"
            )
        return to_dict(store.save(config))

    @app.get("/configurations/{entity_id}")
    def get_configuration(entity_id: int):
        return to_dict(store.get(Kind.CONFIGURATION, entity_id))

    @app.put("/configurations/{entity_id}")
    def update_configuration(entity_id: int, body: dict = Body(...)):
        return to_dict(store.save(_require_body_id(body, entity_id, Kind.CONFIGURATION)))

    @app.delete("/configurations/{entity_id}", status_code=204)
    def delete_configuration(entity_id: int):
        store.delete(Kind.CONFIGURATION, entity_id)
        return Response(status_code=204)

    # Media assets: uploads land in the managed tree via register_media_asset.
    @app.get("/assets")
    def list_assets(limit: int = Query(100, ge=1), offset: int = Query(0, ge=0)):
        return [to_dict(a) for a in store.list_all(Kind.ASSET, limit=limit, offset=offset)]

    @app.get("/assets/{entity_id}")
    def get_asset(entity_id: int):
        return to_dict(store.get(Kind.ASSET, entity_id))

    @app.get("/assets/{entity_id}/file")
    def get_asset_file(entity_id: int):
        asset = store.get(Kind.ASSET, entity_id)
        path = store.asset_path(asset)
        if not path.is_file():
            raise NotFound(f"file for asset {entity_id} is missing")
        media = "audio/mpeg" if asset.kind is AssetKind.SOUND else "image/png"
        if asset.filename.lower().endswith(".wav"):
            media = "audio/wav"
        if asset.filename.lower().endswith(".jpg"):
            media = "image/jpeg"
        return Response(content=path.read_bytes(), media_type=media)

    @app.delete("/assets/{entity_id}", status_code=204)
    def delete_asset(entity_id: int):
        store.delete(Kind.ASSET, entity_id)
        return Response(status_code=204)

    async def _register_upload(kind: AssetKind, upload: UploadFile):
        filename = Path(upload.filename or "").name
        if not filename:
            raise ValidationFailed("upload needs a filename")
        with tempfile.TemporaryDirectory() as tmp:
            staged = Path(tmp) / filename
            staged.write_bytes(await upload.read())
            return to_dict(store.register_media_asset(kind, staged))

    @app.post("/assets/sound", status_code=201)
    async def upload_sound(file: UploadFile):
        return await _register_upload(AssetKind.SOUND, file)

    @app.post("/assets/image", status_code=201)
    async def upload_image(file: UploadFile):
        return await _register_upload(AssetKind.IMAGE, file)

    # Assignments and the homework workflow.
    @app.get("/assignments")
    def list_assignments(limit: int = Query(100, ge=1), offset: int = Query(0, ge=0)):
        return [to_dict(a) for a in store.list_all(Kind.ASSIGNMENT, limit=limit, offset=offset)]

    @app.post("/assignments", status_code=201)
    def create_assignment(body: dict = Body(...)):
        draft = from_dict(Kind.ASSIGNMENT, body)
        if draft.id is not None:
            raise ValidationFailed("POST creates a new assignment")
        assignment = assign_homework(
            store,
            draft.child_id,
            draft.predefined_homework_id,
            draft.assigned_date,
            draft.deadline_days,
        )
        return to_dict(assignment)

    @app.get("/assignments/{entity_id}")
    def get_assignment(entity_id: int):
        return to_dict(store.get(Kind.ASSIGNMENT, entity_id))

    @app.delete("/assignments/{entity_id}", status_code=204)
    def delete_assignment(entity_id: int):
        store.delete(Kind.ASSIGNMENT, entity_id)
        return Response(status_code=204)

    @app.get("/assignments/{entity_id}/status")
    def get_status(entity_id: int, today: Optional[str] = None):
        assignment = store.get(Kind.ASSIGNMENT, entity_id)
        as_of = _parse_date(today, "today") if today else date.today()
        return {
            "assignmentId": entity_id,
            "today": as_of.isoformat(),
            "dueDate": due_date(assignment).isoformat(),
            "status": assignment_status(assignment, as_of).value,
        }

    @app.post("/assignments/{entity_id}/report")
    def post_report(entity_id: int, body: dict = Body(...)):
        assignment_id, report_date, records = parse_report_intake(body, entity_id)
        outcomes = ingest_report(store, assignment_id, report_date, records)
        return {
            "assignmentId": assignment_id,
            "reportDate": report_date.isoformat(),
            "outcomes": [outcome_payload(o) for o in outcomes],
        }

    @app.get("/assignments/{entity_id}/outcomes")
    def get_outcomes(entity_id: int):
        assignment: HomeworkAssignment = store.get(Kind.ASSIGNMENT, entity_id)
        outcomes = exercise_outcomes(store, entity_id)
        return {
            "assignmentId": entity_id,
            "reported": assignment.report_date is not None,
            "reportDate": assignment.report_date.isoformat() if assignment.report_date else None,
            "outcomes": [outcome_payload(o) for o in outcomes],
        }

    @app.get("/assignments/{entity_id}/bundle")
    def download_bundle(entity_id: int):
        with tempfile.TemporaryDirectory() as tmp:
            path = export_bundle(store, entity_id, Path(tmp))
            payload = path.read_bytes()
        return Response(
            content=payload,
            media_type="application/zip",
            headers={
                "Content-Disposition": f'attachment; filename="assignment-{entity_id}-bundle.zip"'
            },
        )

    @app.post("/assignments/{entity_id}/results")
    async def upload_results(entity_id: int, file: UploadFile):
        with tempfile.TemporaryDirectory() as tmp:
            staged = Path(tmp) / "results.zip"
            staged.write_bytes(await file.read())
            parsed = read_result_bundle(staged)
            if parsed.assignment_id != entity_id:
                raise ValidationFailed(
                    f"result bundle is for assignment {parsed.assignment_id},"
                    f" not {entity_id}"
                )
            outcomes = import_result_bundle(store, staged)
        return {
            "assignmentId": entity_id,
            "reportDate": parsed.report_date.isoformat(),
            "outcomes": [outcome_payload(o) for o in outcomes],
        }

    @app.get("/children/{entity_id}/progress")
    def get_progress(entity_id: int):
        return progress_payload(child_progress(store, entity_id))

    @app.get("/due-date")
    def preview_due_date(
        assigned_date: str = Query(alias="assignedDate"),
        deadline_days: int = Query(alias="deadlineDays", ge=1),
    ):
        draft = HomeworkAssignment(
            child_id=1,
            predefined_homework_id=1,
            assigned_date=_parse_date(assigned_date, "assignedDate"),
            deadline_days=deadline_days,
        )
        return {"dueDate": due_date(draft).isoformat()}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


# ---------------------------------------------------------------------------
# Process entrypoints


@dataclass
class ServiceConfig:
    bind_address: str = DEFAULT_BIND
    data_root: Path = field(default_factory=default_data_root)
    ui_dir: Optional[Path] = None


class ServiceHandle:
    """A running API server; shutdown() finishes in-flight requests first."""

    def __init__(self, server: uvicorn.Server, thread: threading.Thread, store: Store, port: int):
        self._server = server
        self._thread = thread
        self.store = store
        self.port = port

    def shutdown(self) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)
        self.store.close()


def _split_bind(bind_address: str) -> tuple[str, int]:
    host, _, port = bind_address.rpartition(":")
    if not host or not port.isdigit():
        raise BindFailure(f"bind address must look like host:port, got {bind_address!r}")
    return host, int(port)


def serve(config: ServiceConfig) -> ServiceHandle:
    """Start the service in a background thread and wait until it listens."""
    store = Store(config.data_root)
    app = create_app(store, ui_dir=config.ui_dir)
    host, port = _split_bind(config.bind_address)
    server = uvicorn.Server(uvicorn.Config(app, host=host, port=port, log_level="warning"))

    def run_server() -> None:
        try:
            server.run()
        except SystemExit:  # uvicorn exits the thread on startup failure
            pass

    thread = threading.Thread(target=run_server, daemon=True, name="logokit-api")
    thread.start()
    deadline = time.monotonic() + 10
    while time.monotonic() < deadline:
        if server.started:
            try:  # resolve the real port (supports binding port 0 in tests)
                port = server.servers[0].sockets[0].getsockname()[1]
            except (IndexError, AttributeError):
                pass
            return ServiceHandle(server, thread, store, port)
        if not thread.is_alive():
            break
        time.sleep(0.02)
    store.close()
    raise BindFailure(f"could not bind {config.bind_address}")


def load_config(path: Optional[Path], overrides: argparse.Namespace) -> ServiceConfig:
    """flags > config file > environment/defaults."""
    config = ServiceConfig()
    if path is not None:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
        unknown = set(raw) - {"bind", "data_root", "ui_dir"}
        if unknown:
            raise ValidationFailed(f"unknown config keys: {sorted(unknown)}")
        if "bind" in raw:
            config.bind_address = str(raw["bind"])
        if "data_root" in raw:
            config.data_root = Path(raw["data_root"])
        if "ui_dir" in raw:
            config.ui_dir = Path(raw["ui_dir"])
    if overrides.bind:
        config.bind_address = overrides.bind
    if overrides.data_root:
        config.data_root = Path(overrides.data_root)
    if overrides.ui_dir:
        config.ui_dir = Path(overrides.ui_dir)
    return config


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="logokit-api", description="Serve the therapy-content HTTP API."
    )
    parser.add_argument("--bind", help=f"host:port to listen on (default {DEFAULT_BIND})")
    parser.add_argument("--data-root", help="store directory (default $LOGOMON_DATA or ./logomon-data)")
    parser.add_argument("--config", help="TOML config file (keys: bind, data_root, ui_dir)")
    parser.add_argument("--ui-dir", help="directory of built console files to serve at /ui")
    args = parser.parse_args(argv)
    try:
        config = load_config(Path(args.config) if args.config else None, args)
        store = Store(config.data_root)
        app = create_app(store, ui_dir=config.ui_dir)
        host, port = _split_bind(config.bind_address)
        uvicorn.run(app, host=host, port=port, log_level="info")
    except DomainError as exc:
        print(f"{exc.code}: {exc.message}", file=sys.stderr)
        return 1
    return 0


def entrypoint() -> None:  # console script
    raise SystemExit(main())
