"""HTTP service: document ingestion, interactive sessions, scenes.

Endpoints (all JSON):
  POST /documents                 SEPT body -> {document_id}
  POST /sessions                  {document_id, config?, seed?} -> session + root scene
  POST /sessions/{id}/expand      {frame_id} -> child scene
  POST /sessions/{id}/back        -> parent scene
  GET  /sessions/{id}/scene       -> current scene
  GET  /health

Sessions are persisted to an embedded file store as (document, config, the
expansion paths already materialized, the navigation path); everything is
deterministic from those, so a reloaded session replays to the same state.
Responses are canonical JSON so identical requests produce identical bytes.
Per-session mutations are serialized by a lock; sessions never block each
other.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from anyio import to_thread
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .config import EngineConfig, config_from_dict
from .dmr import generate_dmr
from .mlmr import MlmrError, Session, open_session
from .ontology import Ontology, load_ontology
from .pipeline import make_cache, make_provider, scene_for_mr
from .sept import SeptDocument, SeptError, SeptParseError, parse_sept_document


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass
class SessionRecord:
    session_id: str
    document_id: str
    config: EngineConfig
    config_raw: dict
    session: Session
    created: float = field(default_factory=time.time)
    updated: float = 0.0
    expanded: list[list[str]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """One JSON file per session; load errors mark the record unrecoverable."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def persist(self, record: SessionRecord) -> None:
        record.updated = time.time()
        payload = {
            "session_id": record.session_id,
            "document_id": record.document_id,
            "config": record.config_raw,
            "expanded": record.expanded,
            "path": record.session.path(),
            "created": record.created,
            "updated": record.updated,
        }
        path = self.directory / f"{record.session_id}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")
        tmp.replace(path)

    def load_raw(self, session_id: str) -> dict:
        path = self.directory / f"{session_id}.json"
        if not path.exists():
            raise ServiceError(404, f"unknown session '{session_id}'")
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            for key in ("session_id", "document_id", "config", "expanded", "path"):
                if key not in payload:
                    raise KeyError(key)
            return payload
        except (json.JSONDecodeError, KeyError) as exc:
            raise ServiceError(
                422, f"session '{session_id}' is unrecoverable: corrupt record ({exc})"
            ) from exc


class Engine:
    """Shared state behind the endpoints; also usable without HTTP in tests."""

    def __init__(self, onto: Ontology, config: EngineConfig, store: SessionStore):
        self.onto = onto
        self.config = config
        self.store = store
        self.documents: dict[str, SeptDocument] = {}
        self.sessions: dict[str, SessionRecord] = {}
        self._scene_cache: dict[tuple, str] = {}

    def add_document(self, body: bytes) -> str:
        try:
            doc = parse_sept_document(body)
        except SeptParseError as exc:
            raise ServiceError(400, str(exc)) from exc
        except SeptError as exc:
            raise ServiceError(422, str(exc)) from exc
        doc_id = hashlib.sha256(body).hexdigest()[:16]
        self.documents[doc_id] = doc
        return doc_id

    def _session_config(self, overrides: dict | None, seed: int | None) -> tuple[EngineConfig, dict]:
        raw = dict(overrides or {})
        if seed is not None:
            raw["seed"] = seed
        if not raw:
            return self.config, raw
        cfg = config_from_dict(json.loads(json.dumps(raw)))
        if "images" not in raw:
            # keep the server's provider setup unless the session overrides it
            cfg = dataclasses.replace(cfg, manifest_path=self.config.manifest_path,
                                      cache_dir=self.config.cache_dir)
        return cfg, raw

    def create_session(self, document_id: str, overrides: dict | None = None,
                       seed: int | None = None, session_id: str | None = None,
                       expanded: list[list[str]] | None = None,
                       path: list[str] | None = None) -> SessionRecord:
        doc = self.documents.get(document_id)
        if doc is None:
            raise ServiceError(404, f"unknown document '{document_id}'")
        cfg, raw = self._session_config(overrides, seed)
        try:
            dmr = generate_dmr(doc, self.onto)
            session = open_session(dmr, self.onto, cfg.mlmr)
        except Exception as exc:  # noqa: BLE001 - surfaced as validation failure
            raise ServiceError(422, f"cannot build session: {exc}") from exc
        record = SessionRecord(
            session_id=session_id or uuid.uuid4().hex[:12],
            document_id=document_id,
            config=cfg,
            config_raw=raw,
            session=session,
        )
        for expansion in expanded or []:
            self._materialize_path(record, expansion)
        for gid in path or []:
            record.session.expand(gid)
        self.sessions[record.session_id] = record
        self.store.persist(record)
        return record

    def _materialize_path(self, record: SessionRecord, path: list[str]) -> None:
        node = record.session.root
        for gid in path:
            node = record.session.materialize(node, gid)
        if path not in record.expanded:
            record.expanded.append(path)

    def get_session(self, session_id: str) -> SessionRecord:
        record = self.sessions.get(session_id)
        if record is not None:
            return record
        payload = self.store.load_raw(session_id)
        document_id = payload["document_id"]
        if document_id not in self.documents:
            raise ServiceError(404, f"document '{document_id}' of persisted session not loaded")
        record = self.create_session(
            document_id,
            overrides=payload["config"] or None,
            session_id=payload["session_id"],
            expanded=payload["expanded"],
            path=payload["path"],
        )
        record.created = payload.get("created", record.created)
        return record

    def scene_payload(self, record: SessionRecord) -> dict:
        session = record.session
        node = session.current()
        path = tuple(session.path())
        key = (record.document_id, json.dumps(record.config_raw, sort_keys=True), path)
        cached = self._scene_cache.get(key)
        if cached is None:
            provider = make_provider(record.config)
            cache = make_cache(record.config)
            scene = scene_for_mr(node.mr, self.onto, record.config, provider, cache,
                                 group_ids=node.group_ids, main_ids=node.main_ids,
                                 path=path)
            cached = scene.to_json()
            self._scene_cache[key] = cached
        return {
            "depth": session.depth - 1,
            "label": node.label,
            "path": list(path),
            "scene": json.loads(cached),
        }

    def expand(self, session_id: str, frame_id: str) -> dict:
        record = self.get_session(session_id)
        with record.lock:
            try:
                record.session.expand(frame_id)
            except MlmrError as exc:
                raise ServiceError(409, str(exc)) from exc
            expansion = record.session.path()
            if expansion not in record.expanded:
                record.expanded.append(expansion)
            self.store.persist(record)
            return self.scene_payload(record)

    def back(self, session_id: str) -> dict:
        record = self.get_session(session_id)
        with record.lock:
            try:
                record.session.go_back()
            except MlmrError as exc:
                raise ServiceError(409, str(exc)) from exc
            self.store.persist(record)
            return self.scene_payload(record)


def _canonical(payload: dict, status: int = 200) -> Response:
    return Response(content=json.dumps(payload, sort_keys=True, separators=(",", ":")),
                    media_type="application/json", status_code=status)


def create_app(ontology_path: str | Path | None = None,
               ontology: Ontology | None = None,
               config: EngineConfig | None = None,
               store_dir: str | Path = ".sessions") -> FastAPI:
    if ontology is None:
        if ontology_path is None:
            raise ValueError("create_app needs an ontology or an ontology path")
        ontology = load_ontology(Path(ontology_path).read_bytes())
    engine = Engine(ontology, config or EngineConfig(), SessionStore(store_dir))
    app = FastAPI(title="mindmapper", version="0.1.0")
    app.state.engine = engine

    @app.exception_handler(ServiceError)
    async def _service_error(_req: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.get("/health")
    async def health():
        return _canonical({"status": "ok"})

    # Engine calls are CPU/IO-bound and run in the thread pool so one
    # session's work (layout, image fetches) never stalls another's requests.

    @app.post("/documents")
    async def post_document(request: Request):
        body = await request.body()
        doc_id = await to_thread.run_sync(engine.add_document, body)
        return _canonical({"document_id": doc_id}, status=201)

    @app.post("/sessions")
    async def post_session(request: Request):
        try:
            payload = json.loads(await request.body() or b"{}")
        except json.JSONDecodeError as exc:
            raise ServiceError(400, f"malformed request body: {exc}") from exc
        document_id = payload.get("document_id")
        if not document_id:
            raise ServiceError(400, "missing 'document_id'")

        def build():
            record = engine.create_session(document_id,
                                           overrides=payload.get("config"),
                                           seed=payload.get("seed"))
            out = {"session_id": record.session_id}
            out.update(engine.scene_payload(record))
            return out

        return _canonical(await to_thread.run_sync(build), status=201)

    @app.post("/sessions/{session_id}/expand")
    async def post_expand(session_id: str, request: Request):
        try:
            payload = json.loads(await request.body() or b"{}")
        except json.JSONDecodeError as exc:
            raise ServiceError(400, f"malformed request body: {exc}") from exc
        frame_id = payload.get("frame_id")
        if not frame_id:
            raise ServiceError(400, "missing 'frame_id'")
        return _canonical(await to_thread.run_sync(engine.expand, session_id, frame_id))

    @app.post("/sessions/{session_id}/back")
    async def post_back(session_id: str):
        return _canonical(await to_thread.run_sync(engine.back, session_id))

    @app.get("/sessions/{session_id}/scene")
    async def get_scene(session_id: str):
        def current():
            return engine.scene_payload(engine.get_session(session_id))

        return _canonical(await to_thread.run_sync(current))

    return app
