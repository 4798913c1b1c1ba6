"""HTTP session API backing the refinement console.

Sessions live in an in-memory store (optionally persisted to a directory as
session documents).  GLM-bound operations run on a worker thread: the
request returns immediately with status "querying" and clients poll the
session until its revision advances.  Requests to one session are
serialized by a per-session lock; every response carries a monotonically
increasing revision number.
"""

from __future__ import annotations

import pathlib
import threading
import uuid
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from taskfsa import fixtures, io, refine
from taskfsa.core import validate_model
from taskfsa.glm import GlmSession, ReplayBackend
from taskfsa.stepparse.lexicon import KEYWORDS

IDLE = "idle"
QUERYING = "querying"
VERIFYING = "verifying"
PASS = "pass"
FAIL = "fail"
UNREPRESENTABLE = "unrepresentable"
ERROR = "error"


class SessionResource:
    def __init__(self, sid: str):
        self.id = sid
        self.lock = threading.Lock()
        self.status = IDLE
        self.revision = 0
        self.session: Optional[refine.RefinementSession] = None
        self.error: Optional[str] = None

    def bump(self, status: str) -> None:
        self.status = status
        self.revision += 1


class SessionStore:
    def __init__(self, persist_dir: Optional[str] = None,
                 synchronous: bool = False):
        self.sessions: Dict[str, SessionResource] = {}
        self.order: List[str] = []
        self.persist_dir = pathlib.Path(persist_dir) if persist_dir else None
        # synchronous mode runs GLM-bound work inline (used by tests)
        self.synchronous = synchronous
        self.store_lock = threading.Lock()

    def create(self) -> SessionResource:
        sid = uuid.uuid4().hex[:12]
        resource = SessionResource(sid)
        with self.store_lock:
            self.sessions[sid] = resource
            self.order.append(sid)
        return resource

    def get(self, sid: str) -> SessionResource:
        resource = self.sessions.get(sid)
        if resource is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}")
        return resource

    def persist(self, resource: SessionResource) -> None:
        if self.persist_dir and resource.session is not None:
            self.persist_dir.mkdir(parents=True, exist_ok=True)
            path = self.persist_dir / f"{resource.id}.json"
            path.write_text(io.serialize(
                refine.session_payload(resource.session), kind="session"))


def _status_of(session: refine.RefinementSession) -> str:
    return {refine.STATUS_PASS: PASS, refine.STATUS_FAIL: FAIL,
            refine.STATUS_UNREPRESENTABLE: UNREPRESENTABLE}[session.status]


def _public_state(resource: SessionResource) -> dict:
    state = {
        "id": resource.id,
        "status": resource.status,
        "revision": resource.revision,
        "error": resource.error,
    }
    session = resource.session
    if session is not None:
        payload = refine.session_payload(session)
        iterations = []
        for i, rec in enumerate(payload["history"]):
            iterations.append({
                "index": i + 1,
                "kind": rec["kind"],
                "prompt": rec["prompt"],
                "steps": rec["steps"],
                "results": rec["results"],
                "dot": {
                    "controller": f"/sessions/{resource.id}/dot/controller-{i + 1}",
                },
            })
        state.update({
            "task": payload["task"],
            "steps": payload["steps"],
            "specs": payload["specs"],
            "depth": payload["depth"],
            "max_depth": payload["max_depth"],
            "synonyms": payload["synonyms"],
            "iterations": iterations,
            "dot": {
                "controller": f"/sessions/{resource.id}/dot/controller",
                "model": f"/sessions/{resource.id}/dot/model",
            },
        })
    return state


def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    app = FastAPI(title="taskfsa session service")
    app.state.store = store or SessionStore()

    def launch(resource: SessionResource, work) -> None:
        def run():
            try:
                with resource.lock:
                    work()
                    resource.bump(_status_of(resource.session))
                    app.state.store.persist(resource)
            except Exception as exc:  # surfaced to clients via status=error
                resource.error = str(exc)
                resource.bump(ERROR)

        if app.state.store.synchronous:
            run()
        else:
            threading.Thread(target=run, daemon=True).start()

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "sessions": len(app.state.store.sessions)}

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": [
            {"id": sid, "status": app.state.store.sessions[sid].status,
             "revision": app.state.store.sessions[sid].revision}
            for sid in app.state.store.order
        ]}

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        task = body.get("task", "")
        if not task.strip():
            raise HTTPException(status_code=422, detail="task must be non-empty")
        try:
            if "model" in body:
                model = io.model_from_payload(body["model"])
            else:
                model = fixtures.load_model(body["model_fixture"])
            issues = validate_model(model)
            if issues:
                raise HTTPException(status_code=422,
                                    detail="invalid model: " + "; ".join(issues))
            specs = []
            from taskfsa.verify import parse_ltl

            for spec in body.get("specs", []):
                specs.append((spec.get("name", spec["formula"]),
                              parse_ltl(spec["formula"])))
            if not specs:
                raise HTTPException(status_code=422, detail="at least one spec required")
            backend_cfg = body.get("backend", {})
            if "transcript_fixture" in backend_cfg:
                transcript = fixtures.load_transcript(backend_cfg["transcript_fixture"])
            elif "transcript" in backend_cfg:
                transcript = io.transcript_from_payload(backend_cfg["transcript"])
            else:
                raise HTTPException(status_code=422,
                                    detail="replay transcript required (live backend "
                                           "is CLI-only)")
        except HTTPException:
            raise
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=f"missing field {exc}")
        except Exception as exc:
            raise HTTPException(status_code=422, detail=str(exc))

        glm = GlmSession(ReplayBackend(transcript), keywords=KEYWORDS)
        resource = app.state.store.create()
        resource.bump(QUERYING)
        max_depth = int(body.get("max_depth", 3))

        def work():
            resource.session = refine.create_session(
                task, model, specs, glm, depth=int(body.get("depth", 1)),
                max_depth=max_depth)

        launch(resource, work)
        return _public_state(resource)

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return _public_state(app.state.store.get(sid))

    def _refinable(resource: SessionResource) -> refine.RefinementSession:
        if resource.status in (QUERYING, VERIFYING):
            raise HTTPException(status_code=409, detail="operation in progress")
        if resource.session is None:
            raise HTTPException(status_code=409, detail="session not initialized")
        return resource.session

    @app.post("/sessions/{sid}/refine-manual")
    def refine_manual(sid: str, body: dict):
        resource = app.state.store.get(sid)
        session = _refinable(resource)
        if resource.status != FAIL:
            raise HTTPException(status_code=409,
                                detail="manual refinement requires a failing verdict")
        instruction = body.get("instruction", "")
        if not instruction.strip():
            raise HTTPException(status_code=422, detail="instruction must be non-empty")
        resource.bump(QUERYING)

        def work():
            try:
                refine.manual_refine(session, instruction)
            except Exception:
                raise

        launch(resource, work)
        return _public_state(resource)

    @app.post("/sessions/{sid}/refine-auto")
    def refine_auto(sid: str):
        resource = app.state.store.get(sid)
        session = _refinable(resource)
        if resource.status != FAIL:
            raise HTTPException(status_code=409,
                                detail="auto refinement requires a failing verdict")
        resource.bump(QUERYING)
        launch(resource, lambda: refine.auto_refine(session))
        return _public_state(resource)

    @app.post("/sessions/{sid}/prune")
    def prune_session(sid: str):
        resource = app.state.store.get(sid)
        session = _refinable(resource)
        if resource.status != PASS:
            raise HTTPException(status_code=409,
                                detail="pruning requires a passing controller")
        resource.bump(VERIFYING)
        launch(resource, lambda: refine.prune(session))
        return _public_state(resource)

    @app.get("/sessions/{sid}/dot/{artifact}", response_class=PlainTextResponse)
    def get_dot(sid: str, artifact: str):
        resource = app.state.store.get(sid)
        session = resource.session
        if session is None:
            raise HTTPException(status_code=409, detail="session not initialized")
        if artifact == "model":
            return io.export_dot(session.model, name="model")
        if artifact == "controller":
            return io.export_dot(session.controller, name="controller")
        if artifact.startswith("controller-"):
            try:
                index = int(artifact.split("-", 1)[1]) - 1
                record = session.history[index]
            except (ValueError, IndexError):
                raise HTTPException(status_code=404, detail=f"no artifact {artifact}")
            return io.export_dot(record.controller, name="controller")
        raise HTTPException(status_code=404, detail=f"no artifact {artifact}")

    @app.exception_handler(Exception)
    async def backend_errors(request, exc):  # pragma: no cover - safety net
        from fastapi.responses import JSONResponse
        from taskfsa.glm import BackendUnavailable, ReplayMiss

        if isinstance(exc, (BackendUnavailable, ReplayMiss)):
            return JSONResponse(status_code=502, content={"detail": str(exc)})
        if isinstance(exc, HTTPException):
            return JSONResponse(status_code=exc.status_code,
                                content={"detail": exc.detail})
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    return app
