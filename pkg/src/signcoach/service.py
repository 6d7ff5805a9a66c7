"""HTTP API over the store and session machinery.

Sessions live in memory with their event history appended to
sessions/{id}.session.jsonl; restarting the service and replaying a log
reproduces identical states.  Events to one session are serialized by a
per-session lock."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import files
from .feedback import FeedbackMode, NothingToShow, generate_feedback
from .files import SchemaViolation, canonical_json
from .handshape import HandshapeLibrary
from .session import (
    ComparisonDone,
    IllegalEvent,
    Phase,
    PipelineConfig,
    PoorTracking,
    RecordingCaptured,
    SessionConfig,
    SessionState,
    advance_state,
    attempt_pipeline,
)
from .runner import event_from_dict, event_to_dict
from .skeleton import DegenerateSkeleton, SignTemplate
from .store import Conflict, NotFound, Store, new_ulid


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)


@dataclass
class SessionEntry:
    lesson: object
    templates: dict[str, SignTemplate]
    library: HandshapeLibrary
    state: SessionState
    results: list = field(default_factory=list)
    clock_ms: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


def _state_to_dict(entry: SessionEntry) -> dict:
    state = entry.state
    doc = {
        "phase": state.phase.value,
        "sign_index": state.sign_index,
        "attempts_made": state.attempts_made,
        "results_count": len(entry.results),
    }
    if state.phase is not Phase.COMPLETE:
        doc["current_sign"] = entry.lesson.sign_ids[state.sign_index]
    if state.remaining_ms is not None:
        doc["remaining_ms"] = state.remaining_ms
    if state.artifact is not None:
        doc["artifact"] = state.artifact.to_fb1()
    return doc


def create_app(store_root, pipeline_cfg: PipelineConfig | None = None,
               session_cfg: SessionConfig | None = None) -> FastAPI:
    store = Store(store_root)
    pipeline_cfg = pipeline_cfg or PipelineConfig()
    session_cfg = session_cfg or SessionConfig()
    sessions: dict[str, SessionEntry] = {}
    app = FastAPI(title="signcoach")

    @app.exception_handler(ApiError)
    async def handle_api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message,
                                     "detail": exc.detail})

    def _load_library() -> HandshapeLibrary:
        ids = store.list_ids("hands")
        if not ids:
            raise ApiError(404, "NotFound", "no handshape library in store")
        lib_id = "default" if "default" in ids else ids[0]
        return files.parse_library(store.get("hands", lib_id))

    def _load_template(template_id: str) -> SignTemplate:
        try:
            return files.parse_template(store.get("templates", template_id))
        except NotFound:
            raise ApiError(404, "NotFound", f"template {template_id!r} not found")

    def _get_session(session_id: str) -> SessionEntry:
        entry = sessions.get(session_id)
        if entry is None:
            raise ApiError(404, "NotFound", f"session {session_id!r} not found")
        return entry

    @app.get("/api/health")
    def health():
        return {"ok": True}

    @app.get("/api/lessons")
    def list_lessons():
        return {"lessons": store.list_ids("lessons")}

    @app.get("/api/lessons/{lesson_id}")
    def get_lesson(lesson_id: str):
        try:
            return store.get("lessons", lesson_id)
        except NotFound:
            raise ApiError(404, "NotFound", f"lesson {lesson_id!r} not found")

    @app.get("/api/templates/{template_id}")
    def get_template(template_id: str):
        try:
            return store.get("templates", template_id)
        except NotFound:
            raise ApiError(404, "NotFound", f"template {template_id!r} not found")

    @app.post("/api/sessions")
    def create_session(body: dict):
        lesson_id = body.get("lesson_id")
        if not lesson_id:
            raise ApiError(400, "SchemaViolation", "lesson_id is required")
        try:
            lesson = files.parse_lesson(store.get("lessons", lesson_id))
        except NotFound:
            raise ApiError(404, "NotFound", f"lesson {lesson_id!r} not found")
        templates = {sid: _load_template(sid) for sid in lesson.sign_ids}
        entry = SessionEntry(lesson=lesson, templates=templates,
                             library=_load_library(),
                             state=SessionState.initial())
        session_id = new_ulid()
        sessions[session_id] = entry
        return {"session_id": session_id, "state": _state_to_dict(entry)}

    def _log_event(session_id: str, entry: SessionEntry, event_doc: dict):
        line = {"t": entry.clock_ms, "event": event_doc,
                "phase_after": entry.state.phase.value}
        path = store.session_log_path(session_id)
        with path.open("a", encoding="utf-8") as fh:
            fh.write(canonical_json(line) + "\n")

    @app.post("/api/sessions/{session_id}/events")
    def post_event(session_id: str, body: dict):
        entry = _get_session(session_id)
        event_doc = body.get("event")
        if not isinstance(event_doc, dict):
            raise ApiError(400, "SchemaViolation", "body must carry an event object")
        with entry.lock:
            try:
                if event_doc.get("type") == "recording_captured":
                    _handle_recording(session_id, entry, event_doc)
                else:
                    event = event_from_dict(event_doc)
                    if isinstance(event, ComparisonDone):
                        raise ApiError(400, "SchemaViolation",
                                       "comparison_done is produced by the service")
                    if event_doc.get("type") == "tick":
                        entry.clock_ms += int(event_doc.get("elapsed_ms", 0))
                    entry.state = advance_state(entry.state, event, entry.lesson,
                                                entry.templates, session_cfg)
                    _log_event(session_id, entry, event_doc)
            except IllegalEvent as e:
                raise ApiError(409, "IllegalEvent", str(e),
                               {"phase": e.phase.value, "event": event_doc.get("type")})
            except (ValueError, KeyError) as e:
                raise ApiError(400, "SchemaViolation", str(e))
        return {"state": _state_to_dict(entry)}

    def _handle_recording(session_id: str, entry: SessionEntry, event_doc: dict):
        attempt_doc = event_doc.get("attempt")
        if not isinstance(attempt_doc, dict):
            raise ApiError(400, "SchemaViolation",
                           "recording_captured must carry an attempt payload")
        try:
            _rid, _gloss, seq, hands = files.parse_recording(attempt_doc)
        except SchemaViolation as e:
            raise ApiError(400, "SchemaViolation", e.reason, {"path": e.path})

        template = entry.templates[entry.lesson.sign_ids[entry.state.sign_index]]
        entry.state = advance_state(entry.state, RecordingCaptured(),
                                    entry.lesson, entry.templates, session_cfg)
        _log_event(session_id, entry, {"type": "recording_captured"})

        try:
            result = attempt_pipeline(template, seq, hands, entry.library,
                                      entry.lesson.threshold, pipeline_cfg)
        except (PoorTracking, DegenerateSkeleton) as e:
            raise ApiError(400, "SchemaViolation", str(e))
        entry.results.append(result)
        ulid = new_ulid()
        store.put("attempts", f"attempt-{ulid}", attempt_doc)
        store.put("results", f"result-{ulid}", files.result_to_dict(result))
        entry.state = advance_state(entry.state, ComparisonDone(result=result),
                                    entry.lesson, entry.templates, session_cfg)
        _log_event(session_id, entry,
                   event_to_dict(ComparisonDone(result=result)))

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        entry = _get_session(session_id)
        return {"session_id": session_id, "state": _state_to_dict(entry)}

    @app.get("/api/sessions/{session_id}/result/{n}")
    def get_result(session_id: str, n: int):
        entry = _get_session(session_id)
        if not (0 <= n < len(entry.results)):
            raise ApiError(404, "NotFound", f"result {n} not found")
        return files.result_to_dict(entry.results[n])

    @app.get("/api/feedback/{session_id}/{n}")
    def get_feedback(session_id: str, n: int, mode: str | None = None):
        entry = _get_session(session_id)
        if not (0 <= n < len(entry.results)):
            raise ApiError(404, "NotFound", f"result {n} not found")
        result = entry.results[n]
        try:
            fb_mode = FeedbackMode(mode) if mode else entry.lesson.feedback_mode
        except ValueError:
            raise ApiError(400, "SchemaViolation", f"unknown feedback mode {mode!r}")
        template = entry.templates[result.template_id]
        try:
            artifact = generate_feedback(fb_mode, result, template)
        except NothingToShow as e:
            raise ApiError(404, "NotFound", str(e), {"reason": "nothing-to-show"})
        return artifact.to_fb1()

    app.state.store = store
    app.state.sessions = sessions
    return app
