import json

import pytest
from fastapi.testclient import TestClient

from signcoach import files
from signcoach.files import canonical_json
from signcoach.service import create_app
from signcoach.session import attempt_pipeline
from signcoach.skeleton import JointId
from signcoach.synth import ErrorSpec, synth_attempt


@pytest.fixture()
def client(sample_store, pipeline_cfg):
    app = create_app(sample_store, pipeline_cfg)
    with TestClient(app) as c:
        yield c


def load_template(sample_store, template_id):
    doc = json.loads((sample_store / "templates" / f"{template_id}.sign.json")
                     .read_text(encoding="utf-8"))
    return files.parse_template(doc)


def attempt_doc(template, library, specs=()):
    seq, hands = synth_attempt(template, list(specs), library)
    return files.recording_to_dict("attempt", template.gloss, seq, hands)


def start_session(client, lesson_id="wave-drill"):
    resp = client.post("/api/sessions", json={"lesson_id": lesson_id})
    assert resp.status_code == 200
    return resp.json()["session_id"]


def post_event(client, sid, event, expect=200):
    resp = client.post(f"/api/sessions/{sid}/events", json={"event": event})
    assert resp.status_code == expect, resp.text
    return resp.json()


def to_recording(client, sid):
    state = post_event(client, sid, {"type": "start_pressed"})["state"]
    assert state["phase"] == "countdown"
    assert state["remaining_ms"] == 3000
    state = post_event(client, sid, {"type": "tick", "elapsed_ms": 3000})["state"]
    assert state["phase"] == "recording"
    assert state["remaining_ms"] == 5000


class TestBasics:
    def test_health(self, client):
        assert client.get("/api/health").json() == {"ok": True}

    def test_lessons_listed_and_served(self, client):
        assert client.get("/api/lessons").json() == {"lessons": ["basics", "wave-drill"]}
        doc = client.get("/api/lessons/wave-drill").json()
        assert doc["signs"] == ["wave"]
        assert doc["threshold"] == 80.0

    def test_template_served(self, client):
        doc = client.get("/api/templates/wave").json()
        assert doc["id"] == "wave"
        assert len(doc["frames"]) == 51

    def test_missing_entities_404_with_error_shape(self, client):
        for url in ("/api/lessons/nope", "/api/templates/nope",
                    "/api/sessions/nope"):
            resp = client.get(url)
            assert resp.status_code == 404
            body = resp.json()
            assert body["code"] == "NotFound"
            assert set(body) == {"code", "message", "detail"}

    def test_create_session_needs_lesson_id(self, client):
        resp = client.post("/api/sessions", json={})
        assert resp.status_code == 400
        assert resp.json()["code"] == "SchemaViolation"

    def test_create_session_initial_state(self, client):
        resp = client.post("/api/sessions", json={"lesson_id": "basics"}).json()
        state = resp["state"]
        assert state["phase"] == "presenting"
        assert state["sign_index"] == 0
        assert state["current_sign"] == "wave"
        assert state["attempts_made"] == 0
        assert state["results_count"] == 0


class TestEventFlow:
    def test_full_pass_completes_lesson(self, client, sample_store, library):
        template = load_template(sample_store, "wave")
        sid = start_session(client)
        to_recording(client, sid)
        state = post_event(client, sid, {
            "type": "recording_captured",
            "attempt": attempt_doc(template, library)})["state"]
        assert state["phase"] == "complete"
        assert state["results_count"] == 1
        result = client.get(f"/api/sessions/{sid}/result/0").json()
        assert result["passed"] is True
        assert result["accuracy"] == pytest.approx(100.0, abs=1e-6)

    def test_http_result_matches_headless_byte_for_byte(
            self, client, sample_store, library, pipeline_cfg):
        template = load_template(sample_store, "wave")
        doc = attempt_doc(template, library,
                          [ErrorSpec(kind="joint-offset",
                                     joint=JointId.WRIST_RIGHT, axis="x",
                                     magnitude=0.2, frame_range=(10, 30))])
        sid = start_session(client)
        to_recording(client, sid)
        post_event(client, sid, {"type": "recording_captured", "attempt": doc})
        via_http = client.get(f"/api/sessions/{sid}/result/0").json()

        _rid, _g, seq, hands = files.parse_recording(doc)
        headless = attempt_pipeline(template, seq, hands, library, 80.0,
                                    pipeline_cfg)
        assert canonical_json(via_http) == canonical_json(
            files.result_to_dict(headless))

    def test_failed_attempt_shows_feedback_artifact(self, client, sample_store,
                                                    library):
        template = load_template(sample_store, "wave")
        specs = ([ErrorSpec(kind="joint-offset", joint=j, axis="x", magnitude=0.5)
                  for j in (JointId.ELBOW_RIGHT, JointId.WRIST_RIGHT,
                            JointId.HAND_RIGHT)]
                 + [ErrorSpec(kind="handshape-swap", keyframe_index=k,
                              replacement_id="fist") for k in (0, 1)])
        sid = start_session(client)
        to_recording(client, sid)
        state = post_event(client, sid, {
            "type": "recording_captured",
            "attempt": attempt_doc(template, library, specs)})["state"]
        assert state["phase"] == "showing_feedback"
        assert state["attempts_made"] == 1
        artifact = state["artifact"]
        assert artifact["schema"] == "fb/1"
        assert artifact["mode"] == "path_arrows"  # the lesson's mode
        assert artifact["arrows"]
        # acknowledge and loop back to presenting
        state = post_event(client, sid, {"type": "feedback_acknowledged"})["state"]
        assert state["phase"] == "presenting"

    def test_attempt_and_result_persisted(self, client, sample_store, library):
        from signcoach.store import Store
        template = load_template(sample_store, "wave")
        sid = start_session(client)
        to_recording(client, sid)
        post_event(client, sid, {"type": "recording_captured",
                                 "attempt": attempt_doc(template, library)})
        store = Store(sample_store)
        attempts = store.list_ids("attempts")
        results = store.list_ids("results")
        assert len(attempts) == 1 and attempts[0].startswith("attempt-")
        assert len(results) == 1 and results[0].startswith("result-")
        assert store.get("results", results[0])["passed"] is True

    def test_event_log_written_and_replayable(self, client, sample_store, library):
        from signcoach.runner import SessionLog, replay_log
        from signcoach.samples import sample_lessons
        template = load_template(sample_store, "wave")
        sid = start_session(client)
        to_recording(client, sid)
        post_event(client, sid, {"type": "recording_captured",
                                 "attempt": attempt_doc(template, library)})
        log_path = sample_store / "sessions" / f"{sid}.session.jsonl"
        lines = [json.loads(l) for l in log_path.read_text().splitlines()]
        assert [l["event"]["type"] for l in lines] == [
            "start_pressed", "tick", "recording_captured", "comparison_done"]
        lesson = [l for l in sample_lessons() if l.id == "wave-drill"][0]
        log = SessionLog(lines=lines)
        assert replay_log(log, lesson) == log.phases()


class TestErrorHandling:
    def test_illegal_event_409(self, client):
        sid = start_session(client)
        resp = client.post(f"/api/sessions/{sid}/events",
                           json={"event": {"type": "tick", "elapsed_ms": 100}})
        assert resp.status_code == 409
        body = resp.json()
        assert body["code"] == "IllegalEvent"
        assert body["detail"] == {"phase": "presenting", "event": "tick"}

    def test_client_comparison_done_rejected(self, client):
        sid = start_session(client)
        resp = client.post(
            f"/api/sessions/{sid}/events",
            json={"event": {"type": "comparison_done",
                            "result": {"template_id": "wave", "accuracy": 100.0,
                                       "passed": True}}})
        assert resp.status_code == 400
        assert "produced by the service" in resp.json()["message"]

    def test_malformed_attempt_400_names_path(self, client, sample_store, library):
        template = load_template(sample_store, "wave")
        doc = attempt_doc(template, library)
        doc["frames"][3]["joints"] = doc["frames"][3]["joints"][:19]
        sid = start_session(client)
        to_recording(client, sid)
        resp = client.post(f"/api/sessions/{sid}/events",
                           json={"event": {"type": "recording_captured",
                                           "attempt": doc}})
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "SchemaViolation"
        assert body["detail"] == {"path": "frames[3].joints"}
        # session is still usable: we stay in recording? no -- the parse failed
        # before any transition, so the phase is unchanged
        state = client.get(f"/api/sessions/{sid}").json()["state"]
        assert state["phase"] == "recording"

    def test_missing_attempt_payload_400(self, client):
        sid = start_session(client)
        to_recording(client, sid)
        resp = client.post(f"/api/sessions/{sid}/events",
                           json={"event": {"type": "recording_captured"}})
        assert resp.status_code == 400

    def test_unknown_event_type_400(self, client):
        sid = start_session(client)
        resp = client.post(f"/api/sessions/{sid}/events",
                           json={"event": {"type": "mystery"}})
        assert resp.status_code == 400

    def test_result_index_404(self, client):
        sid = start_session(client)
        assert client.get(f"/api/sessions/{sid}/result/0").status_code == 404


class TestFeedbackEndpoint:
    def _session_with_failure(self, client, sample_store, library):
        template = load_template(sample_store, "wave")
        specs = ([ErrorSpec(kind="joint-offset", joint=j, axis="x", magnitude=0.5)
                  for j in (JointId.ELBOW_RIGHT, JointId.WRIST_RIGHT,
                            JointId.HAND_RIGHT)]
                 + [ErrorSpec(kind="handshape-swap", keyframe_index=0,
                              replacement_id="fist")])
        sid = start_session(client)
        to_recording(client, sid)
        post_event(client, sid, {"type": "recording_captured",
                                 "attempt": attempt_doc(template, library, specs)})
        return sid

    def test_all_modes_on_demand(self, client, sample_store, library):
        sid = self._session_with_failure(client, sample_store, library)
        for mode in ("recast", "mirror", "path_arrows", "color_coding", "zoom"):
            body = client.get(f"/api/feedback/{sid}/0", params={"mode": mode}).json()
            assert body["schema"] == "fb/1"
            assert body["mode"] == mode

    def test_default_mode_is_lessons(self, client, sample_store, library):
        sid = self._session_with_failure(client, sample_store, library)
        body = client.get(f"/api/feedback/{sid}/0").json()
        assert body["mode"] == "path_arrows"

    def test_unknown_mode_400(self, client, sample_store, library):
        sid = self._session_with_failure(client, sample_store, library)
        resp = client.get(f"/api/feedback/{sid}/0", params={"mode": "sparkles"})
        assert resp.status_code == 400

    def test_nothing_to_show_404(self, client, sample_store, library):
        template = load_template(sample_store, "wave")
        sid = start_session(client)
        to_recording(client, sid)
        post_event(client, sid, {"type": "recording_captured",
                                 "attempt": attempt_doc(template, library)})
        resp = client.get(f"/api/feedback/{sid}/0", params={"mode": "zoom"})
        assert resp.status_code == 404
        assert resp.json()["detail"] == {"reason": "nothing-to-show"}
