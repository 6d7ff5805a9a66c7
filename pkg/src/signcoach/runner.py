"""Headless session driving: scripted event loops, event-log emission, and
deterministic replay."""

from __future__ import annotations

from dataclasses import dataclass

from . import files
from .handshape import HandshapeLibrary
from .session import (
    Abort,
    ComparisonDone,
    FeedbackAcknowledged,
    IllegalEvent,
    Lesson,
    Phase,
    PipelineConfig,
    RecordingCaptured,
    SessionConfig,
    SessionEvent,
    SessionState,
    StartPressed,
    Tick,
    advance_state,
    attempt_pipeline,
)
from .skeleton import SignTemplate


def event_to_dict(event: SessionEvent) -> dict:
    if isinstance(event, StartPressed):
        return {"type": "start_pressed"}
    if isinstance(event, Tick):
        return {"type": "tick", "elapsed_ms": event.elapsed_ms}
    if isinstance(event, RecordingCaptured):
        return {"type": "recording_captured"}
    if isinstance(event, ComparisonDone):
        return {"type": "comparison_done", "result": files.result_to_dict(event.result)}
    if isinstance(event, FeedbackAcknowledged):
        return {"type": "feedback_acknowledged"}
    if isinstance(event, Abort):
        return {"type": "abort"}
    raise ValueError(f"unknown event {event!r}")


@dataclass(frozen=True)
class ReplayedResult:
    """Lightweight stand-in for a ComparisonResult when replaying a log."""

    template_id: str
    accuracy: float
    passed: bool


def event_from_dict(doc: dict) -> SessionEvent:
    kind = doc.get("type")
    if kind == "start_pressed":
        return StartPressed()
    if kind == "tick":
        return Tick(elapsed_ms=int(doc["elapsed_ms"]))
    if kind == "recording_captured":
        return RecordingCaptured()
    if kind == "comparison_done":
        r = doc["result"]
        return ComparisonDone(result=ReplayedResult(
            template_id=r["template_id"], accuracy=r["accuracy"], passed=r["passed"]))
    if kind == "feedback_acknowledged":
        return FeedbackAcknowledged()
    if kind == "abort":
        return Abort()
    raise ValueError(f"unknown event type {kind!r}")


@dataclass
class SessionLog:
    lines: list[dict]

    def phases(self) -> list[str]:
        return [line["phase_after"] for line in self.lines]


def drive_lesson(lesson: Lesson, templates: dict[str, SignTemplate],
                 library: HandshapeLibrary, attempts,
                 pipeline_cfg: PipelineConfig | None = None,
                 session_cfg: SessionConfig | None = None):
    """Run a full lesson from a scripted list of attempts.

    attempts is a sequence of (sequence, hands) pairs consumed in order, one
    per Recording phase.  Returns (SessionLog, results).
    """
    session_cfg = session_cfg or SessionConfig()
    state = SessionState.initial()
    log: list[dict] = []
    results = []
    clock = 0
    attempt_iter = iter(attempts)

    def apply(event: SessionEvent):
        nonlocal state
        state = advance_state(state, event, lesson, templates, session_cfg)
        log.append({"t": clock, "event": event_to_dict(event),
                    "phase_after": state.phase.value})

    while state.phase is not Phase.COMPLETE:
        if state.phase is Phase.PRESENTING:
            apply(StartPressed())
        elif state.phase is Phase.COUNTDOWN:
            clock += state.remaining_ms
            apply(Tick(elapsed_ms=session_cfg.countdown_ms))
        elif state.phase is Phase.RECORDING:
            clock += session_cfg.recording_ms
            try:
                seq, hands = next(attempt_iter)
            except StopIteration:
                apply(Abort())
                break
            apply(RecordingCaptured(sequence=seq, hands=tuple(hands)))
            template = templates[lesson.sign_ids[state.sign_index]]
            result = attempt_pipeline(template, seq, hands, library,
                                      lesson.threshold, pipeline_cfg)
            results.append(result)
            apply(ComparisonDone(result=result))
        elif state.phase is Phase.SHOWING_FEEDBACK:
            apply(FeedbackAcknowledged())
        else:  # pragma: no cover - COMPARING resolves synchronously above
            raise IllegalEvent(state.phase, None)

    return SessionLog(lines=log), results


def replay_log(log: SessionLog, lesson: Lesson,
               session_cfg: SessionConfig | None = None) -> list[str]:
    """Re-run the logged events through advance_state; returns the phase
    sequence, which must match the log exactly for a faithful recording."""
    state = SessionState.initial()
    phases = []
    for line in log.lines:
        state = advance_state(state, event_from_dict(line["event"]), lesson,
                              None, session_cfg)
        phases.append(state.phase.value)
    return phases
