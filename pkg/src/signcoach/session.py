"""The practice loop: present, countdown, record, compare, feedback or
advance — a pure state machine driven by explicit events, plus the two-phase
attempt pipeline it schedules."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .alignment import DtwConfig, dtw_align, movement_score
from .feedback import FeedbackArtifact, FeedbackMode, NothingToShow, generate_feedback
from .handshape import HandshapeLibrary, SwarmConfig, handshape_score_for_attempt
from .scoring import ComparisonResult, ScoringConfig, combine, gate, localize_errors
from .skeleton import (
    SigningSpaceConfig,
    SignTemplate,
    SkeletonSequence,
    normalize,
    untracked_fraction,
    validate_signing_space,
)

DEFAULT_COUNTDOWN_MS = 3000
DEFAULT_RECORDING_MS = 5000


class PoorTracking(ValueError):
    """Too many untracked samples on an active joint; the attempt should be
    re-recorded."""


class IllegalEvent(ValueError):
    """An event arrived in a phase where it is not legal — a driver bug."""

    def __init__(self, phase: "Phase", event: "SessionEvent"):
        self.phase = phase
        self.event = event
        super().__init__(f"event {type(event).__name__} illegal in phase {phase.value}")


class Phase(Enum):
    PRESENTING = "presenting"
    COUNTDOWN = "countdown"
    RECORDING = "recording"
    COMPARING = "comparing"
    SHOWING_FEEDBACK = "showing_feedback"
    COMPLETE = "complete"


@dataclass(frozen=True)
class Lesson:
    id: str
    sign_ids: tuple[str, ...]
    threshold: float = 60.0
    feedback_mode: FeedbackMode = FeedbackMode.RECAST
    max_attempts_before_advance: int | None = 5  # None = unlimited

    def __post_init__(self):
        signs = tuple(self.sign_ids)
        if not signs:
            raise ValueError("lesson needs at least one sign")
        from .scoring import THRESHOLD_PRESETS
        if self.threshold not in THRESHOLD_PRESETS:
            raise ValueError(f"threshold must be one of {THRESHOLD_PRESETS}")
        object.__setattr__(self, "sign_ids", signs)


@dataclass(frozen=True)
class SessionConfig:
    countdown_ms: int = DEFAULT_COUNTDOWN_MS
    recording_ms: int = DEFAULT_RECORDING_MS


@dataclass(frozen=True)
class SessionState:
    phase: Phase
    sign_index: int = 0
    attempts_made: int = 0
    remaining_ms: int | None = None       # Countdown / Recording only
    artifact: FeedbackArtifact | None = None  # ShowingFeedback only
    history: tuple[ComparisonResult, ...] = ()

    @classmethod
    def initial(cls) -> "SessionState":
        return cls(phase=Phase.PRESENTING)


# -- events ------------------------------------------------------------------

@dataclass(frozen=True)
class SessionEvent:
    pass


@dataclass(frozen=True)
class StartPressed(SessionEvent):
    pass


@dataclass(frozen=True)
class Tick(SessionEvent):
    elapsed_ms: int


@dataclass(frozen=True)
class RecordingCaptured(SessionEvent):
    sequence: SkeletonSequence | None = None
    hands: tuple = ()


@dataclass(frozen=True)
class ComparisonDone(SessionEvent):
    result: ComparisonResult = None


@dataclass(frozen=True)
class FeedbackAcknowledged(SessionEvent):
    pass


@dataclass(frozen=True)
class Abort(SessionEvent):
    pass


def _advance_sign(state: SessionState, lesson: Lesson) -> SessionState:
    nxt = state.sign_index + 1
    if nxt >= len(lesson.sign_ids):
        return replace(state, phase=Phase.COMPLETE, sign_index=state.sign_index,
                       attempts_made=0, remaining_ms=None, artifact=None)
    return replace(state, phase=Phase.PRESENTING, sign_index=nxt,
                   attempts_made=0, remaining_ms=None, artifact=None)


def advance_state(state: SessionState, event: SessionEvent, lesson: Lesson,
                  templates: dict[str, SignTemplate] | None = None,
                  cfg: SessionConfig | None = None) -> SessionState:
    """Pure transition function of the practice loop.

    templates is only needed to build feedback artifacts on failed
    comparisons; without it (e.g. log replay) failures fall back to Recast
    geometry-free feedback.
    """
    cfg = cfg or SessionConfig()
    phase = state.phase

    if isinstance(event, Abort) and phase is not Phase.COMPLETE:
        return replace(state, phase=Phase.COMPLETE, remaining_ms=None, artifact=None)

    if phase is Phase.PRESENTING and isinstance(event, StartPressed):
        return replace(state, phase=Phase.COUNTDOWN, remaining_ms=cfg.countdown_ms)

    if phase is Phase.COUNTDOWN and isinstance(event, Tick):
        remaining = state.remaining_ms - event.elapsed_ms
        if remaining <= 0:
            return replace(state, phase=Phase.RECORDING, remaining_ms=cfg.recording_ms)
        return replace(state, remaining_ms=remaining)

    if phase is Phase.RECORDING and isinstance(event, Tick):
        return replace(state, remaining_ms=max(0, state.remaining_ms - event.elapsed_ms))

    if phase is Phase.RECORDING and isinstance(event, RecordingCaptured):
        return replace(state, phase=Phase.COMPARING, remaining_ms=None)

    if phase is Phase.COMPARING and isinstance(event, ComparisonDone):
        result = event.result
        new_state = replace(state, history=state.history + (result,),
                            attempts_made=state.attempts_made + 1)
        if result.passed:
            return _advance_sign(new_state, lesson)
        artifact = _build_artifact(lesson, result, templates)
        return replace(new_state, phase=Phase.SHOWING_FEEDBACK, artifact=artifact)

    if phase is Phase.SHOWING_FEEDBACK and isinstance(event, FeedbackAcknowledged):
        limit = lesson.max_attempts_before_advance
        if limit is not None and state.attempts_made >= limit:
            return _advance_sign(state, lesson)
        return replace(state, phase=Phase.PRESENTING, artifact=None)

    raise IllegalEvent(phase, event)


def _build_artifact(lesson: Lesson, result: ComparisonResult,
                    templates: dict[str, SignTemplate] | None) -> FeedbackArtifact:
    template = (templates or {}).get(result.template_id)
    if template is None:
        return FeedbackArtifact(FeedbackMode.RECAST,
                                {"template_id": result.template_id, "replay": None})
    try:
        return generate_feedback(lesson.feedback_mode, result, template)
    except NothingToShow:
        return generate_feedback(FeedbackMode.RECAST, result, template)


# -- attempt pipeline --------------------------------------------------------

MAX_UNTRACKED_FRACTION = 0.3


@dataclass(frozen=True)
class PipelineConfig:
    """Everything the two-phase comparison needs, bar the template."""

    scoring: ScoringConfig = field(default_factory=ScoringConfig)
    swarm: SwarmConfig = field(default_factory=lambda: SwarmConfig(seed=0))
    space: SigningSpaceConfig = field(default_factory=SigningSpaceConfig)
    band_radius: int | None = None
    cost_scale: float = 0.8
    max_untracked: float = MAX_UNTRACKED_FRACTION


def attempt_pipeline(template: SignTemplate, raw: SkeletonSequence, hands,
                     library: HandshapeLibrary, threshold: float,
                     cfg: PipelineConfig | None = None) -> ComparisonResult:
    """Two-phase comparison of one attempt against one template.

    Movement phase: normalize, align with DTW, score the alignment cost.
    Handshape phase: match observations at each template keyframe.  The two
    scores are combined and gated; signing-space violations are attached as
    warnings and never fail the gate by themselves.
    """
    cfg = cfg or PipelineConfig()
    for joint, weight in template.active_joints.items():
        if weight > 0 and untracked_fraction(raw, joint) > cfg.max_untracked:
            raise PoorTracking(
                f"joint {joint.name} untracked on more than "
                f"{cfg.max_untracked:.0%} of samples; please re-record")

    attempt = normalize(raw)
    dtw_cfg = DtwConfig(joint_weights=template.active_joints,
                        band_radius=cfg.band_radius, cost_scale=cfg.cost_scale)
    alignment = dtw_align(template.sequence, attempt, dtw_cfg)
    movement = movement_score(alignment, dtw_cfg)

    hand_assessment = handshape_score_for_attempt(hands, template, library, cfg.swarm)

    accuracy = combine(movement, hand_assessment.score, cfg.scoring)
    passed = gate(accuracy, threshold)
    joint_errors = localize_errors(alignment, template.sequence, attempt,
                                   cfg.scoring, template.active_joints)
    violations = tuple(validate_signing_space(attempt, cfg.space))

    return ComparisonResult(
        template_id=template.id,
        movement_score=movement,
        handshape_score=hand_assessment.score,
        accuracy=accuracy,
        passed=passed,
        threshold_used=threshold,
        joint_errors=joint_errors,
        alignment=alignment,
        hand_data_absent=hand_assessment.hand_data_absent,
        handshape_keyframes=hand_assessment.keyframes,
        space_violations=violations,
        ref_sequence=template.sequence,
        attempt_sequence=attempt,
    )
