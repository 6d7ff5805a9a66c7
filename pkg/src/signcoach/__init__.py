"""signcoach: sign-language practice engine.

Compares recorded skeleton motion against reference sign templates (dynamic
time warping for movement, particle-swarm handshape matching), scores
attempts against selectable thresholds, and generates five feedback
modalities inside a present / record / compare / feedback session loop.
"""

from .alignment import Alignment, BandInfeasible, DtwConfig, dtw_align, frame_distance, movement_score
from .feedback import (
    CorrectionPolicy,
    FeedbackArtifact,
    FeedbackMode,
    NothingToShow,
    generate_feedback,
    select_corrections,
)
from .handshape import (
    EmptyLibrary,
    HandshapeLibrary,
    HandshapeMatch,
    SwarmConfig,
    handshape_score_for_attempt,
    match_handshape,
    oracle_match,
    swarm_optimize,
)
from .scoring import (
    ComparisonResult,
    JointErrorReport,
    ScoringConfig,
    THRESHOLD_PRESETS,
    combine,
    gate,
    localize_errors,
)
from .session import (
    IllegalEvent,
    Lesson,
    Phase,
    PipelineConfig,
    PoorTracking,
    SessionConfig,
    SessionState,
    advance_state,
    attempt_pipeline,
)
from .skeleton import (
    DegenerateSkeleton,
    Frame,
    HandObservation,
    Handshape,
    JointId,
    NormalizedSequence,
    SignTemplate,
    SkeletonSequence,
    SpaceViolation,
    normalize,
    resample,
    validate_signing_space,
)

__version__ = "0.1.0"
