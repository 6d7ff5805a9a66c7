"""Accuracy scoring: combine movement and handshape, gate against thresholds,
and localize errors per joint and per time window."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .alignment import Alignment
from .skeleton import JointId, NormalizedSequence, SpaceViolation

THRESHOLD_PRESETS = (40.0, 60.0, 80.0)

SKILL_PRESETS = {"beginner": 40.0, "intermediate": 60.0, "advanced": 80.0}


@dataclass(frozen=True)
class ScoringConfig:
    movement_weight: float = 0.5
    joint_tolerance: float = 0.15  # normalized units, ~6 cm on an adult
    window_min_frames: int = 3
    thresholds: tuple[float, ...] = THRESHOLD_PRESETS

    def __post_init__(self):
        if not (0.0 <= self.movement_weight <= 1.0):
            raise ValueError("movement_weight must be in [0, 1]")
        th = tuple(self.thresholds)
        if any(not (0.0 < t < 100.0) for t in th):
            raise ValueError("thresholds must be in (0, 100)")
        if any(b <= a for a, b in zip(th, th[1:])):
            raise ValueError("thresholds must be strictly increasing")
        object.__setattr__(self, "thresholds", th)

    @property
    def handshape_weight(self) -> float:
        return 1.0 - self.movement_weight


@dataclass(frozen=True)
class ErrorWindow:
    joint: JointId
    ref_start: int
    ref_end: int  # inclusive
    peak_deviation: float
    peak_ref_index: int


@dataclass(frozen=True)
class JointStatus:
    mean_deviation: float
    incorrect: bool


@dataclass(frozen=True)
class JointErrorReport:
    joints: dict[JointId, JointStatus]
    windows: tuple[ErrorWindow, ...]

    def incorrect_joints(self) -> list[JointId]:
        return [j for j, s in self.joints.items() if s.incorrect]


@dataclass(frozen=True)
class ComparisonResult:
    """Outcome of comparing one attempt against one template."""

    template_id: str
    movement_score: float
    handshape_score: float
    accuracy: float
    passed: bool
    threshold_used: float
    joint_errors: JointErrorReport
    alignment: Alignment
    hand_data_absent: bool = False
    handshape_keyframes: tuple = ()
    space_violations: tuple[SpaceViolation, ...] = ()
    # runtime-only, needed for feedback geometry; not serialized
    ref_sequence: NormalizedSequence | None = field(default=None, compare=False)
    attempt_sequence: NormalizedSequence | None = field(default=None, compare=False)


def combine(movement: float, handshape: float, cfg: ScoringConfig) -> float:
    """Weighted arithmetic mean of the two component scores."""
    if not (0.0 <= movement <= 100.0 and 0.0 <= handshape <= 100.0):
        raise ValueError("component scores must be in [0, 100]")
    return cfg.movement_weight * movement + cfg.handshape_weight * handshape


def gate(accuracy: float, threshold: float) -> bool:
    """Boundary inclusive: accuracy equal to the threshold passes."""
    if not (0.0 < threshold < 100.0):
        raise ValueError("threshold must be in (0, 100)")
    return accuracy >= threshold


def localize_errors(alignment: Alignment, ref: NormalizedSequence,
                    attempt: NormalizedSequence, cfg: ScoringConfig,
                    active_joints: dict[JointId, float]) -> JointErrorReport:
    """Per-joint deviations along the alignment path, plus error windows.

    A joint is incorrect when its mean deviation over the path exceeds the
    tolerance.  Windows are maximal runs of at least window_min_frames
    consecutive reference frames whose (worst aligned) deviation exceeds the
    tolerance, each annotated with its peak.
    """
    ref_pos = ref.positions_array()
    att_pos = attempt.positions_array()
    path = np.array(alignment.path)
    m = len(ref)

    joints: dict[JointId, JointStatus] = {}
    windows: list[ErrorWindow] = []
    for joint, weight in active_joints.items():
        if weight <= 0:
            continue
        j = int(joint)
        dev = np.linalg.norm(ref_pos[path[:, 0], j] - att_pos[path[:, 1], j], axis=1)
        mean_dev = float(np.mean(dev))
        joints[joint] = JointStatus(mean_deviation=mean_dev,
                                    incorrect=mean_dev > cfg.joint_tolerance)

        # per-reference-frame deviation: worst over the path steps touching it
        frame_dev = np.zeros(m)
        np.maximum.at(frame_dev, path[:, 0], dev)
        over = frame_dev > cfg.joint_tolerance
        start = None
        for i in range(m + 1):
            if i < m and over[i]:
                if start is None:
                    start = i
            elif start is not None:
                if i - start >= cfg.window_min_frames:
                    seg = frame_dev[start:i]
                    peak = int(start + np.argmax(seg))
                    windows.append(ErrorWindow(
                        joint=joint, ref_start=start, ref_end=i - 1,
                        peak_deviation=float(frame_dev[peak]),
                        peak_ref_index=peak))
                start = None

    return JointErrorReport(joints=joints, windows=tuple(windows))
