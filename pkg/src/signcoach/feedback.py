"""The five feedback modalities, rendered as structured artifacts (schema fb/1),
plus the correction-selection policy that thins error windows the way a
teacher would."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .scoring import ComparisonResult, ErrorWindow, JointErrorReport, JointStatus
from .skeleton import JointId, SignTemplate

FB_SCHEMA = "fb/1"

ZOOM_CAMERA_DISTANCE = 0.3  # normalized units

LIMBS: dict[str, tuple[JointId, ...]] = {
    "left_arm": (JointId.SHOULDER_LEFT, JointId.ELBOW_LEFT,
                 JointId.WRIST_LEFT, JointId.HAND_LEFT),
    "right_arm": (JointId.SHOULDER_RIGHT, JointId.ELBOW_RIGHT,
                  JointId.WRIST_RIGHT, JointId.HAND_RIGHT),
    "torso": (JointId.SPINE, JointId.SHOULDER_CENTER),
    "head": (JointId.HEAD,),
}


class FeedbackMode(Enum):
    RECAST = "recast"
    MIRROR = "mirror"
    PATH_ARROWS = "path_arrows"
    COLOR_CODING = "color_coding"
    ZOOM = "zoom"


class NothingToShow(ValueError):
    """The requested mode has no errors of its kind to display."""


@dataclass(frozen=True)
class Arrow:
    joint: JointId
    ref_index: int
    from_pos: tuple[float, float, float]  # attempt position
    to_pos: tuple[float, float, float]    # aligned reference position


@dataclass(frozen=True)
class FeedbackArtifact:
    mode: FeedbackMode
    payload: dict

    def to_fb1(self) -> dict:
        from .files import sequence_to_dict, round9

        def seq(s):
            return sequence_to_dict(s)

        body: dict = {"schema": FB_SCHEMA, "mode": self.mode.value}
        p = self.payload
        if self.mode is FeedbackMode.RECAST:
            body["template_id"] = p["template_id"]
            body["replay"] = seq(p["replay"])
        elif self.mode is FeedbackMode.MIRROR:
            body["reference"] = seq(p["reference"])
            body["attempt"] = seq(p["attempt"])
            body["pairs"] = [list(pair) for pair in p["pairs"]]
        elif self.mode is FeedbackMode.PATH_ARROWS:
            body["attempt"] = seq(p["attempt"])
            body["arrows"] = [
                {"joint": int(a.joint), "ref_index": a.ref_index,
                 "from": [round9(v) for v in a.from_pos],
                 "to": [round9(v) for v in a.to_pos]}
                for a in p["arrows"]
            ]
        elif self.mode is FeedbackMode.COLOR_CODING:
            body["attempt"] = seq(p["attempt"])
            body["limb_status"] = dict(p["limb_status"])
        elif self.mode is FeedbackMode.ZOOM:
            body["hand"] = p["hand"]
            body["handshape_id"] = p["handshape_id"]
            body["keyframe_t"] = p["keyframe_t"]
            body["camera"] = {"target_joint": int(p["target_joint"]),
                              "distance": ZOOM_CAMERA_DISTANCE}
        return body


def generate_feedback(mode: FeedbackMode, result: ComparisonResult,
                      template: SignTemplate) -> FeedbackArtifact:
    """Build the requested artifact from a comparison result.

    Recast is always constructible; the error-driven modes raise
    NothingToShow when there is nothing of their kind to display, signalling
    the caller to fall back to Recast or advance.
    """
    if mode is FeedbackMode.RECAST:
        return FeedbackArtifact(mode, {"template_id": template.id,
                                       "replay": template.sequence})

    if mode is FeedbackMode.MIRROR:
        if result.attempt_sequence is None:
            raise NothingToShow("mirror requires the attempt sequence")
        pairs = result.alignment.path
        return FeedbackArtifact(mode, {"reference": template.sequence,
                                       "attempt": result.attempt_sequence,
                                       "pairs": pairs})

    if mode is FeedbackMode.PATH_ARROWS:
        windows = result.joint_errors.windows
        if not windows or result.attempt_sequence is None:
            raise NothingToShow("no path error windows")
        ref_pos = template.sequence.positions_array()
        att_pos = result.attempt_sequence.positions_array()
        # aligned attempt index at each reference frame: the path step with
        # the worst deviation for that joint at that frame
        arrows = []
        for w in windows:
            j = int(w.joint)
            steps = [(ri, ai) for ri, ai in result.alignment.path
                     if ri == w.peak_ref_index]
            ai = max(steps, key=lambda s: float(
                np.linalg.norm(ref_pos[s[0], j] - att_pos[s[1], j])))[1]
            frm = tuple(float(v) for v in att_pos[ai, j])
            to = tuple(float(v) for v in ref_pos[w.peak_ref_index, j])
            arrows.append(Arrow(joint=w.joint, ref_index=w.peak_ref_index,
                                from_pos=frm, to_pos=to))
        return FeedbackArtifact(mode, {"attempt": result.attempt_sequence,
                                       "arrows": tuple(arrows)})

    if mode is FeedbackMode.COLOR_CODING:
        if result.attempt_sequence is None:
            raise NothingToShow("color coding requires the attempt sequence")
        bad = set(result.joint_errors.incorrect_joints())
        status = {limb: ("red" if bad & set(joints) else "green")
                  for limb, joints in LIMBS.items()}
        if "red" not in status.values():
            raise NothingToShow("no incorrect limbs")
        return FeedbackArtifact(mode, {"attempt": result.attempt_sequence,
                                       "limb_status": status})

    if mode is FeedbackMode.ZOOM:
        missed = [k for k in result.handshape_keyframes if not k.matched]
        if not missed or result.hand_data_absent:
            raise NothingToShow("no handshape errors")
        k = missed[0]
        target = JointId.HAND_LEFT if k.hand == "L" else JointId.HAND_RIGHT
        return FeedbackArtifact(mode, {"hand": k.hand,
                                       "handshape_id": k.expected_id,
                                       "keyframe_t": k.timestamp_ms,
                                       "target_joint": target})

    raise ValueError(f"unknown feedback mode {mode!r}")


@dataclass(frozen=True)
class CorrectionPolicy:
    """How much of the error report to surface: everything, or the worst
    fraction of windows (severity-ranked), modeled on observed teacher
    correction rates."""

    fraction: float | None = None  # None = correct everything

    def __post_init__(self):
        if self.fraction is not None and not (0.0 < self.fraction <= 1.0):
            raise ValueError("fraction must be in (0, 1]")

    @classmethod
    def all(cls) -> "CorrectionPolicy":
        return cls(fraction=None)

    @classmethod
    def selective_low(cls) -> "CorrectionPolicy":
        return cls(fraction=0.45)

    @classmethod
    def selective_high(cls) -> "CorrectionPolicy":
        return cls(fraction=0.75)


def select_corrections(report: JointErrorReport,
                       policy: CorrectionPolicy) -> JointErrorReport:
    """Keep the ceil(fraction * W) most severe windows; recompute joint
    statuses from the survivors.  Ties go to the earlier window."""
    if policy.fraction is None or not report.windows:
        return report
    k = math.ceil(policy.fraction * len(report.windows))
    ranked = sorted(report.windows, key=lambda w: (-w.peak_deviation, w.ref_start))
    kept = set(ranked[:k])
    surviving = tuple(w for w in report.windows if w in kept)
    joints_with_windows = {w.joint for w in surviving}
    joints = {j: JointStatus(mean_deviation=s.mean_deviation,
                             incorrect=j in joints_with_windows)
              for j, s in report.joints.items()}
    return JointErrorReport(joints=joints, windows=surviving)
