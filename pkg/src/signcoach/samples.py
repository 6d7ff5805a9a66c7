"""Bundled sample data: a 10-shape hand library and three synthetic sign
templates.  These are hand-authored fixtures for development and testing,
not linguistic vocabulary."""

from __future__ import annotations

import math

import numpy as np

from .feedback import FeedbackMode
from .handshape import HandshapeLibrary
from .session import Lesson
from .skeleton import (
    Frame,
    Handshape,
    JointId,
    N_JOINTS,
    SignTemplate,
    SkeletonSequence,
    normalize,
)

_J = JointId


def _shape(id_, name, thumb, index, middle, ring, pinky) -> Handshape:
    angles = np.array(thumb + index + middle + ring + pinky, dtype=float)
    return Handshape(id=id_, angles=angles, display_name=name)


def sample_library() -> HandshapeLibrary:
    """Ten handshapes spanning open, closed, and mixed configurations.

    Every pair differs by more than the matcher's 20-degree refinement box
    in at least one angle, so exact observations resolve unambiguously."""
    return HandshapeLibrary(shapes=(
        _shape("flat", "Flat hand",
               [10, 0, 10], [0, 0, 0], [0, 0, 0], [0, 0, 0], [0, 0, 0]),
        _shape("fist", "Closed fist",
               [70, 60, 0], [85, 100, 0], [85, 100, 0], [85, 100, 0], [85, 100, 0]),
        _shape("point", "Index point",
               [60, 80, 0], [0, 0, 0], [85, 100, 0], [85, 100, 0], [85, 100, 0]),
        _shape("spread-5", "Spread five",
               [15, 0, 28], [0, 0, 25], [0, 0, 8], [0, 0, -12], [0, 0, -15]),
        _shape("hook", "Hooked fingers",
               [30, 40, 5], [10, 95, 0], [10, 95, 0], [10, 95, 0], [10, 95, 0]),
        _shape("thumb-up", "Thumb up",
               [0, 0, 28], [85, 100, 0], [85, 100, 0], [85, 100, 0], [85, 100, 0]),
        _shape("pinch", "Pinch",
               [45, 35, 12], [50, 45, 0], [15, 10, 5], [10, 5, 0], [10, 5, -5]),
        _shape("letter-C", "Letter C",
               [35, 30, 15], [30, 45, 5], [30, 45, 2], [30, 45, -2], [30, 45, -5]),
        _shape("two", "Two fingers",
               [55, 70, 0], [0, 0, 15], [0, 0, -8], [85, 100, 0], [85, 100, 0]),
        _shape("good", "Good",
               [5, 15, 30], [60, 70, -5], [60, 70, -5], [60, 70, -5], [60, 75, -10]),
    ))


def base_pose() -> np.ndarray:
    """A standing rest pose in meters, camera space, facing the sensor."""
    p = np.zeros((N_JOINTS, 3))
    z = 2.5
    p[_J.HIP_CENTER] = (0.00, 0.95, z)
    p[_J.SPINE] = (0.00, 1.15, z)
    p[_J.SHOULDER_CENTER] = (0.00, 1.38, z)
    p[_J.HEAD] = (0.00, 1.58, z - 0.02)
    p[_J.SHOULDER_LEFT] = (-0.20, 1.35, z)
    p[_J.ELBOW_LEFT] = (-0.24, 1.08, z)
    p[_J.WRIST_LEFT] = (-0.26, 0.85, z)
    p[_J.HAND_LEFT] = (-0.27, 0.78, z)
    p[_J.SHOULDER_RIGHT] = (0.20, 1.35, z)
    p[_J.ELBOW_RIGHT] = (0.24, 1.08, z)
    p[_J.WRIST_RIGHT] = (0.26, 0.85, z)
    p[_J.HAND_RIGHT] = (0.27, 0.78, z)
    p[_J.HIP_LEFT] = (-0.09, 0.90, z)
    p[_J.KNEE_LEFT] = (-0.10, 0.50, z)
    p[_J.ANKLE_LEFT] = (-0.10, 0.08, z)
    p[_J.FOOT_LEFT] = (-0.10, 0.02, z - 0.10)
    p[_J.HIP_RIGHT] = (0.09, 0.90, z)
    p[_J.KNEE_RIGHT] = (0.10, 0.50, z)
    p[_J.ANKLE_RIGHT] = (0.10, 0.08, z)
    p[_J.FOOT_RIGHT] = (0.10, 0.02, z - 0.10)
    return p


# Upper-body weighting: hands dominate, lower body ignored.
ACTIVE_JOINTS: dict[JointId, float] = {
    _J.HAND_LEFT: 0.22, _J.HAND_RIGHT: 0.22,
    _J.WRIST_LEFT: 0.13, _J.WRIST_RIGHT: 0.13,
    _J.ELBOW_LEFT: 0.08, _J.ELBOW_RIGHT: 0.08,
    _J.SHOULDER_LEFT: 0.03, _J.SHOULDER_RIGHT: 0.03,
    _J.HEAD: 0.02, _J.SHOULDER_CENTER: 0.02, _J.SPINE: 0.02, _J.HIP_CENTER: 0.02,
}


def _motion_sequence(mover, duration_ms: int, rate_hz: float) -> SkeletonSequence:
    """Build a sequence by letting `mover(u, positions)` deform the base pose,
    u in [0, 1] being the motion phase."""
    step = int(round(1000.0 / rate_hz))
    n = duration_ms // step + 1
    frames = []
    for k in range(n):
        t = k * step
        u = t / (duration_ms if duration_ms else 1)
        pos = base_pose()
        mover(u, pos)
        frames.append(Frame(timestamp_ms=t, positions=pos,
                            tracked=np.ones(N_JOINTS, dtype=bool)))
    return SkeletonSequence(frames=tuple(frames), nominal_rate_hz=rate_hz)


def _raise_right_arm(pos: np.ndarray, lift: float):
    # bring the right forearm up in front of the chest
    shoulder = pos[_J.SHOULDER_RIGHT]
    pos[_J.ELBOW_RIGHT] = shoulder + (0.06, -0.22 + 0.10 * lift, -0.10 * lift)
    pos[_J.WRIST_RIGHT] = pos[_J.ELBOW_RIGHT] + (0.02, 0.24 * lift - 0.20 * (1 - lift), -0.08 * lift)
    pos[_J.HAND_RIGHT] = pos[_J.WRIST_RIGHT] + (0.0, 0.07 * lift - 0.06 * (1 - lift), -0.02 * lift)


def _wave_mover(u: float, pos: np.ndarray):
    lift = min(1.0, 3.0 * u)  # raise during the first third, then wave
    _raise_right_arm(pos, lift)
    sway = 0.12 * math.sin(2.0 * math.pi * 1.5 * max(0.0, u - 1.0 / 3.0)) * lift
    for j in (_J.WRIST_RIGHT, _J.HAND_RIGHT):
        pos[j][0] += sway
    pos[_J.HAND_RIGHT][0] += 0.4 * sway


def _circle_mover(u: float, pos: np.ndarray):
    lift = min(1.0, 4.0 * u)
    _raise_right_arm(pos, lift)
    ang = 2.0 * math.pi * max(0.0, u - 0.25)
    r = 0.10 * lift
    offset = np.array([r * math.cos(ang) - r, r * math.sin(ang), 0.0])
    pos[_J.WRIST_RIGHT] += offset
    pos[_J.HAND_RIGHT] += offset
    pos[_J.ELBOW_RIGHT] += 0.4 * offset


def _push_mover(u: float, pos: np.ndarray):
    lift = min(1.0, 3.0 * u)
    push = 0.22 * math.sin(math.pi * u)  # out and back, toward the sensor
    for side in ("LEFT", "RIGHT"):
        sh = pos[getattr(_J, f"SHOULDER_{side}")]
        sign = -1.0 if side == "LEFT" else 1.0
        pos[getattr(_J, f"ELBOW_{side}")] = sh + (sign * 0.05, -0.18 + 0.06 * lift, -0.06 * lift - 0.4 * push)
        pos[getattr(_J, f"WRIST_{side}")] = pos[getattr(_J, f"ELBOW_{side}")] + (
            sign * 0.02, 0.10 * lift, -0.10 * lift - 0.5 * push)
        pos[getattr(_J, f"HAND_{side}")] = pos[getattr(_J, f"WRIST_{side}")] + (
            0.0, 0.04 * lift, -0.03 - 0.2 * push)


def _template(id_, gloss, mover, duration_ms, rate_hz, keyframes,
              threshold=60.0) -> SignTemplate:
    seq = normalize(_motion_sequence(mover, duration_ms, rate_hz))
    return SignTemplate(id=id_, gloss=gloss, sequence=seq,
                        handshape_keyframes=keyframes,
                        active_joints=dict(ACTIVE_JOINTS),
                        threshold_default=threshold)


def sample_templates() -> list[SignTemplate]:
    wave = _template("wave", "hello (wave)", _wave_mover, 2000, 25.0,
                     ((800, "R", "spread-5"), (1600, "R", "spread-5")))
    circle = _template("circle", "circle in space", _circle_mover, 2000, 25.0,
                       ((600, "R", "point"), (1400, "R", "point")))
    push = _template("push", "push away", _push_mover, 2000, 25.0,
                     ((500, "L", "flat"), (500, "R", "flat"), (1500, "R", "flat")))
    return [wave, circle, push]


def fixture_template_short() -> SignTemplate:
    """A 28-frame template used by the error-localization fixtures."""
    return _template("wave-short", "short wave", _wave_mover, 1080, 25.0,
                     ((540, "R", "spread-5"),))


def sample_lessons() -> list[Lesson]:
    return [
        Lesson(id="basics", sign_ids=("wave", "circle", "push"),
               threshold=60.0, feedback_mode=FeedbackMode.COLOR_CODING),
        Lesson(id="wave-drill", sign_ids=("wave",),
               threshold=80.0, feedback_mode=FeedbackMode.PATH_ARROWS),
    ]


def ideal_hands(template: SignTemplate, lib: HandshapeLibrary) -> list:
    """The hand-observation stream a perfect attempt would carry: one
    observation per keyframe with the template's exact shape angles."""
    from .skeleton import HandObservation
    return [HandObservation(angles=lib.by_id(shape).angles, hand=hand, timestamp_ms=t)
            for t, hand, shape in template.handshape_keyframes]


def write_sample_store(root) -> None:
    """Populate a store directory with the bundled templates, library, lessons."""
    from .store import Store
    from . import files
    store = Store(root)
    lib = sample_library()
    store.put("hands", "default", files.library_to_dict(lib))
    for t in sample_templates() + [fixture_template_short()]:
        store.put("templates", t.id, files.template_to_dict(t))
    for lesson in sample_lessons():
        store.put("lessons", lesson.id, files.lesson_to_dict(lesson))
