"""Skeleton data model: joints, frames, sequences, normalization, signing space.

Coordinates are camera space (x right, y up, z increasing away from the
sensor) in meters for raw captures.  Normalized sequences are body-relative:
hip-center at the origin, first-frame shoulder width scaled to 1.0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

N_JOINTS = 20


class JointId(IntEnum):
    """The 20-joint skeleton with stable integer codes for serialization."""

    HIP_CENTER = 0
    SPINE = 1
    SHOULDER_CENTER = 2
    HEAD = 3
    SHOULDER_LEFT = 4
    ELBOW_LEFT = 5
    WRIST_LEFT = 6
    HAND_LEFT = 7
    SHOULDER_RIGHT = 8
    ELBOW_RIGHT = 9
    WRIST_RIGHT = 10
    HAND_RIGHT = 11
    HIP_LEFT = 12
    KNEE_LEFT = 13
    ANKLE_LEFT = 14
    FOOT_LEFT = 15
    HIP_RIGHT = 16
    KNEE_RIGHT = 17
    ANKLE_RIGHT = 18
    FOOT_RIGHT = 19


HAND_JOINTS = (JointId.WRIST_LEFT, JointId.HAND_LEFT,
               JointId.WRIST_RIGHT, JointId.HAND_RIGHT)

UPPER_BODY_JOINTS = (
    JointId.HIP_CENTER, JointId.SPINE, JointId.SHOULDER_CENTER, JointId.HEAD,
    JointId.SHOULDER_LEFT, JointId.ELBOW_LEFT, JointId.WRIST_LEFT, JointId.HAND_LEFT,
    JointId.SHOULDER_RIGHT, JointId.ELBOW_RIGHT, JointId.WRIST_RIGHT, JointId.HAND_RIGHT,
)


class DegenerateSkeleton(ValueError):
    """Raised when a capture is too corrupt to normalize (collapsed shoulders)."""


@dataclass(frozen=True)
class Frame:
    """One capture frame: positions and tracking flags for all 20 joints.

    positions is a (20, 3) float array indexed by JointId code; tracked is a
    (20,) bool array.  Untracked joints carry a carried-forward position.
    """

    timestamp_ms: int
    positions: np.ndarray
    tracked: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        trk = np.asarray(self.tracked, dtype=bool)
        if pos.shape != (N_JOINTS, 3):
            raise ValueError(f"positions must be (20, 3), got {pos.shape}")
        if trk.shape != (N_JOINTS,):
            raise ValueError(f"tracked must be (20,), got {trk.shape}")
        if self.timestamp_ms < 0:
            raise ValueError("timestamp_ms must be non-negative")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        if np.any(np.abs(pos) >= 10.0):
            raise ValueError("positions out of range (|coordinate| < 10 m)")
        pos.setflags(write=False)
        trk.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "tracked", trk)

    def position(self, joint: JointId) -> np.ndarray:
        return self.positions[int(joint)]


@dataclass(frozen=True)
class SkeletonSequence:
    """Timestamped skeleton frames; the raw material of templates and attempts."""

    frames: tuple[Frame, ...]
    nominal_rate_hz: float

    def __post_init__(self):
        frames = tuple(self.frames)
        if len(frames) < 2:
            raise ValueError("sequence needs at least 2 frames")
        ts = [f.timestamp_ms for f in frames]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("timestamps must be strictly increasing")
        if self.nominal_rate_hz <= 0:
            raise ValueError("nominal_rate_hz must be positive")
        object.__setattr__(self, "frames", frames)

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def timestamps_ms(self) -> np.ndarray:
        return np.array([f.timestamp_ms for f in self.frames], dtype=np.int64)

    @property
    def duration_ms(self) -> int:
        return self.frames[-1].timestamp_ms - self.frames[0].timestamp_ms

    def positions_array(self) -> np.ndarray:
        """Stacked positions, shape (T, 20, 3)."""
        return np.stack([f.positions for f in self.frames])

    def tracked_array(self) -> np.ndarray:
        return np.stack([f.tracked for f in self.frames])


@dataclass(frozen=True)
class NormalizedSequence(SkeletonSequence):
    """Body-relative sequence plus the record needed to invert normalization.

    origin_offsets holds the per-frame hip-center position that was
    subtracted (in pre-scale units); scale is the uniform divisor.
    """

    origin_offsets: np.ndarray = field(default=None)
    scale: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        off = np.asarray(self.origin_offsets, dtype=float)
        if off.shape != (len(self.frames), 3):
            raise ValueError("origin_offsets must be (T, 3)")
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        off.setflags(write=False)
        object.__setattr__(self, "origin_offsets", off)


@dataclass(frozen=True)
class HandObservation:
    """15 finger-joint angles in degrees for one hand at one instant.

    Layout: per finger thumb..pinky, [MCP flexion, PIP flexion, abduction].
    Angles outside their declared range are clamped; clamp_count records how
    many components were clamped.
    """

    angles: np.ndarray
    hand: str  # "L" | "R"
    timestamp_ms: int
    clamp_count: int = 0

    def __post_init__(self):
        if self.hand not in ("L", "R"):
            raise ValueError("hand must be 'L' or 'R'")
        raw = np.asarray(self.angles, dtype=float)
        if raw.shape != (15,):
            raise ValueError("angles must be a 15-vector")
        lo, hi = angle_bounds()
        clamped = np.clip(raw, lo, hi)
        n_clamped = int(np.sum(clamped != raw))
        clamped.setflags(write=False)
        object.__setattr__(self, "angles", clamped)
        object.__setattr__(self, "clamp_count", self.clamp_count + n_clamped)


def angle_bounds() -> tuple[np.ndarray, np.ndarray]:
    """Per-dimension (lo, hi) for the 15-angle hand vector."""
    lo = np.tile([0.0, 0.0, -15.0], 5)
    hi = np.tile([90.0, 110.0, 30.0], 5)
    return lo, hi


@dataclass(frozen=True)
class Handshape:
    """A named hand configuration in the same 15-angle space."""

    id: str
    angles: np.ndarray
    display_name: str

    def __post_init__(self):
        ang = np.asarray(self.angles, dtype=float)
        if ang.shape != (15,):
            raise ValueError("angles must be a 15-vector")
        lo, hi = angle_bounds()
        if np.any(ang < lo) or np.any(ang > hi):
            raise ValueError(f"handshape {self.id!r} angles out of range")
        ang.setflags(write=False)
        object.__setattr__(self, "angles", ang)


@dataclass(frozen=True)
class SignTemplate:
    """Reference sign: normalized motion, handshape keyframes, joint weights."""

    id: str
    gloss: str
    sequence: NormalizedSequence
    handshape_keyframes: tuple[tuple[int, str, str], ...]  # (t_ms, "L"|"R", shape_id)
    active_joints: dict[JointId, float]
    threshold_default: float = 60.0

    def __post_init__(self):
        keyframes = tuple(tuple(k) for k in self.handshape_keyframes)
        t0 = self.sequence.frames[0].timestamp_ms
        t1 = self.sequence.frames[-1].timestamp_ms
        for i, (t, hand, _shape) in enumerate(keyframes):
            if not (t0 <= t <= t1):
                raise ValueError(f"handshape keyframe {i} at t={t} outside sequence range [{t0}, {t1}]")
            if hand not in ("L", "R"):
                raise ValueError(f"handshape keyframe {i}: hand must be 'L' or 'R'")
        weights = {JointId(j): float(w) for j, w in self.active_joints.items()}
        if any(w < 0 for w in weights.values()):
            raise ValueError("joint weights must be >= 0")
        total = sum(weights.values())
        if not weights or not math.isclose(total, 1.0, abs_tol=1e-9):
            raise ValueError(f"active joint weights must sum to 1.0, got {total}")
        if not any(w > 0 for w in weights.values()):
            raise ValueError("at least one active joint must have weight > 0")
        object.__setattr__(self, "handshape_keyframes", keyframes)
        object.__setattr__(self, "active_joints", weights)

    def weight_vector(self) -> np.ndarray:
        w = np.zeros(N_JOINTS)
        for j, wt in self.active_joints.items():
            w[int(j)] = wt
        return w


@dataclass(frozen=True)
class SpaceViolation:
    frame_index: int
    joint: JointId
    kind: str  # "behind-body" | "below-floor-of-space" | "beyond-reach"
    magnitude: float


@dataclass(frozen=True)
class SigningSpaceConfig:
    """Calibration constants for the signing-space validator."""

    behind_plane_tolerance: float = 0.1
    reach_limit: float = 2.5


def normalize(seq: SkeletonSequence) -> NormalizedSequence:
    """Make a sequence body-relative: hip-center to origin, shoulder width to 1.

    The uniform scale comes from the first frame's shoulder-to-shoulder
    distance so scores reflect sign accuracy rather than body size.
    Idempotent: normalizing a normalized sequence is the identity.
    """
    first = seq.frames[0]
    shoulder_dist = float(np.linalg.norm(
        first.position(JointId.SHOULDER_LEFT) - first.position(JointId.SHOULDER_RIGHT)))
    if shoulder_dist <= 0.05:
        raise DegenerateSkeleton(
            f"first-frame shoulder distance {shoulder_dist:.4f} m <= 0.05 m")
    scale = shoulder_dist

    offsets = np.stack([f.position(JointId.HIP_CENTER) for f in seq.frames])
    frames = []
    for f, origin in zip(seq.frames, offsets):
        frames.append(Frame(
            timestamp_ms=f.timestamp_ms,
            positions=(f.positions - origin) / scale,
            tracked=f.tracked,
        ))
    return NormalizedSequence(
        frames=tuple(frames),
        nominal_rate_hz=seq.nominal_rate_hz,
        origin_offsets=offsets,
        scale=scale,
    )


def resample(seq: SkeletonSequence, rate_hz: float) -> SkeletonSequence:
    """Resample to uniform timestamps spanning the original duration.

    Positions are linearly interpolated; endpoint frames are preserved
    exactly.  The output has round(rate_hz * duration_s) frames (min 2).
    """
    if not (1.0 <= rate_hz <= 120.0):
        raise ValueError(f"rate_hz must be in [1, 120], got {rate_hz}")
    t0 = seq.frames[0].timestamp_ms
    t1 = seq.frames[-1].timestamp_ms
    num = max(2, round(rate_hz * (t1 - t0) / 1000.0))
    new_ts = np.rint(np.linspace(t0, t1, num)).astype(np.int64)

    old_ts = seq.timestamps_ms.astype(float)
    pos = seq.positions_array()  # (T, 20, 3)
    trk = seq.tracked_array()

    frames = []
    for t in new_ts:
        if t <= t0:
            p, k = pos[0], trk[0]
        elif t >= t1:
            p, k = pos[-1], trk[-1]
        else:
            i = int(np.searchsorted(old_ts, t, side="right"))
            ta, tb = old_ts[i - 1], old_ts[i]
            u = (t - ta) / (tb - ta)
            p = (1.0 - u) * pos[i - 1] + u * pos[i]
            k = trk[i - 1] & trk[i]
        frames.append(Frame(timestamp_ms=int(t), positions=p, tracked=k))
    result = SkeletonSequence(frames=tuple(frames), nominal_rate_hz=rate_hz)
    if isinstance(seq, NormalizedSequence):
        offsets = np.zeros((len(frames), 3))
        return NormalizedSequence(frames=result.frames, nominal_rate_hz=rate_hz,
                                  origin_offsets=offsets, scale=1.0)
    return result


def validate_signing_space(seq: NormalizedSequence,
                           cfg: SigningSpaceConfig | None = None) -> list[SpaceViolation]:
    """Flag hand/wrist positions outside legal signing space.

    behind-body: more than the tolerance behind the torso plane (plane
    through the two shoulders and hip-center, back side being +z-ish).
    below-floor-of-space: below ankle height.  beyond-reach: farther than
    the reach limit from shoulder-center.  Empty list means clean.
    """
    cfg = cfg or SigningSpaceConfig()
    violations: list[SpaceViolation] = []
    for idx, f in enumerate(seq.frames):
        sl = f.position(JointId.SHOULDER_LEFT)
        sr = f.position(JointId.SHOULDER_RIGHT)
        hip = f.position(JointId.HIP_CENTER)
        normal = np.cross(sl - hip, sr - hip)
        norm = np.linalg.norm(normal)
        if norm < 1e-12:
            continue  # degenerate torso, cannot define the plane
        normal = normal / norm
        if normal[2] < 0:
            normal = -normal  # orient toward the back (away from sensor)
        ankle_floor = min(f.position(JointId.ANKLE_LEFT)[1],
                          f.position(JointId.ANKLE_RIGHT)[1])
        shoulder_center = f.position(JointId.SHOULDER_CENTER)
        for joint in HAND_JOINTS:
            p = f.position(joint)
            behind = float(np.dot(p - hip, normal))
            if behind > cfg.behind_plane_tolerance:
                violations.append(SpaceViolation(idx, joint, "behind-body", behind))
            if p[1] < ankle_floor:
                violations.append(SpaceViolation(
                    idx, joint, "below-floor-of-space", float(ankle_floor - p[1])))
            reach = float(np.linalg.norm(p - shoulder_center))
            if reach > cfg.reach_limit:
                violations.append(SpaceViolation(
                    idx, joint, "beyond-reach", reach - cfg.reach_limit))
    return violations


def untracked_fraction(seq: SkeletonSequence, joint: JointId) -> float:
    trk = seq.tracked_array()[:, int(joint)]
    return 1.0 - float(np.mean(trk))
