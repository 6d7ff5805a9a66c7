"""Synthetic attempt generation: deterministic perturbed copies of a
template's motion with injected error types, one per feedback modality."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .handshape import HandshapeLibrary
from .samples import ideal_hands
from .skeleton import (
    Frame,
    HandObservation,
    JointId,
    SignTemplate,
    SkeletonSequence,
    resample,
)

AXES = {"x": 0, "y": 1, "z": 2}


class SpecOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class ErrorSpec:
    """One injected error.  kind selects which fields apply:

    none            — faithful copy
    time-warp       — factor: playback speed multiplier (>1 is faster)
    joint-offset    — joint, axis, magnitude, frame_range (inclusive)
    handshape-swap  — keyframe_index, replacement_id
    path-deviation  — joint, amplitude, frequency (Hz), sinusoid along axis
    noise           — sigma applied to every joint, every frame
    """

    kind: str
    factor: float = 1.0
    joint: JointId | None = None
    axis: str = "x"
    magnitude: float = 0.0
    frame_range: tuple[int, int] | None = None
    keyframe_index: int = 0
    replacement_id: str = ""
    amplitude: float = 0.0
    frequency: float = 1.0
    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "time-warp", "joint-offset",
                             "handshape-swap", "path-deviation", "noise"):
            raise SpecOutOfRange(f"unknown error kind {self.kind!r}")
        if self.magnitude < 0 or self.amplitude < 0 or self.sigma < 0:
            raise SpecOutOfRange("magnitudes must be >= 0")
        if self.axis not in AXES:
            raise SpecOutOfRange(f"axis must be one of {sorted(AXES)}")


def _with_positions(seq: SkeletonSequence, pos: np.ndarray) -> SkeletonSequence:
    frames = tuple(
        Frame(timestamp_ms=f.timestamp_ms, positions=p, tracked=f.tracked)
        for f, p in zip(seq.frames, pos))
    return SkeletonSequence(frames=frames, nominal_rate_hz=seq.nominal_rate_hz)


def _apply_spec(seq: SkeletonSequence, hands: list[HandObservation],
                spec: ErrorSpec, template: SignTemplate,
                library: HandshapeLibrary):
    if spec.kind == "none":
        return seq, hands

    if spec.kind == "time-warp":
        if spec.factor <= 0:
            raise SpecOutOfRange("time-warp factor must be > 0")
        t0 = seq.frames[0].timestamp_ms
        frames = tuple(
            Frame(timestamp_ms=t0 + int(round((f.timestamp_ms - t0) / spec.factor)),
                  positions=f.positions, tracked=f.tracked)
            for f in seq.frames)
        warped = SkeletonSequence(frames=frames, nominal_rate_hz=seq.nominal_rate_hz)
        out = resample(warped, seq.nominal_rate_hz)
        hands = [HandObservation(angles=o.angles, hand=o.hand,
                                 timestamp_ms=t0 + int(round((o.timestamp_ms - t0) / spec.factor)))
                 for o in hands]
        return out, hands

    if spec.kind == "joint-offset":
        if spec.joint is None:
            raise SpecOutOfRange("joint-offset needs a joint")
        lo, hi = spec.frame_range if spec.frame_range else (0, len(seq) - 1)
        if not (0 <= lo <= hi < len(seq)):
            raise SpecOutOfRange(f"frame_range ({lo}, {hi}) outside sequence of {len(seq)} frames")
        pos = seq.positions_array().copy()
        pos[lo:hi + 1, int(spec.joint), AXES[spec.axis]] += spec.magnitude
        return _with_positions(seq, pos), hands

    if spec.kind == "handshape-swap":
        if not (0 <= spec.keyframe_index < len(template.handshape_keyframes)):
            raise SpecOutOfRange(f"keyframe_index {spec.keyframe_index} out of range")
        replacement = library.by_id(spec.replacement_id)
        target_t, target_hand, _ = template.handshape_keyframes[spec.keyframe_index]
        swapped = []
        for o in hands:
            if o.timestamp_ms == target_t and o.hand == target_hand:
                o = HandObservation(angles=replacement.angles, hand=o.hand,
                                    timestamp_ms=o.timestamp_ms)
            swapped.append(o)
        return seq, swapped

    if spec.kind == "path-deviation":
        if spec.joint is None:
            raise SpecOutOfRange("path-deviation needs a joint")
        pos = seq.positions_array().copy()
        t = seq.timestamps_ms.astype(float) / 1000.0
        wave = spec.amplitude * np.sin(2.0 * np.pi * spec.frequency * t)
        pos[:, int(spec.joint), AXES[spec.axis]] += wave
        return _with_positions(seq, pos), hands

    if spec.kind == "noise":
        rng = np.random.default_rng(spec.seed)
        pos = seq.positions_array().copy()
        pos += rng.normal(0.0, spec.sigma, size=pos.shape)
        return _with_positions(seq, pos), hands

    raise SpecOutOfRange(spec.kind)


def synth_attempt(template: SignTemplate, specs, library: HandshapeLibrary
                  ) -> tuple[SkeletonSequence, list[HandObservation]]:
    """Build a synthetic attempt from a template by applying error specs in
    order.  An empty spec list (or a single 'none') yields a faithful copy."""
    if isinstance(specs, ErrorSpec):
        specs = [specs]
    seq: SkeletonSequence = SkeletonSequence(frames=template.sequence.frames,
                                             nominal_rate_hz=template.sequence.nominal_rate_hz)
    hands = ideal_hands(template, library)
    for spec in specs:
        seq, hands = _apply_spec(seq, hands, spec, template, library)
    return seq, hands
