"""File formats and canonical JSON serialization.

Formats:
  *.sign.json    recording/template: id, gloss, rate_hz, frames, hands
                 (templates add a "template" section)
  *.hands.json   handshape library
  *.lesson.json  lesson definition
  *.session.jsonl  one event per line

All numbers are serialized with at most 9 significant digits so that a
write-read-write cycle is byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .handshape import HandshapeLibrary
from .skeleton import (
    N_JOINTS,
    Frame,
    HandObservation,
    Handshape,
    JointId,
    NormalizedSequence,
    SignTemplate,
    SkeletonSequence,
)


class SchemaViolation(ValueError):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


def round9(x: float) -> float:
    """Round to 9 significant digits (the wire precision)."""
    return float(f"{float(x):.9g}")


def _round9_list(values) -> list[float]:
    return [round9(v) for v in np.asarray(values, dtype=float).ravel()]


def canonical_json(obj) -> str:
    """Deterministic compact JSON with stable (insertion) key order."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"), allow_nan=False)


def dump_json(obj, path: Path) -> None:
    """Atomic pretty-printed write (write temp, then rename)."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    tmp.replace(path)


# ---------------------------------------------------------------- sequences

def sequence_to_dict(seq: SkeletonSequence) -> dict:
    return {
        "rate_hz": round9(seq.nominal_rate_hz),
        "frames": [
            {
                "t": int(f.timestamp_ms),
                "joints": [_round9_list(f.positions[j]) for j in range(N_JOINTS)],
                "tracked": [bool(b) for b in f.tracked],
            }
            for f in seq.frames
        ],
    }


def hands_to_list(hands) -> list[dict]:
    return [
        {"t": int(o.timestamp_ms), "hand": o.hand, "angles": _round9_list(o.angles)}
        for o in (hands or [])
    ]


def _parse_frames(raw_frames, where: str) -> tuple[Frame, ...]:
    if not isinstance(raw_frames, list) or len(raw_frames) < 2:
        raise SchemaViolation(where, "frames must be a list of at least 2 entries")
    frames = []
    for i, rf in enumerate(raw_frames):
        joints = rf.get("joints")
        if not isinstance(joints, list) or len(joints) != N_JOINTS:
            got = len(joints) if isinstance(joints, list) else type(joints).__name__
            raise SchemaViolation(f"{where}[{i}].joints", f"expected {N_JOINTS} joints, got {got}")
        for j, p in enumerate(joints):
            if not isinstance(p, list) or len(p) != 3:
                raise SchemaViolation(f"{where}[{i}].joints[{j}]", "expected [x, y, z]")
        tracked = rf.get("tracked", [True] * N_JOINTS)
        if len(tracked) != N_JOINTS:
            raise SchemaViolation(f"{where}[{i}].tracked", f"expected {N_JOINTS} flags")
        if "t" not in rf:
            raise SchemaViolation(f"{where}[{i}].t", "missing timestamp")
        try:
            frames.append(Frame(timestamp_ms=int(rf["t"]),
                                positions=np.array(joints, dtype=float),
                                tracked=np.array(tracked, dtype=bool)))
        except ValueError as e:
            raise SchemaViolation(f"{where}[{i}]", str(e)) from e
    return tuple(frames)


def parse_recording(doc: dict) -> tuple[str, str, SkeletonSequence, list[HandObservation]]:
    """Parse a .sign.json document into (id, gloss, sequence, hands)."""
    if not isinstance(doc, dict):
        raise SchemaViolation("$", "document must be a JSON object")
    rid = doc.get("id")
    if not isinstance(rid, str) or not rid:
        raise SchemaViolation("id", "must be a non-empty string")
    gloss = doc.get("gloss", "")
    rate = doc.get("rate_hz")
    if not isinstance(rate, (int, float)) or rate <= 0:
        raise SchemaViolation("rate_hz", "must be a positive number")
    frames = _parse_frames(doc.get("frames"), "frames")
    try:
        seq = SkeletonSequence(frames=frames, nominal_rate_hz=float(rate))
    except ValueError as e:
        raise SchemaViolation("frames", str(e)) from e
    hands = []
    for i, rh in enumerate(doc.get("hands", []) or []):
        try:
            hands.append(HandObservation(angles=np.array(rh["angles"], dtype=float),
                                         hand=rh["hand"],
                                         timestamp_ms=int(rh["t"])))
        except (KeyError, ValueError, TypeError) as e:
            raise SchemaViolation(f"hands[{i}]", str(e)) from e
    return rid, gloss, seq, hands


def recording_to_dict(rid: str, gloss: str, seq: SkeletonSequence, hands=None) -> dict:
    doc = {"id": rid, "gloss": gloss}
    doc.update(sequence_to_dict(seq))
    doc["hands"] = hands_to_list(hands)
    return doc


# ---------------------------------------------------------------- templates

def template_to_dict(t: SignTemplate) -> dict:
    doc = recording_to_dict(t.id, t.gloss, t.sequence)
    doc["template"] = {
        "keyframes": [{"t": int(kt), "hand": hand, "shape": shape}
                      for kt, hand, shape in t.handshape_keyframes],
        "active_joints": [{"joint": int(j), "weight": round9(w)}
                          for j, w in sorted(t.active_joints.items())],
        "threshold_default": round9(t.threshold_default),
        "normalization": {"scale": 1.0},
    }
    return doc


def parse_template(doc: dict) -> SignTemplate:
    rid, gloss, seq, _hands = parse_recording(doc)
    tmpl = doc.get("template")
    if not isinstance(tmpl, dict):
        raise SchemaViolation("template", "missing template section")
    t0 = seq.frames[0].timestamp_ms
    t1 = seq.frames[-1].timestamp_ms
    keyframes = []
    for i, kf in enumerate(tmpl.get("keyframes", [])):
        try:
            kt, hand, shape = int(kf["t"]), kf["hand"], kf["shape"]
        except (KeyError, TypeError) as e:
            raise SchemaViolation(f"template.keyframes[{i}]", str(e)) from e
        if not (t0 <= kt <= t1):
            raise SchemaViolation(f"template.keyframes[{i}].t",
                                  f"timestamp {kt} outside sequence range [{t0}, {t1}]")
        keyframes.append((kt, hand, shape))
    active = {}
    for i, aj in enumerate(tmpl.get("active_joints", [])):
        try:
            active[JointId(int(aj["joint"]))] = float(aj["weight"])
        except (KeyError, ValueError, TypeError) as e:
            raise SchemaViolation(f"template.active_joints[{i}]", str(e)) from e
    norm = NormalizedSequence(frames=seq.frames, nominal_rate_hz=seq.nominal_rate_hz,
                              origin_offsets=np.zeros((len(seq), 3)), scale=1.0)
    try:
        return SignTemplate(id=rid, gloss=gloss, sequence=norm,
                            handshape_keyframes=tuple(keyframes),
                            active_joints=active,
                            threshold_default=float(tmpl.get("threshold_default", 60.0)))
    except ValueError as e:
        raise SchemaViolation("template", str(e)) from e


# ---------------------------------------------------------------- hand library

def library_to_dict(lib: HandshapeLibrary) -> dict:
    return {"shapes": [{"id": s.id, "display_name": s.display_name,
                        "angles": _round9_list(s.angles)}
                       for s in lib.shapes]}


def parse_library(doc: dict) -> HandshapeLibrary:
    shapes = []
    raw = doc.get("shapes") if isinstance(doc, dict) else None
    if not isinstance(raw, list):
        raise SchemaViolation("shapes", "must be a list")
    for i, rs in enumerate(raw):
        try:
            shapes.append(Handshape(id=rs["id"],
                                    angles=np.array(rs["angles"], dtype=float),
                                    display_name=rs.get("display_name", rs["id"])))
        except (KeyError, ValueError, TypeError) as e:
            raise SchemaViolation(f"shapes[{i}]", str(e)) from e
    try:
        return HandshapeLibrary(shapes=tuple(shapes))
    except ValueError as e:
        raise SchemaViolation("shapes", str(e)) from e


# ---------------------------------------------------------------- lessons

def result_to_dict(result) -> dict:
    """Stable serialization of a ComparisonResult (key order fixed)."""
    return {
        "template_id": result.template_id,
        "movement_score": round9(result.movement_score),
        "handshape_score": round9(result.handshape_score),
        "accuracy": round9(result.accuracy),
        "passed": bool(result.passed),
        "threshold_used": round9(result.threshold_used),
        "hand_data_absent": bool(result.hand_data_absent),
        "joint_errors": {
            "joints": [
                {"joint": int(j), "mean_deviation": round9(s.mean_deviation),
                 "incorrect": bool(s.incorrect)}
                for j, s in sorted(result.joint_errors.joints.items())
            ],
            "windows": [
                {"joint": int(w.joint), "ref_start": w.ref_start,
                 "ref_end": w.ref_end,
                 "peak_deviation": round9(w.peak_deviation),
                 "peak_ref_index": w.peak_ref_index}
                for w in result.joint_errors.windows
            ],
        },
        "alignment": {
            "path_length": len(result.alignment.path),
            "total_cost": round9(result.alignment.total_cost),
            "normalized_cost": round9(result.alignment.normalized_cost),
        },
        "keyframes": [
            {"index": k.keyframe_index, "t": k.timestamp_ms, "hand": k.hand,
             "expected": k.expected_id, "observed": k.observed_id,
             "matched": bool(k.matched)}
            for k in result.handshape_keyframes
        ],
        "space_violations": [
            {"frame": v.frame_index, "joint": int(v.joint), "kind": v.kind,
             "magnitude": round9(v.magnitude)}
            for v in result.space_violations
        ],
    }


def lesson_to_dict(lesson) -> dict:
    return {
        "id": lesson.id,
        "signs": list(lesson.sign_ids),
        "threshold": round9(lesson.threshold),
        "feedback_mode": lesson.feedback_mode.value,
        "max_attempts_before_advance": lesson.max_attempts_before_advance,
    }


def parse_lesson(doc: dict):
    from .session import Lesson
    from .feedback import FeedbackMode
    if not isinstance(doc, dict):
        raise SchemaViolation("$", "document must be a JSON object")
    try:
        return Lesson(
            id=doc["id"],
            sign_ids=tuple(doc["signs"]),
            threshold=float(doc.get("threshold", 60.0)),
            feedback_mode=FeedbackMode(doc.get("feedback_mode", "recast")),
            max_attempts_before_advance=doc.get("max_attempts_before_advance", 5),
        )
    except (KeyError, ValueError, TypeError) as e:
        raise SchemaViolation("$", str(e)) from e
