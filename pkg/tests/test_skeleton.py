import numpy as np
import pytest

from signcoach.skeleton import (
    DegenerateSkeleton,
    Frame,
    JointId,
    N_JOINTS,
    SkeletonSequence,
    normalize,
    resample,
    validate_signing_space,
)

from conftest import make_random_sequence


def _translate(seq, offset):
    offset = np.asarray(offset, dtype=float)
    frames = tuple(Frame(timestamp_ms=f.timestamp_ms, positions=f.positions + offset,
                         tracked=f.tracked) for f in seq.frames)
    return SkeletonSequence(frames=frames, nominal_rate_hz=seq.nominal_rate_hz)


class TestNormalize:
    def test_forced_by_definition(self):
        # hip at (0.1, 0, 0), shoulder distance 0.4, hand at (0.3, 0.2, 0.1)
        pos = np.zeros((N_JOINTS, 3))
        pos[JointId.HIP_CENTER] = (0.1, 0.0, 0.0)
        pos[JointId.SHOULDER_LEFT] = (-0.1, 1.0, 0.0)
        pos[JointId.SHOULDER_RIGHT] = (0.3, 1.0, 0.0)
        pos[JointId.HAND_RIGHT] = (0.3, 0.2, 0.1)
        frames = tuple(Frame(timestamp_ms=t, positions=pos, tracked=np.ones(N_JOINTS, bool))
                       for t in (0, 100))
        out = normalize(SkeletonSequence(frames=frames, nominal_rate_hz=10.0))
        np.testing.assert_allclose(out.frames[0].position(JointId.HAND_RIGHT),
                                   (0.5, 0.5, 0.25), atol=1e-12)
        assert out.scale == pytest.approx(0.4)

    def test_hip_center_at_origin_and_unit_shoulders(self):
        rng = np.random.default_rng(3)
        out = normalize(make_random_sequence(rng))
        for f in out.frames:
            np.testing.assert_allclose(f.position(JointId.HIP_CENTER), 0.0, atol=1e-9)
        first = out.frames[0]
        d = np.linalg.norm(first.position(JointId.SHOULDER_LEFT)
                           - first.position(JointId.SHOULDER_RIGHT))
        assert d == pytest.approx(1.0, abs=1e-6)

    def test_idempotent_over_random_sequences(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            seq = make_random_sequence(rng, n_frames=4)
            once = normalize(seq)
            twice = normalize(once)
            np.testing.assert_allclose(twice.positions_array(),
                                       once.positions_array(), atol=1e-9)
            assert twice.scale == pytest.approx(1.0, abs=1e-9)

    def test_translation_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            seq = make_random_sequence(rng, n_frames=4)
            moved = _translate(seq, rng.normal(0, 1, size=3))
            np.testing.assert_allclose(normalize(moved).positions_array(),
                                       normalize(seq).positions_array(), atol=1e-9)

    def test_scale_invariance_about_hip(self):
        rng = np.random.default_rng(6)
        seq = make_random_sequence(rng, n_frames=4)
        c = 2.7
        frames = []
        for f in seq.frames:
            hip = f.position(JointId.HIP_CENTER)
            frames.append(Frame(timestamp_ms=f.timestamp_ms,
                                positions=hip + c * (f.positions - hip),
                                tracked=f.tracked))
        scaled = SkeletonSequence(frames=tuple(frames), nominal_rate_hz=seq.nominal_rate_hz)
        np.testing.assert_allclose(normalize(scaled).positions_array(),
                                   normalize(seq).positions_array(), atol=1e-9)

    def test_degenerate_shoulders_rejected(self):
        pos = np.zeros((N_JOINTS, 3))
        pos[JointId.SHOULDER_LEFT] = (0.0, 1.0, 0.0)
        pos[JointId.SHOULDER_RIGHT] = (0.01, 1.0, 0.0)
        frames = tuple(Frame(timestamp_ms=t, positions=pos, tracked=np.ones(N_JOINTS, bool))
                       for t in (0, 100))
        with pytest.raises(DegenerateSkeleton):
            normalize(SkeletonSequence(frames=frames, nominal_rate_hz=10.0))


class TestResample:
    def test_own_rate_is_identity(self):
        rng = np.random.default_rng(2)
        seq = make_random_sequence(rng, n_frames=5, step=250)  # 0..1000 ms
        out = resample(seq, 5.0)  # 5 frames over 1 s
        assert len(out) == 5
        np.testing.assert_allclose(out.positions_array(), seq.positions_array(),
                                   atol=1e-9)
        assert list(out.timestamps_ms) == list(seq.timestamps_ms)

    def test_linear_midpoint(self):
        pos0 = np.zeros((N_JOINTS, 3))
        pos1 = np.zeros((N_JOINTS, 3))
        pos1[JointId.HAND_RIGHT] = (1.0, 0.0, 0.0)
        frames = (Frame(timestamp_ms=0, positions=pos0, tracked=np.ones(N_JOINTS, bool)),
                  Frame(timestamp_ms=1000, positions=pos1, tracked=np.ones(N_JOINTS, bool)))
        out = resample(SkeletonSequence(frames=frames, nominal_rate_hz=1.0), 3.0)
        assert len(out) == 3
        assert out.frames[1].timestamp_ms == 500
        np.testing.assert_allclose(out.frames[1].position(JointId.HAND_RIGHT),
                                   (0.5, 0.0, 0.0), atol=1e-12)

    def test_endpoints_and_duration_preserved(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            seq = make_random_sequence(rng, n_frames=int(rng.integers(3, 12)))
            down = resample(seq, 10.0)
            up = resample(down, 60.0)
            for out in (down, up):
                assert out.frames[0].timestamp_ms == seq.frames[0].timestamp_ms
                assert out.frames[-1].timestamp_ms == seq.frames[-1].timestamp_ms
                np.testing.assert_allclose(out.frames[0].positions,
                                           seq.frames[0].positions, atol=1e-12)
                np.testing.assert_allclose(out.frames[-1].positions,
                                           seq.frames[-1].positions, atol=1e-12)

    def test_rate_bounds(self):
        rng = np.random.default_rng(1)
        seq = make_random_sequence(rng)
        with pytest.raises(ValueError):
            resample(seq, 0.5)
        with pytest.raises(ValueError):
            resample(seq, 200.0)


def _neutral_frame(t=0):
    from signcoach.samples import base_pose
    pos = base_pose()
    # hands comfortably in front of the chest
    pos[JointId.HAND_LEFT] = (-0.1, 1.2, 2.3)
    pos[JointId.HAND_RIGHT] = (0.1, 1.2, 2.3)
    pos[JointId.WRIST_LEFT] = (-0.12, 1.15, 2.35)
    pos[JointId.WRIST_RIGHT] = (0.12, 1.15, 2.35)
    return Frame(timestamp_ms=t, positions=pos, tracked=np.ones(N_JOINTS, bool))


class TestSigningSpace:
    def _normalized(self, frames):
        return normalize(SkeletonSequence(frames=tuple(frames), nominal_rate_hz=25.0))

    def test_neutral_space_is_clean(self):
        seq = self._normalized([_neutral_frame(0), _neutral_frame(40)])
        assert validate_signing_space(seq) == []

    def test_behind_body_flagged_with_magnitude(self):
        from signcoach.samples import base_pose
        pos = base_pose()
        # 0.3 normalized units behind the torso plane (shoulder width 0.4 m)
        pos[JointId.HAND_RIGHT] = (0.1, 1.0, 2.5 + 0.3 * 0.4)
        bad = Frame(timestamp_ms=40, positions=pos, tracked=np.ones(N_JOINTS, bool))
        seq = self._normalized([_neutral_frame(0), bad])
        kinds = [(v.kind, v.joint) for v in validate_signing_space(seq)]
        assert ("behind-body", JointId.HAND_RIGHT) in kinds
        v = [v for v in validate_signing_space(seq) if v.kind == "behind-body"][0]
        assert v.magnitude == pytest.approx(0.3, abs=0.02)
        assert v.frame_index == 1

    def test_on_plane_is_within_tolerance(self):
        from signcoach.samples import base_pose
        pos = base_pose()
        pos[JointId.HAND_RIGHT] = (0.15, 1.1, 2.5)  # exactly on the torso plane
        f = Frame(timestamp_ms=40, positions=pos, tracked=np.ones(N_JOINTS, bool))
        seq = self._normalized([_neutral_frame(0), f])
        assert [v for v in validate_signing_space(seq) if v.kind == "behind-body"] == []

    def test_below_floor_flagged(self):
        from signcoach.samples import base_pose
        pos = base_pose()
        pos[JointId.HAND_LEFT] = (-0.15, 0.02, 2.5)  # below the ankles (y=0.08)
        f = Frame(timestamp_ms=40, positions=pos, tracked=np.ones(N_JOINTS, bool))
        seq = self._normalized([_neutral_frame(0), f])
        kinds = [(v.kind, v.joint) for v in validate_signing_space(seq)]
        assert ("below-floor-of-space", JointId.HAND_LEFT) in kinds

    def test_beyond_reach_flagged(self):
        from signcoach.samples import base_pose
        pos = base_pose()
        pos[JointId.HAND_RIGHT] = (0.2 + 2.6 * 0.4, 1.38, 2.5)
        f = Frame(timestamp_ms=40, positions=pos, tracked=np.ones(N_JOINTS, bool))
        seq = self._normalized([_neutral_frame(0), f])
        kinds = [(v.kind, v.joint) for v in validate_signing_space(seq)]
        assert ("beyond-reach", JointId.HAND_RIGHT) in kinds

    def test_neutral_box_property(self):
        # random hand placements inside the neutral box never violate
        rng = np.random.default_rng(17)
        from signcoach.samples import base_pose
        for _ in range(50):
            pos = base_pose()
            for j in (JointId.HAND_LEFT, JointId.HAND_RIGHT,
                      JointId.WRIST_LEFT, JointId.WRIST_RIGHT):
                # within reach of shoulder-center, in front, above the floor
                pos[j] = (rng.uniform(-0.4, 0.4),
                          rng.uniform(0.7, 1.6),
                          rng.uniform(2.1, 2.48))
            f = Frame(timestamp_ms=40, positions=pos, tracked=np.ones(N_JOINTS, bool))
            seq = self._normalized([_neutral_frame(0), f])
            assert validate_signing_space(seq) == []
