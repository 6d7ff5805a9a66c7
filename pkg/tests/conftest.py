import numpy as np
import pytest

from signcoach.handshape import SwarmConfig
from signcoach.samples import (
    fixture_template_short,
    sample_library,
    sample_templates,
    write_sample_store,
)
from signcoach.session import PipelineConfig
from signcoach.skeleton import Frame, N_JOINTS, NormalizedSequence, SkeletonSequence


@pytest.fixture(scope="session")
def library():
    return sample_library()


@pytest.fixture(scope="session")
def templates():
    return {t.id: t for t in sample_templates()}


@pytest.fixture(scope="session")
def short_template():
    return fixture_template_short()


@pytest.fixture()
def pipeline_cfg():
    return PipelineConfig(swarm=SwarmConfig(seed=0))


@pytest.fixture()
def sample_store(tmp_path):
    root = tmp_path / "store"
    write_sample_store(root)
    return root


def make_random_sequence(rng, n_frames=6, scale=0.5, base_t=0, step=40):
    """Random but valid raw sequence; shoulders kept apart so it normalizes."""
    frames = []
    for k in range(n_frames):
        pos = rng.normal(0.0, scale, size=(N_JOINTS, 3))
        pos[4] = (-0.5, 1.0, 0.0)  # shoulder left
        pos[8] = (0.5, 1.0, 0.0)   # shoulder right
        frames.append(Frame(timestamp_ms=base_t + k * step, positions=pos,
                            tracked=np.ones(N_JOINTS, dtype=bool)))
    return SkeletonSequence(frames=tuple(frames), nominal_rate_hz=1000.0 / step)


def make_scalar_sequence(values, joint=11, step=100):
    """1-joint 'scalar' sequence: hand-right x carries the value, everything
    else sits at the origin."""
    frames = []
    for k, v in enumerate(values):
        pos = np.zeros((N_JOINTS, 3))
        pos[joint, 0] = v
        frames.append(Frame(timestamp_ms=k * step, positions=pos,
                            tracked=np.ones(N_JOINTS, dtype=bool)))
    return NormalizedSequence(frames=tuple(frames), nominal_rate_hz=1000.0 / step,
                              origin_offsets=np.zeros((len(values), 3)), scale=1.0)
