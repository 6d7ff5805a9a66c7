"""Handshape matching: particle-swarm refinement against a shape library.

Each library shape seeds one swarm sub-run that refines the observed angle
vector inside a box around the shape; the shape whose refinement lands
closest to the observation wins.  A brute-force nearest-neighbor oracle is
provided for verification.
"""

from __future__ import annotations

import logging
import secrets
from dataclasses import dataclass

import numpy as np

from .skeleton import HandObservation, Handshape, SignTemplate, angle_bounds

logger = logging.getLogger(__name__)

INIT_BIAS_RANGE_DEG = 10.0   # a third of each sub-run's particles start here
REFINE_BOX_DEG = 20.0        # refinement box half-width around each shape


class EmptyLibrary(ValueError):
    pass


@dataclass(frozen=True)
class HandshapeLibrary:
    shapes: tuple[Handshape, ...]

    def __post_init__(self):
        shapes = tuple(self.shapes)
        if len(shapes) < 2:
            raise EmptyLibrary("library needs at least 2 shapes")
        ids = [s.id for s in shapes]
        if len(set(ids)) != len(ids):
            raise ValueError("handshape ids must be unique")
        object.__setattr__(self, "shapes", shapes)

    @property
    def min_pairwise_separation(self) -> float:
        vecs = np.stack([s.angles for s in self.shapes])
        diffs = vecs[:, None, :] - vecs[None, :, :]
        d = np.linalg.norm(diffs, axis=2)
        np.fill_diagonal(d, np.inf)
        sep = float(d.min())
        if sep <= 0:
            raise ValueError("library contains duplicate angle vectors")
        return sep

    def by_id(self, shape_id: str) -> Handshape:
        for s in self.shapes:
            if s.id == shape_id:
                return s
        raise KeyError(shape_id)


@dataclass(frozen=True)
class SwarmConfig:
    particles: int = 30
    iterations: int = 100
    inertia: float = 0.72
    cognitive: float = 1.49
    social: float = 1.49
    velocity_clamp: float = 0.2  # fraction of per-dimension search range
    seed: int | None = None

    def __post_init__(self):
        if self.particles < 2:
            raise ValueError("particles must be >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not (0.0 <= self.inertia < 1.0):
            raise ValueError("inertia must be in [0, 1)")
        if self.cognitive <= 0 or self.social <= 0:
            raise ValueError("cognitive and social factors must be > 0")


@dataclass(frozen=True)
class HandshapeMatch:
    best_id: str
    refined_angles: np.ndarray
    residual: float
    score: float

    def __post_init__(self):
        if self.residual < 0:
            raise ValueError("residual must be >= 0")
        if not (0.0 <= self.score <= 100.0):
            raise ValueError("score must be in [0, 100]")
        ang = np.asarray(self.refined_angles, dtype=float)
        ang.setflags(write=False)
        object.__setattr__(self, "refined_angles", ang)


def swarm_optimize(fitness, bounds, cfg: SwarmConfig,
                   init_positions: np.ndarray | None = None,
                   trace: list | None = None,
                   vectorized: bool = False):
    """Global-best particle swarm minimization over a box.

    fitness maps an (n_dims,) vector to a number; bounds is (lo, hi) arrays.
    Positions stay clamped to bounds; deterministic given cfg.seed.  Extra
    init_positions rows override the uniform initialization of the first
    particles.  If trace is given, the best fitness after each iteration is
    appended to it.  vectorized=True means fitness accepts the whole
    (particles, n_dims) matrix and returns one value per row.
    """
    lo = np.asarray(bounds[0], dtype=float)
    hi = np.asarray(bounds[1], dtype=float)
    if lo.shape != hi.shape or np.any(lo >= hi) or not np.all(np.isfinite(lo) & np.isfinite(hi)):
        raise ValueError("bounds must be finite with lo < hi per dimension")
    dims = lo.size
    span = hi - lo
    vmax = cfg.velocity_clamp * span

    seed = cfg.seed
    if seed is None:
        seed = secrets.randbits(63)
        logger.info("swarm_optimize: no seed supplied, drew %d from entropy", seed)
    rng = np.random.default_rng(seed)

    x = lo + rng.uniform(size=(cfg.particles, dims)) * span
    if init_positions is not None:
        init = np.clip(np.atleast_2d(init_positions), lo, hi)
        k = min(len(init), cfg.particles)
        x[:k] = init[:k]
    v = rng.uniform(-1.0, 1.0, size=(cfg.particles, dims)) * vmax

    def evaluate(positions):
        if vectorized:
            return np.asarray(fitness(positions), dtype=float)
        return np.array([fitness(p) for p in positions], dtype=float)

    f = evaluate(x)
    pbest_x = x.copy()
    pbest_f = f.copy()
    g = int(np.argmin(pbest_f))
    gbest_x = pbest_x[g].copy()
    gbest_f = float(pbest_f[g])

    for _ in range(cfg.iterations):
        r1 = rng.uniform(size=(cfg.particles, dims))
        r2 = rng.uniform(size=(cfg.particles, dims))
        v = (cfg.inertia * v
             + cfg.cognitive * r1 * (pbest_x - x)
             + cfg.social * r2 * (gbest_x - x))
        v = np.clip(v, -vmax, vmax)
        x = np.clip(x + v, lo, hi)
        f = evaluate(x)

        improved = f < pbest_f
        pbest_x[improved] = x[improved]
        pbest_f[improved] = f[improved]
        g = int(np.argmin(pbest_f))
        if pbest_f[g] < gbest_f:
            gbest_f = float(pbest_f[g])
            gbest_x = pbest_x[g].copy()
        if trace is not None:
            trace.append(gbest_f)

    return gbest_x, gbest_f


def _sub_run_seeds(seed: int | None, count: int) -> list[int]:
    if seed is None:
        seed = secrets.randbits(63)
        logger.info("match_handshape: no seed supplied, drew %d from entropy", seed)
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def match_handshape(obs: HandObservation, lib: HandshapeLibrary,
                    cfg: SwarmConfig) -> HandshapeMatch:
    """Find the library shape whose refinement box best explains the observation.

    For each shape, one swarm sub-run minimizes the L2 distance to the
    observation inside a +/-20 degree box around the shape's angles; a third
    of its particles (and one particle pinned to the shape itself) start
    within +/-10 degrees of the shape.  Ties go to the lower library index.
    """
    glo, ghi = angle_bounds()
    residual_scale = lib.min_pairwise_separation / 2.0
    seeds = _sub_run_seeds(cfg.seed, len(lib.shapes))
    target = obs.angles

    def fitness(x):
        return np.linalg.norm(x - target, axis=1)

    best_idx = -1
    best_res = np.inf
    best_x = None
    for idx, shape in enumerate(lib.shapes):
        lo = np.maximum(glo, shape.angles - REFINE_BOX_DEG)
        hi = np.minimum(ghi, shape.angles + REFINE_BOX_DEG)
        sub_cfg = SwarmConfig(particles=cfg.particles, iterations=cfg.iterations,
                              inertia=cfg.inertia, cognitive=cfg.cognitive,
                              social=cfg.social, velocity_clamp=cfg.velocity_clamp,
                              seed=seeds[idx])
        rng = np.random.default_rng(seeds[idx] ^ 0x5EED)
        n_biased = max(1, cfg.particles // 3)
        biased = shape.angles + rng.uniform(-INIT_BIAS_RANGE_DEG, INIT_BIAS_RANGE_DEG,
                                            size=(n_biased, 15))
        # Pin two particles: the candidate shape itself and the box-projected
        # observation. Keeps residuals deterministic so index tie-breaks hold.
        init = np.vstack([shape.angles[None, :],
                          np.clip(target, lo, hi)[None, :],
                          biased])
        x, res = swarm_optimize(fitness, (lo, hi), sub_cfg, init_positions=init,
                                vectorized=True)
        if res < best_res:  # strict: earlier index wins ties
            best_res = res
            best_idx = idx
            best_x = x

    score = 100.0 * max(0.0, 1.0 - best_res / residual_scale)
    return HandshapeMatch(best_id=lib.shapes[best_idx].id,
                          refined_angles=best_x,
                          residual=float(best_res),
                          score=score)


def oracle_match(obs: HandObservation, lib: HandshapeLibrary) -> HandshapeMatch:
    """Exact nearest neighbor over angle vectors; no refinement."""
    residual_scale = lib.min_pairwise_separation / 2.0
    best_idx = -1
    best_res = np.inf
    for idx, shape in enumerate(lib.shapes):
        d = float(np.linalg.norm(obs.angles - shape.angles))
        if d < best_res:
            best_res = d
            best_idx = idx
    score = 100.0 * max(0.0, 1.0 - best_res / residual_scale)
    return HandshapeMatch(best_id=lib.shapes[best_idx].id,
                          refined_angles=lib.shapes[best_idx].angles,
                          residual=best_res,
                          score=score)


@dataclass(frozen=True)
class KeyframeAssessment:
    keyframe_index: int
    timestamp_ms: int
    hand: str
    expected_id: str
    observed_id: str | None
    matched: bool


@dataclass(frozen=True)
class HandshapeAssessment:
    """Per-keyframe handshape results for one attempt."""

    score: float
    keyframes: tuple[KeyframeAssessment, ...]
    hand_data_absent: bool


def handshape_score_for_attempt(hands, template: SignTemplate,
                                lib: HandshapeLibrary,
                                cfg: SwarmConfig) -> HandshapeAssessment:
    """Score attempt handshapes at each template keyframe.

    Each keyframe consumes the attempt observation for the same hand that is
    nearest in time.  With no hand stream at all the attempt is scored in
    skeleton-only mode: 100 with the hand_data_absent flag set.
    """
    if not template.handshape_keyframes:
        raise ValueError("template has no handshape keyframes")
    hands = list(hands or [])
    if not hands:
        keyframes = tuple(
            KeyframeAssessment(i, t, hand, shape_id, None, True)
            for i, (t, hand, shape_id) in enumerate(template.handshape_keyframes))
        return HandshapeAssessment(score=100.0, keyframes=keyframes,
                                   hand_data_absent=True)

    assessments = []
    correct = 0
    for i, (t, hand, shape_id) in enumerate(template.handshape_keyframes):
        candidates = [o for o in hands if o.hand == hand] or hands
        obs = min(candidates, key=lambda o: (abs(o.timestamp_ms - t), o.timestamp_ms))
        match = match_handshape(obs, lib, cfg)
        matched = match.best_id == shape_id
        correct += matched
        assessments.append(KeyframeAssessment(i, t, hand, shape_id, match.best_id, matched))
    score = 100.0 * correct / len(assessments)
    return HandshapeAssessment(score=score, keyframes=tuple(assessments),
                               hand_data_absent=False)
