"""Dynamic-time-warping alignment of an attempt against a reference motion.

Symmetric unit-step DTW (diagonal, ref-advance, attempt-advance) over a
weighted per-joint Euclidean local cost, with an optional Sakoe-Chiba style
band.  The normalized cost maps linearly to a movement score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .skeleton import N_JOINTS, Frame, JointId, NormalizedSequence


class BandInfeasible(ValueError):
    """Raised when the sequence length difference exceeds the band radius."""


DEFAULT_COST_SCALE = 0.8


@dataclass(frozen=True)
class DtwConfig:
    """Alignment parameters.

    band_radius None means "choose automatically": wide enough for the
    length difference plus 20% of the longer sequence (at least 5 frames).
    cost_scale is the normalized cost that maps to movement score 0.
    """

    joint_weights: dict[JointId, float] = field(default_factory=dict)
    band_radius: int | None = None
    cost_scale: float = DEFAULT_COST_SCALE

    def __post_init__(self):
        if self.band_radius is not None and self.band_radius < 1:
            raise ValueError("band_radius must be >= 1 when finite")
        if self.cost_scale <= 0:
            raise ValueError("cost_scale must be positive")

    def weight_vector(self) -> np.ndarray:
        w = np.zeros(N_JOINTS)
        for j, wt in self.joint_weights.items():
            w[int(j)] = wt
        return w

    def effective_band(self, m: int, n: int) -> int:
        if self.band_radius is not None:
            return self.band_radius
        return max(5, math.ceil(0.2 * max(m, n)), abs(m - n))


@dataclass(frozen=True)
class Alignment:
    """A warping path with per-step and aggregate costs."""

    path: tuple[tuple[int, int], ...]
    step_costs: tuple[float, ...]
    total_cost: float

    def __post_init__(self):
        if len(self.path) != len(self.step_costs):
            raise ValueError("path and step_costs must have equal length")
        if self.path[0] != (0, 0):
            raise ValueError("path must start at (0, 0)")
        for (i0, j0), (i1, j1) in zip(self.path, self.path[1:]):
            di, dj = i1 - i0, j1 - j0
            if (di, dj) not in ((1, 1), (1, 0), (0, 1)):
                raise ValueError(f"illegal step ({di}, {dj}) in path")
        if abs(self.total_cost - sum(self.step_costs)) > 1e-9:
            raise ValueError("total_cost must equal sum of step_costs")

    @property
    def normalized_cost(self) -> float:
        return self.total_cost / len(self.path)


def frame_distance(a: Frame, b: Frame, weights: np.ndarray) -> float:
    """Weighted sum of per-joint Euclidean distances between two frames."""
    d = np.linalg.norm(a.positions - b.positions, axis=1)
    return float(np.dot(weights, d))


def _local_cost_matrix(ref_pos: np.ndarray, att_pos: np.ndarray,
                       weights: np.ndarray) -> np.ndarray:
    # (m, n) matrix of weighted frame distances; only active joints contribute
    active = np.nonzero(weights)[0]
    diff = ref_pos[:, None, active, :] - att_pos[None, :, active, :]
    dists = np.linalg.norm(diff, axis=3)  # (m, n, |active|)
    return dists @ weights[active]


def dtw_align(ref: NormalizedSequence, attempt: NormalizedSequence,
              cfg: DtwConfig) -> Alignment:
    """Minimum-cost monotone alignment of attempt frames to reference frames.

    Ties are broken deterministically: prefer the diagonal step, then
    ref-advance, then attempt-advance.
    """
    m, n = len(ref), len(attempt)
    band = cfg.effective_band(m, n)
    if abs(m - n) > band:
        raise BandInfeasible(
            f"length difference {abs(m - n)} exceeds band radius {band}")

    weights = cfg.weight_vector()
    local = _local_cost_matrix(ref.positions_array(), attempt.positions_array(), weights)

    inf = np.inf
    acc = np.full((m, n), inf)
    acc[0, 0] = local[0, 0]
    for i in range(m):
        j_lo = max(0, i - band)
        j_hi = min(n - 1, i + band)
        for j in range(j_lo, j_hi + 1):
            if i == 0 and j == 0:
                continue
            best = inf
            if i > 0 and j > 0:
                best = acc[i - 1, j - 1]
            if i > 0:
                best = min(best, acc[i - 1, j])
            if j > 0:
                best = min(best, acc[i, j - 1])
            acc[i, j] = local[i, j] + best

    # Backtrack with the stated tie-break preference.
    path = [(m - 1, n - 1)]
    i, j = m - 1, n - 1
    while (i, j) != (0, 0):
        candidates = []
        if i > 0 and j > 0:
            candidates.append((acc[i - 1, j - 1], 0, (i - 1, j - 1)))
        if i > 0:
            candidates.append((acc[i - 1, j], 1, (i - 1, j)))
        if j > 0:
            candidates.append((acc[i, j - 1], 2, (i, j - 1)))
        _, _, (i, j) = min(candidates)
        path.append((i, j))
    path.reverse()

    step_costs = tuple(float(local[i, j]) for i, j in path)
    return Alignment(path=tuple(path), step_costs=step_costs,
                     total_cost=float(sum(step_costs)))


def movement_score(alignment: Alignment, cfg: DtwConfig) -> float:
    """Map normalized alignment cost to a percentage, 100 at cost 0."""
    return 100.0 * max(0.0, 1.0 - alignment.normalized_cost / cfg.cost_scale)
