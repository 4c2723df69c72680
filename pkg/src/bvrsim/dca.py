"""DCA mission-success index.

Scores a defending fighter's situation in (0, 1) from three factors:
missile economy (fraction of the loadout still available), own distance
to the CAP point, and the enemies' distances from the CAP point.  Both
distance factors pass through a linear distance-to-logit interpolation
followed by a sigmoid, so the influence of a distance saturates outside
a band around the CAP point.

All functions here are pure and stateless; the simulation engine calls
them every tick and the dataset builder re-derives targets from logged
samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Logit value mapped to the 99% sigmoid output.  Kept at the rounded
# operational constant rather than ln(99) = 4.59512...; the difference is
# far below any tolerance used downstream.
LOGIT_99 = 4.5951


@dataclass(frozen=True)
class SigmoidLimits:
    """Distance-to-logit calibration: where the sigmoid hits 99% and 1%.

    ``x_99 < x_1`` makes the factor decay with distance (own ship vs CAP),
    ``x_99 > x_1`` makes it grow with distance (enemies vs CAP).
    """

    x_99: float  # meters at which the sigmoid outputs 0.99
    x_1: float  # meters at which the sigmoid outputs 0.01
    y_99: float = LOGIT_99
    y_1: float = -LOGIT_99

    def __post_init__(self):
        if self.x_99 == self.x_1:
            raise ValueError("sigmoid limits need two distinct anchor distances")
        if not (self.y_99 > 0 and self.y_1 == -self.y_99):
            raise ValueError("logit anchors must satisfy y_99 = -y_1 > 0")


# Default calibration: full credit for sitting within 8 km of the CAP point,
# none beyond 12 km; mirrored band for keeping enemies out.
REF_LIMITS = SigmoidLimits(x_99=8_000.0, x_1=12_000.0)
ENEMY_LIMITS = SigmoidLimits(x_99=12_000.0, x_1=8_000.0)


@dataclass(frozen=True)
class DcaIndexParams:
    """Weights and sigmoid calibration for the three index factors."""

    w1: float = 0.2  # missile economy
    w2: float = 0.4  # own distance to CAP
    w3: float = 0.4  # enemy distances to CAP
    ref_limits: SigmoidLimits = field(default=REF_LIMITS)
    enemy_limits: SigmoidLimits = field(default=ENEMY_LIMITS)

    def __post_init__(self):
        if min(self.w1, self.w2, self.w3) < 0:
            raise ValueError("index weights must be non-negative")
        if abs(self.w1 + self.w2 + self.w3 - 1.0) > 1e-9:
            raise ValueError("index weights must sum to 1")
        if not self.ref_limits.x_99 < self.ref_limits.x_1:
            raise ValueError("reference limits must decay with distance (x_99 < x_1)")
        if not self.enemy_limits.x_99 > self.enemy_limits.x_1:
            raise ValueError("enemy limits must grow with distance (x_99 > x_1)")


DEFAULT_PARAMS = DcaIndexParams()


@dataclass(frozen=True)
class IndexSample:
    """One tick's index value."""

    t: float  # seconds since scenario start
    value: float  # in (0, 1)


def logit_interp(distance_m: float, limits: SigmoidLimits) -> float:
    """Map a distance to a sigmoid input by linear interpolation.

    The map is global: distances outside the anchor band extrapolate
    linearly and the sigmoid saturates downstream, so no clamping happens
    here.
    """
    if distance_m < 0:
        raise ValueError(f"distance must be non-negative, got {distance_m}")
    slope = (limits.y_99 - limits.y_1) / (limits.x_99 - limits.x_1)
    return slope * (distance_m - limits.x_1) + limits.y_1


def sigmoid(d: float) -> float:
    """Numerically stable logistic function 1 / (1 + e^-d)."""
    if d >= 0:
        return 1.0 / (1.0 + math.exp(-d))
    e = math.exp(d)
    return e / (1.0 + e)


def dca_index(
    m_avail: int,
    m_total: int,
    d_ref_m: float,
    enemy_dists_m: list[float] | tuple[float, ...],
    params: DcaIndexParams = DEFAULT_PARAMS,
) -> float:
    """Weighted composition of the three mission factors.

    ``d_ref_m`` is the reference aircraft's distance from the CAP point and
    ``enemy_dists_m`` the living enemies' distances from it.  An empty enemy
    list means every enemy is destroyed; the third factor is then 1.0, the
    limit of the enemy sigmoid as distances grow without bound.
    """
    if m_total < 1:
        raise ValueError("m_total must be at least 1")
    if not 0 <= m_avail <= m_total:
        raise ValueError(f"m_avail must lie in [0, {m_total}], got {m_avail}")
    if d_ref_m < 0 or any(d < 0 for d in enemy_dists_m):
        raise ValueError("distances must be non-negative")

    missile_factor = m_avail / m_total
    ref_factor = sigmoid(logit_interp(d_ref_m, params.ref_limits))
    if enemy_dists_m:
        # fsum keeps the factor exactly permutation-invariant.
        enemy_factor = math.fsum(
            sigmoid(logit_interp(d, params.enemy_limits)) for d in enemy_dists_m
        ) / len(enemy_dists_m)
    else:
        enemy_factor = 1.0
    return params.w1 * missile_factor + params.w2 * ref_factor + params.w3 * enemy_factor


def engagement_target(series: list[IndexSample]) -> float:
    """Mean index over an engagement's samples.

    The engine samples at a fixed tick rate, so the plain arithmetic mean
    is the time average.
    """
    if not series:
        raise ValueError("cannot average an empty index series")
    for a, b in zip(series, series[1:]):
        if not b.t > a.t:
            raise ValueError("sample timestamps must be strictly increasing")
    return math.fsum(s.value for s in series) / len(series)
