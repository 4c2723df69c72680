"""Radar picture, weapon engagement zone estimation, and tactical indices.

Radar detection gates on slant range and antenna gimbal; each side fuses
its two ships' detections into one shared picture every tick (datalink
abstraction).  WEZ estimation scales a base missile range by shooter
altitude, shooter speed, and target aspect.  The offense index measures
how deep a target sits inside own WEZ; the vulnerability index is the
same measure with roles swapped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from bvrsim.scenario import NM_TO_M
from bvrsim.sim.aircraft import AircraftState

RADAR_RANGE_M = 60.0 * NM_TO_M
RADAR_GIMBAL_DEG = 60.0

WEZ_BASE_RANGE_M = 40.0 * NM_TO_M  # best-case launch range, all factors at 1
NEZ_FRACTION = 0.3
# Target-aspect gain: cold (tail-on, aspect 0) to hot (head-on, aspect 180).
ASPECT_GAIN_TABLE = ((0.0, 0.35), (180.0, 1.0))
ALT_CEILING_M = 15000.0
SPEED_CEILING_KN = 600.0


@dataclass(frozen=True)
class WezEstimate:
    r_max_m: float
    r_nez_m: float
    valid: bool

INVALID_WEZ = WezEstimate(r_max_m=-1.0, r_nez_m=-1.0, valid=False)


def wrap180(angle_deg: float) -> float:
    """Fold an angle into (-180, 180]."""
    a = angle_deg % 360.0
    return a - 360.0 if a > 180.0 else a


def bearing_deg(from_x: float, from_y: float, to_x: float, to_y: float) -> float:
    """Compass bearing (0 = north, clockwise) from one point to another."""
    return math.degrees(math.atan2(to_x - from_x, to_y - from_y)) % 360.0


def slant_range_m(a: AircraftState, b: AircraftState) -> float:
    dx = b.x_m - a.x_m
    dy = b.y_m - a.y_m
    dz = b.altitude_m - a.altitude_m
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def aspect_deg(reference: AircraftState, target: AircraftState) -> float:
    """Angle between the target's rearward axis and its line of sight to
    the reference, in [0, 180].  0 means the target points straight away
    (cold), 180 means it points at the reference (hot)."""
    los = bearing_deg(target.x_m, target.y_m, reference.x_m, reference.y_m)
    rearward = target.heading_deg + 180.0
    return abs(wrap180(los - rearward))


def delta_heading_deg(a: AircraftState, b: AircraftState) -> float:
    """Unsigned angle between the two longitudinal axes, in [0, 180]."""
    return abs(wrap180(a.heading_deg - b.heading_deg))


def radar_contacts(
    own: AircraftState, others: Iterable[AircraftState]
) -> list[AircraftState]:
    """Opponents inside radar range and within the antenna gimbal."""
    contacts = []
    for other in others:
        if other.side == own.side or not other.alive:
            continue
        if slant_range_m(own, other) > RADAR_RANGE_M:
            continue
        off_nose = wrap180(
            bearing_deg(own.x_m, own.y_m, other.x_m, other.y_m) - own.heading_deg
        )
        if abs(off_nose) <= RADAR_GIMBAL_DEG:
            contacts.append(other)
    return contacts


def merged_contact_ids(
    team: Iterable[AircraftState], others: Iterable[AircraftState]
) -> set[str]:
    """Union of the team's single-ship pictures, shared over datalink."""
    others = list(others)
    merged: set[str] = set()
    for member in team:
        if member.alive:
            merged.update(c.ac_id for c in radar_contacts(member, others))
    return merged


def _aspect_gain(aspect: float) -> float:
    (x0, y0), (x1, y1) = ASPECT_GAIN_TABLE
    if aspect <= x0:
        return y0
    if aspect >= x1:
        return y1
    return y0 + (y1 - y0) * (aspect - x0) / (x1 - x0)


def wez_estimate(
    shooter: AircraftState, target: AircraftState, detected: bool = True
) -> WezEstimate:
    """Estimated launch envelope of the shooter's weapon against the target.

    Undetected targets cannot be ranged; the estimate is then invalid and
    carries -1 sentinels.
    """
    if not detected:
        return INVALID_WEZ
    f_alt = 0.5 + 0.5 * shooter.altitude_m / ALT_CEILING_M
    f_speed = 0.8 + 0.2 * shooter.speed_kn / SPEED_CEILING_KN
    f_aspect = _aspect_gain(aspect_deg(shooter, target))
    r_max = WEZ_BASE_RANGE_M * f_alt * f_speed * f_aspect
    return WezEstimate(r_max_m=r_max, r_nez_m=NEZ_FRACTION * r_max, valid=True)


def offense_index(own: AircraftState, target: AircraftState, wez: WezEstimate) -> float:
    """How deep the target sits in own WEZ: 0 at r_max, 1 inside the NEZ."""
    if not wez.valid:
        return 0.0
    rng = slant_range_m(own, target)
    if rng >= wez.r_max_m:
        return 0.0
    if rng <= wez.r_nez_m:
        return 1.0
    return (wez.r_max_m - rng) / (wez.r_max_m - wez.r_nez_m)


def vulnerability_index(
    own: AircraftState, threat: AircraftState, threat_wez: WezEstimate
) -> float:
    """Own exposure to the threat's weapon: offense with roles swapped."""
    return offense_index(threat, own, threat_wez)
