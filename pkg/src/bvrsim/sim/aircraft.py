"""Point-mass aircraft kinematics.

Three degrees of freedom: heading, speed, altitude.  Commands are clamped
to platform limits rather than rejected, so the integrator is total.  The
horizontal displacement integrates along the mean heading and mean speed
of the step, which keeps turns circular at the tick sizes the engine uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from bvrsim.scenario import KN_TO_MPS, MISSILES_PER_AIRCRAFT

G_MPS2 = 9.80665

SPEED_MIN_KN = 150.0
SPEED_MAX_KN = 600.0
ALT_MIN_M = 1000.0
ALT_MAX_M = 15000.0
MAX_ACCEL_KN_S = 15.0  # longitudinal, about 0.8 g
MAX_CLIMB_MPS = 100.0


@dataclass
class AircraftState:
    ac_id: str
    side: str
    x_m: float
    y_m: float
    altitude_m: float
    heading_deg: float
    speed_kn: float
    g_limit: float = 9.0
    missiles_avail: int = MISSILES_PER_AIRCRAFT
    alive: bool = True


@dataclass(frozen=True)
class ManeuverCommand:
    turn_dps: float = 0.0
    accel_kn_s: float = 0.0
    climb_mps: float = 0.0


def max_turn_rate_dps(speed_kn: float, g_limit: float) -> float:
    """Level-turn rate limit for a sustained load factor of g_limit."""
    v_mps = max(speed_kn, SPEED_MIN_KN) * KN_TO_MPS
    omega = G_MPS2 * math.sqrt(g_limit * g_limit - 1.0) / v_mps
    return math.degrees(omega)


def _clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def step_kinematics(
    state: AircraftState, command: ManeuverCommand, dt: float
) -> AircraftState:
    """Advance one tick; returns a new state, the input is untouched."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    turn_limit = max_turn_rate_dps(state.speed_kn, state.g_limit)
    turn = _clamp(command.turn_dps, -turn_limit, turn_limit)
    accel = _clamp(command.accel_kn_s, -MAX_ACCEL_KN_S, MAX_ACCEL_KN_S)
    climb = _clamp(command.climb_mps, -MAX_CLIMB_MPS, MAX_CLIMB_MPS)

    new_heading = (state.heading_deg + turn * dt) % 360.0
    new_speed = _clamp(state.speed_kn + accel * dt, SPEED_MIN_KN, SPEED_MAX_KN)
    new_alt = _clamp(state.altitude_m + climb * dt, ALT_MIN_M, ALT_MAX_M)

    mean_heading = math.radians(state.heading_deg + turn * dt * 0.5)
    mean_speed_mps = (state.speed_kn + new_speed) * 0.5 * KN_TO_MPS
    dist = mean_speed_mps * dt
    return replace(
        state,
        x_m=state.x_m + dist * math.sin(mean_heading),
        y_m=state.y_m + dist * math.cos(mean_heading),
        altitude_m=new_alt,
        heading_deg=new_heading,
        speed_kn=new_speed,
    )
