"""Kinematic missile flyout: pure pursuit with a boost-sustain-coast profile.

The seeker flies pure pursuit at the target's current position, rate
limited by a lateral-g bound.  Fuzing tests the closest approach over the
tick against relative motion, so fast crossings cannot step over the fuse
sphere.  A shot dies when it bleeds below the target's speed, exceeds its
flight-time budget, or loses its target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from bvrsim.scenario import KN_TO_MPS
from bvrsim.sim.aircraft import AircraftState, G_MPS2

FUSE_RADIUS_M = 500.0
BOOST_S = 5.0
BOOST_ACCEL_MPS2 = 200.0
SUSTAIN_S = 5.0
COAST_DECEL_MPS2 = 40.0
MAX_TURN_G = 40.0
MAX_FLIGHT_S = 120.0

HIT = "hit"
MISS_ENERGY = "energy"
MISS_TIMEOUT = "timeout"
MISS_TARGET_LOST = "target_lost"


@dataclass
class MissileState:
    missile_id: str
    shooter_id: str
    target_id: str
    x_m: float
    y_m: float
    alt_m: float
    ux: float  # velocity direction, unit vector
    uy: float
    uz: float
    speed_mps: float
    time_of_flight_s: float = 0.0
    active: bool = True


def launch(
    missile_id: str, shooter: AircraftState, target: AircraftState
) -> MissileState:
    dx = target.x_m - shooter.x_m
    dy = target.y_m - shooter.y_m
    dz = target.altitude_m - shooter.altitude_m
    norm = math.sqrt(dx * dx + dy * dy + dz * dz)
    if norm == 0.0:
        dx, dy, dz, norm = 0.0, 1.0, 0.0, 1.0
    return MissileState(
        missile_id=missile_id,
        shooter_id=shooter.ac_id,
        target_id=target.ac_id,
        x_m=shooter.x_m,
        y_m=shooter.y_m,
        alt_m=shooter.altitude_m,
        ux=dx / norm,
        uy=dy / norm,
        uz=dz / norm,
        speed_mps=shooter.speed_kn * KN_TO_MPS,
    )


def _profile_speed(speed: float, tof: float, dt: float) -> float:
    if tof < BOOST_S:
        return speed + BOOST_ACCEL_MPS2 * dt
    if tof < BOOST_S + SUSTAIN_S:
        return speed
    return speed - COAST_DECEL_MPS2 * dt


def missile_step(
    m: MissileState,
    target: AircraftState,
    target_vel_mps: tuple[float, float, float],
    dt: float,
) -> str | None:
    """Advance one tick in place; returns HIT, a miss reason, or None.

    ``target`` carries the position at the start of the tick and
    ``target_vel_mps`` its velocity over the tick, so the fuse check can
    use the true relative motion.
    """
    if not m.active:
        raise ValueError("cannot step an inactive missile")
    if not target.alive:
        m.active = False
        return MISS_TARGET_LOST

    speed = _profile_speed(m.speed_mps, m.time_of_flight_s, dt)

    # steer toward the target, limited by the lateral-g bound
    dx = target.x_m - m.x_m
    dy = target.y_m - m.y_m
    dz = target.altitude_m - m.alt_m
    dist = math.sqrt(dx * dx + dy * dy + dz * dz)
    if dist > 0.0:
        wx, wy, wz = dx / dist, dy / dist, dz / dist
        dot = max(-1.0, min(1.0, m.ux * wx + m.uy * wy + m.uz * wz))
        angle = math.acos(dot)
        max_angle = MAX_TURN_G * G_MPS2 / max(speed, 1.0) * dt
        if angle > max_angle and angle > 0.0:
            # rotate partway toward the line of sight inside the plane they span
            f = max_angle / angle
            sa = math.sin(angle)
            a = math.sin((1.0 - f) * angle) / sa
            b = math.sin(f * angle) / sa
            wx, wy, wz = a * m.ux + b * wx, a * m.uy + b * wy, a * m.uz + b * wz
            n = math.sqrt(wx * wx + wy * wy + wz * wz)
            wx, wy, wz = wx / n, wy / n, wz / n
        m.ux, m.uy, m.uz = wx, wy, wz

    # closest approach over the tick, in the target's relative frame
    rvx = m.ux * speed - target_vel_mps[0]
    rvy = m.uy * speed - target_vel_mps[1]
    rvz = m.uz * speed - target_vel_mps[2]
    rpx, rpy, rpz = -dx, -dy, -dz  # missile minus target
    closing = -(rpx * rvx + rpy * rvy + rpz * rvz)  # positive when approaching
    v2 = rvx * rvx + rvy * rvy + rvz * rvz
    s = 0.0 if v2 == 0.0 else max(0.0, min(dt, closing / v2))
    cx = rpx + rvx * s
    cy = rpy + rvy * s
    cz = rpz + rvz * s
    miss_dist = math.sqrt(cx * cx + cy * cy + cz * cz)

    m.speed_mps = speed
    m.x_m += m.ux * speed * dt
    m.y_m += m.uy * speed * dt
    m.alt_m += m.uz * speed * dt
    m.time_of_flight_s += dt

    if miss_dist <= FUSE_RADIUS_M and closing > 0.0:
        m.active = False
        return HIT
    target_speed = math.sqrt(
        target_vel_mps[0] ** 2 + target_vel_mps[1] ** 2 + target_vel_mps[2] ** 2
    )
    if m.time_of_flight_s > BOOST_S and speed < target_speed:
        m.active = False
        return MISS_ENERGY
    if m.time_of_flight_s >= MAX_FLIGHT_S:
        m.active = False
        return MISS_TIMEOUT
    return None
