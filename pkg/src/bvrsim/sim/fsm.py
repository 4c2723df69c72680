"""Agent tactics as a four-state machine: CAP, Commit, Abort, Break.

A ship orbits its CAP point until a detected opponent closes inside the
commit distance, then runs an intercept.  It commits until either its
vulnerability crosses the configured risk threshold (abort) or its RWR
picks up an inbound missile (break: hard turn away, dive, full power).
Break outranks everything and is only available to RWR-equipped ships.
Abort and break recover to CAP after the trigger has stayed clear for a
hold time, which stops state chattering.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from bvrsim.scenario import INITIAL_SPEED_KN, AgentConfig
from bvrsim.sim import sensors
from bvrsim.sim.aircraft import (
    MAX_ACCEL_KN_S,
    MAX_CLIMB_MPS,
    AircraftState,
    ManeuverCommand,
)

HOLD_CLEAR_S = 20.0  # trigger must stay clear this long before returning to CAP
MIN_LAUNCH_INTERVAL_S = 10.0
COMMIT_SPEED_KN = 500.0

# Doctrine band of the launch point inside [NEZ, r_max]; the sampled
# shot_point picks the position within the band.
PHILOSOPHY_BANDS = {
    "NEZ": (0.0, 1.0 / 3.0),
    "MIDPOINT": (1.0 / 3.0, 2.0 / 3.0),
    "MAX_RANGE": (2.0 / 3.0, 1.0),
}


class FsmState(enum.Enum):
    CAP = "CAP"
    COMMIT = "COMMIT"
    ABORT = "ABORT"
    BREAK = "BREAK"


@dataclass
class Decision:
    """One tick's output of an agent's tactical reasoning."""

    state: FsmState
    command: ManeuverCommand
    launch_target_id: Optional[str]
    offense: float
    vulnerability: float
    target_id: Optional[str]  # priority target
    threat_id: Optional[str]  # priority threat


def launch_range_m(config: AgentConfig, wez: sensors.WezEstimate) -> float:
    """Launch point inside the WEZ selected by philosophy band + shot point."""
    lo, hi = PHILOSOPHY_BANDS[config.shot_philosophy]
    eff = lo + config.shot_point * (hi - lo)
    return wez.r_nez_m + eff * (wez.r_max_m - wez.r_nez_m)


class AgentMind:
    """Per-agent FSM memory and decision logic."""

    def __init__(self, config: AgentConfig, dt: float):
        self.config = config
        self.dt = dt
        self.state = FsmState.CAP
        self.fired_in_commit = False
        self.clear_since: Optional[float] = None
        self.last_launch_t = -1e9
        self.last_known_target: Optional[tuple[float, float]] = None

    # --- helpers -----------------------------------------------------------

    def _steer(self, own: AircraftState, desired_heading: float) -> float:
        return sensors.wrap180(desired_heading - own.heading_deg) / self.dt

    def _pick_priority(self, own, contacts):
        """Priority target and threat among detected contacts.

        Target ranks by own offense, threat by own vulnerability; ties fall
        back to the nearer, then the lower id, so the choice is stable.
        """
        best_tgt = best_thr = None
        best_tgt_key = best_thr_key = None
        for enemy in contacts:
            rng = sensors.slant_range_m(own, enemy)
            off = sensors.offense_index(own, enemy, sensors.wez_estimate(own, enemy))
            vul = sensors.vulnerability_index(
                own, enemy, sensors.wez_estimate(enemy, own)
            )
            tgt_key = (-off, rng, enemy.ac_id)
            thr_key = (-vul, rng, enemy.ac_id)
            if best_tgt_key is None or tgt_key < best_tgt_key:
                best_tgt, best_tgt_key = (enemy, off, rng), tgt_key
            if best_thr_key is None or thr_key < best_thr_key:
                best_thr, best_thr_key = (enemy, vul), thr_key
        return best_tgt, best_thr

    # --- per-state maneuvers -----------------------------------------------

    def _cap_command(self, own: AircraftState) -> ManeuverCommand:
        cx, cy = self.config.cap_point
        dist = math.hypot(cx - own.x_m, cy - own.y_m)
        to_cap = sensors.bearing_deg(own.x_m, own.y_m, cx, cy)
        if dist > 1.5 * self.config.cap_orbit_radius_m:
            desired = to_cap
        else:
            desired = to_cap + 90.0  # hold a racetrack around the point
        accel = (INITIAL_SPEED_KN - own.speed_kn) / self.dt
        return ManeuverCommand(self._steer(own, desired), accel, 0.0)

    def _commit_command(self, own: AircraftState, target: Optional[AircraftState]):
        if target is not None:
            desired = sensors.bearing_deg(own.x_m, own.y_m, target.x_m, target.y_m)
            climb = (target.altitude_m - own.altitude_m) / 20.0
        elif self.last_known_target is not None:
            lx, ly = self.last_known_target
            desired = sensors.bearing_deg(own.x_m, own.y_m, lx, ly)
            climb = 0.0
        else:
            desired = sensors.bearing_deg(own.x_m, own.y_m, *self.config.cap_point)
            climb = 0.0
        accel = (COMMIT_SPEED_KN - own.speed_kn) / self.dt
        return ManeuverCommand(self._steer(own, desired), accel, climb)

    def _flee_command(
        self, own: AircraftState, away_from: Optional[tuple[float, float]], dive: bool
    ) -> ManeuverCommand:
        if away_from is not None:
            desired = (
                sensors.bearing_deg(own.x_m, own.y_m, away_from[0], away_from[1])
                + 180.0
            )
            turn = self._steer(own, desired)
        else:
            turn = 0.0
        return ManeuverCommand(
            turn, MAX_ACCEL_KN_S, -MAX_CLIMB_MPS if dive else 0.0
        )

    # --- main step -----------------------------------------------------------

    def step(
        self,
        own: AircraftState,
        contacts: list[AircraftState],
        missile_warning: bool,
        warning_from: Optional[tuple[float, float]],
        t: float,
    ) -> Decision:
        priority_tgt, priority_thr = self._pick_priority(own, contacts)
        target, offense, target_range = None, 0.0, 0.0
        if priority_tgt is not None:
            target, offense, target_range = priority_tgt
            self.last_known_target = (target.x_m, target.y_m)
        threat, vulnerability = (None, 0.0) if priority_thr is None else priority_thr

        warning = missile_warning and self.config.rwr_present
        active_thr = (
            self.config.vul_thr_aft_shot
            if self.fired_in_commit
            else self.config.vul_thr_bef_shot
        )

        prev = self.state
        if warning:
            self.state = FsmState.BREAK
            self.clear_since = None
        elif prev is FsmState.CAP:
            if target is not None and target_range <= self.config.commit_distance_m:
                self.state = FsmState.COMMIT
        elif prev is FsmState.COMMIT:
            if vulnerability >= active_thr:
                self.state = FsmState.ABORT
                self.clear_since = None
        elif prev is FsmState.ABORT:
            if vulnerability < active_thr:
                if self.clear_since is None:
                    self.clear_since = t
                elif t - self.clear_since >= HOLD_CLEAR_S:
                    self.state = FsmState.CAP
            else:
                self.clear_since = None
        elif prev is FsmState.BREAK:
            # missile warning already false here (handled above)
            if self.clear_since is None:
                self.clear_since = t
            elif t - self.clear_since >= HOLD_CLEAR_S:
                self.state = FsmState.CAP

        if self.state is FsmState.COMMIT and prev is not FsmState.COMMIT:
            self.fired_in_commit = False

        launch_id = None
        if self.state is FsmState.COMMIT:
            command = self._commit_command(own, target)
            if (
                target is not None
                and own.missiles_avail > 0
                and t - self.last_launch_t >= MIN_LAUNCH_INTERVAL_S
            ):
                wez = sensors.wez_estimate(own, target)
                if target_range <= launch_range_m(self.config, wez):
                    launch_id = target.ac_id
                    self.fired_in_commit = True
                    self.last_launch_t = t
        elif self.state is FsmState.BREAK:
            away = warning_from
            if away is None and threat is not None:
                away = (threat.x_m, threat.y_m)
            command = self._flee_command(own, away, dive=True)
        elif self.state is FsmState.ABORT:
            away = None if threat is None else (threat.x_m, threat.y_m)
            command = self._flee_command(own, away, dive=False)
        else:
            command = self._cap_command(own)

        return Decision(
            state=self.state,
            command=command,
            launch_target_id=launch_id,
            offense=offense,
            vulnerability=vulnerability,
            target_id=None if target is None else target.ac_id,
            threat_id=None if threat is None else threat.ac_id,
        )
