"""Fixed-step 2-v-2 engagement engine.

Every tick: fuse each side's radar picture, evaluate missile warnings,
let every living agent decide (simultaneously, against the start-of-tick
world), log the tick, then integrate aircraft and missiles and resolve
fuzing.  A run is fully determined by (config, seed); the engine itself
draws no random numbers, the seed is recorded for provenance and for the
documented stochastic-endgame extension point.
"""

from __future__ import annotations

import math

from bvrsim import __version__
from bvrsim.dca import DEFAULT_PARAMS, dca_index
from bvrsim.scenario import BLUE, RED, MISSILES_PER_AIRCRAFT, ScenarioConfig
from bvrsim.sim import missile as msl
from bvrsim.sim import sensors
from bvrsim.sim.aircraft import AircraftState, step_kinematics
from bvrsim.sim.events import (
    KIND_END,
    KIND_HIT,
    KIND_LAUNCH,
    KIND_MISS,
    KIND_TRANSITION,
    EventLog,
)
from bvrsim.sim.fsm import AgentMind, FsmState

WARNING_RANGE_M = 15000.0  # RWR missile warning envelope


def _dist_to_cap(ac: AircraftState, cap: tuple[float, float]) -> float:
    dx = ac.x_m - cap[0]
    dy = ac.y_m - cap[1]
    return math.sqrt(dx * dx + dy * dy + ac.altitude_m * ac.altitude_m)


def _warning(ac: AircraftState, missiles: list[msl.MissileState]):
    """Nearest inbound active missile within the warning envelope, if any."""
    vx = ac.speed_kn * (1852.0 / 3600.0)
    hr = math.radians(ac.heading_deg)
    avx, avy = vx * math.sin(hr), vx * math.cos(hr)
    best = None
    best_dist = WARNING_RANGE_M
    for m in missiles:
        if not m.active or m.target_id != ac.ac_id:
            continue
        rpx = m.x_m - ac.x_m
        rpy = m.y_m - ac.y_m
        rpz = m.alt_m - ac.altitude_m
        dist = math.sqrt(rpx * rpx + rpy * rpy + rpz * rpz)
        if dist > best_dist:
            continue
        rvx = m.ux * m.speed_mps - avx
        rvy = m.uy * m.speed_mps - avy
        rvz = m.uz * m.speed_mps
        if rpx * rvx + rpy * rvy + rpz * rvz < 0.0:  # closing
            best = (m.x_m, m.y_m)
            best_dist = dist
    return best


def run_simulation(config: ScenarioConfig, seed: int) -> EventLog:
    config.validate()
    dt = config.dt_s
    cap = config.cap_point
    states: dict[str, AircraftState] = {
        ac.ac_id: AircraftState(
            ac_id=ac.ac_id,
            side=ac.side,
            x_m=ac.x_m,
            y_m=ac.y_m,
            altitude_m=ac.altitude_m,
            heading_deg=ac.heading_deg,
            speed_kn=ac.speed_kn,
        )
        for ac in config.aircraft
    }
    order = list(states)
    minds = {
        ac_id: AgentMind(config.configs[states[ac_id].side], dt) for ac_id in order
    }
    last_fsm = {ac_id: FsmState.CAP.value for ac_id in order}
    missiles: list[msl.MissileState] = []
    launches = 0
    log = EventLog(config=config, seed=seed, version=__version__)

    n_ticks = int(round(config.duration_s / dt))
    end_reason, end_t = "time", config.duration_s
    for k in range(n_ticks):
        t = k * dt
        # shared radar picture per side
        all_states = list(states.values())
        picture = {
            side: sorted(
                sensors.merged_contact_ids(
                    [s for s in all_states if s.side == side], all_states
                )
            )
            for side in (BLUE, RED)
        }

        # decisions against the start-of-tick world
        decisions = {}
        for ac_id in order:
            own = states[ac_id]
            if not own.alive:
                continue
            contacts = [states[cid] for cid in picture[own.side]]
            warning_from = _warning(own, missiles) if minds[ac_id].config.rwr_present else None
            prev = minds[ac_id].state
            dec = minds[ac_id].step(
                own, contacts, warning_from is not None, warning_from, t
            )
            decisions[ac_id] = dec
            last_fsm[ac_id] = dec.state.value
            if dec.state is not prev:
                log.add_event(
                    {
                        "t": t,
                        "kind": KIND_TRANSITION,
                        "id": ac_id,
                        "from": prev.value,
                        "to": dec.state.value,
                    }
                )

        # tick record: positions before integration, tactics decided at t
        ac_rows = []
        for ac_id in order:
            s = states[ac_id]
            dec = decisions.get(ac_id)
            ac_rows.append(
                [
                    ac_id,
                    s.x_m,
                    s.y_m,
                    s.altitude_m,
                    s.heading_deg,
                    s.speed_kn,
                    s.missiles_avail,
                    1 if s.alive else 0,
                    last_fsm[ac_id],
                    0.0 if dec is None else dec.offense,
                    0.0 if dec is None else dec.vulnerability,
                    None if dec is None else dec.target_id,
                    None if dec is None else dec.threat_id,
                ]
            )
        red_dists = [
            _dist_to_cap(s, cap) for s in all_states if s.side == RED and s.alive
        ]
        idx_rows = []
        for ac_id in order:
            s = states[ac_id]
            if s.side == BLUE and s.alive:
                value = dca_index(
                    s.missiles_avail,
                    MISSILES_PER_AIRCRAFT,
                    _dist_to_cap(s, cap),
                    red_dists,
                    DEFAULT_PARAMS,
                )
                idx_rows.append([ac_id, value])
        log.add_tick(t, ac_rows, idx_rows)

        # launches decided this tick
        for ac_id in order:
            dec = decisions.get(ac_id)
            if dec is None or dec.launch_target_id is None:
                continue
            shooter = states[ac_id]
            launches += 1
            mid = f"m{launches}"
            missiles.append(msl.launch(mid, shooter, states[dec.launch_target_id]))
            shooter.missiles_avail -= 1
            log.add_event(
                {
                    "t": t,
                    "kind": KIND_LAUNCH,
                    "id": mid,
                    "shooter": ac_id,
                    "target": dec.launch_target_id,
                }
            )

        # integrate aircraft
        prev_states = states.copy()
        for ac_id in order:
            s = states[ac_id]
            if s.alive and ac_id in decisions:
                states[ac_id] = step_kinematics(s, decisions[ac_id].command, dt)

        # integrate missiles against the tick's relative motion
        t_next = t + dt
        for m in missiles:
            if not m.active:
                continue
            tid = m.target_id
            cur = states[tid]
            if not cur.alive:
                m.active = False
                log.add_event(
                    {
                        "t": t_next,
                        "kind": KIND_MISS,
                        "id": m.missile_id,
                        "shooter": m.shooter_id,
                        "target": tid,
                        "reason": msl.MISS_TARGET_LOST,
                    }
                )
                continue
            old = prev_states[tid]
            vel = (
                (cur.x_m - old.x_m) / dt,
                (cur.y_m - old.y_m) / dt,
                (cur.altitude_m - old.altitude_m) / dt,
            )
            outcome = msl.missile_step(m, old, vel, dt)
            if outcome == msl.HIT:
                cur.alive = False
                log.add_event(
                    {
                        "t": t_next,
                        "kind": KIND_HIT,
                        "id": m.missile_id,
                        "shooter": m.shooter_id,
                        "target": tid,
                    }
                )
            elif outcome is not None:
                log.add_event(
                    {
                        "t": t_next,
                        "kind": KIND_MISS,
                        "id": m.missile_id,
                        "shooter": m.shooter_id,
                        "target": tid,
                        "reason": outcome,
                    }
                )

        blue_alive = sum(1 for s in states.values() if s.side == BLUE and s.alive)
        red_alive = sum(1 for s in states.values() if s.side == RED and s.alive)
        if blue_alive == 0 or red_alive == 0:
            end_reason, end_t = "side_destroyed", t_next
            break

    log.add_event({"t": end_t, "kind": KIND_END, "reason": end_reason})
    return log
