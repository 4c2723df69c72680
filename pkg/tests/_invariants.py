"""Shared event-log invariant checks used by unit and acceptance tests."""

import math

from bvrsim.dca import DEFAULT_PARAMS, dca_index
from bvrsim.scenario import MISSILES_PER_AIRCRAFT
from bvrsim.sim.aircraft import MAX_ACCEL_KN_S, MAX_CLIMB_MPS, max_turn_rate_dps
from bvrsim.sim.events import AC_FIELDS, EventLog
from bvrsim.sim.fsm import FsmState

IDX = {name: i for i, name in enumerate(AC_FIELDS)}
VALID_STATES = {s.value for s in FsmState}


def check_tick_cadence(log: EventLog):
    dt = log.config.dt_s
    for i, tick in enumerate(log.ticks):
        assert abs(tick["t"] - i * dt) < 1e-9, "tick times must advance at fixed dt"


def check_fsm_exclusivity(log: EventLog):
    for tick in log.ticks:
        seen = set()
        for row in tick["ac"]:
            ac_id = row[IDX["id"]]
            assert ac_id not in seen, "one state record per agent per tick"
            seen.add(ac_id)
            assert row[IDX["fsm"]] in VALID_STATES


def check_commit_episodes_terminate(log: EventLog):
    """Every Commit episode ends in Break, Abort, death, or scenario end."""
    by_agent: dict[str, list[list]] = {}
    for tick in log.ticks:
        for row in tick["ac"]:
            by_agent.setdefault(row[IDX["id"]], []).append(row)
    for rows in by_agent.values():
        for prev, cur in zip(rows, rows[1:]):
            if prev[IDX["fsm"]] == "COMMIT" and prev[IDX["alive"]]:
                if cur[IDX["alive"]]:
                    assert cur[IDX["fsm"]] in ("COMMIT", "ABORT", "BREAK")


def check_missile_conservation(log: EventLog):
    launches: dict[str, int] = {}
    events = sorted(
        (e for e in log.events if e["kind"] == "launch"), key=lambda e: e["t"]
    )
    ei = 0
    for tick in log.ticks:
        # launch events at time t fire after the tick-t state record
        while ei < len(events) and events[ei]["t"] < tick["t"]:
            launches[events[ei]["shooter"]] = launches.get(events[ei]["shooter"], 0) + 1
            ei += 1
        for row in tick["ac"]:
            fired = launches.get(row[IDX["id"]], 0)
            assert fired <= MISSILES_PER_AIRCRAFT
            assert row[IDX["mis"]] + fired == MISSILES_PER_AIRCRAFT


def check_index_recompute(log: EventLog, tol: float = 1e-12):
    cap = log.config.cap_point
    sides = {ac.ac_id: ac.side for ac in log.config.aircraft}
    for tick in log.ticks:
        red_dists = []
        rows = {}
        for row in tick["ac"]:
            rows[row[IDX["id"]]] = row
            if sides[row[IDX["id"]]] == "red" and row[IDX["alive"]]:
                dx = row[IDX["x"]] - cap[0]
                dy = row[IDX["y"]] - cap[1]
                red_dists.append(
                    math.sqrt(dx * dx + dy * dy + row[IDX["alt"]] ** 2)
                )
        for ac_id, logged in tick["idx"]:
            row = rows[ac_id]
            dx = row[IDX["x"]] - cap[0]
            dy = row[IDX["y"]] - cap[1]
            d_ref = math.sqrt(dx * dx + dy * dy + row[IDX["alt"]] ** 2)
            recomputed = dca_index(
                row[IDX["mis"]], MISSILES_PER_AIRCRAFT, d_ref, red_dists, DEFAULT_PARAMS
            )
            assert abs(recomputed - logged) <= tol


def check_kinematic_sanity(log: EventLog):
    dt = log.config.dt_s
    margin = 1e-9
    for prev, cur in zip(log.ticks, log.ticks[1:]):
        prev_rows = {r[IDX["id"]]: r for r in prev["ac"]}
        for row in cur["ac"]:
            p = prev_rows[row[IDX["id"]]]
            if not (p[IDX["alive"]] and row[IDX["alive"]]):
                continue
            dh = abs((row[IDX["hdg"]] - p[IDX["hdg"]] + 180.0) % 360.0 - 180.0)
            limit = max_turn_rate_dps(p[IDX["spd"]], 9.0) * dt
            assert dh <= limit + margin
            assert abs(row[IDX["spd"]] - p[IDX["spd"]]) <= MAX_ACCEL_KN_S * dt + margin
            assert abs(row[IDX["alt"]] - p[IDX["alt"]]) <= MAX_CLIMB_MPS * dt + margin


def check_all(log: EventLog):
    check_tick_cadence(log)
    check_fsm_exclusivity(log)
    check_commit_episodes_terminate(log)
    check_missile_conservation(log)
    check_index_recompute(log)
    check_kinematic_sanity(log)
