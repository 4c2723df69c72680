"""Tactics state machine: transition triggers, recovery holds, launch doctrine."""

import pytest

from bvrsim.scenario import NM_TO_M, AgentConfig
from bvrsim.sim import sensors
from bvrsim.sim.aircraft import AircraftState
from bvrsim.sim.fsm import (
    HOLD_CLEAR_S,
    AgentMind,
    FsmState,
    launch_range_m,
)

DT = 0.25


def ship(ac_id, side, x=0.0, y=0.0, alt=9000.0, hdg=0.0, spd=420.0, missiles=4):
    return AircraftState(
        ac_id=ac_id,
        side=side,
        x_m=x,
        y_m=y,
        altitude_m=alt,
        heading_deg=hdg,
        speed_kn=spd,
        missiles_avail=missiles,
    )


def config(**overrides):
    defaults = dict(
        commit_distance_m=40.0 * NM_TO_M,
        vul_thr_bef_shot=0.7,
        vul_thr_aft_shot=0.7,
        shot_point=0.5,
        shot_philosophy="MIDPOINT",
        rwr_present=True,
    )
    defaults.update(overrides)
    return AgentConfig(**defaults)


class TestTransitions:
    def test_cap_to_commit_inside_commit_distance(self):
        cfg = config()
        mind = AgentMind(cfg, DT)
        own = ship("blue1", "blue")
        bandit = ship("red1", "red", y=0.9 * cfg.commit_distance_m, hdg=180.0)
        dec = mind.step(own, [bandit], False, None, 0.0)
        assert dec.state is FsmState.COMMIT
        assert dec.target_id == "red1"

    def test_cap_holds_outside_commit_distance(self):
        cfg = config()
        mind = AgentMind(cfg, DT)
        own = ship("blue1", "blue")
        bandit = ship("red1", "red", y=1.5 * cfg.commit_distance_m, hdg=180.0)
        dec = mind.step(own, [bandit], False, None, 0.0)
        assert dec.state is FsmState.CAP

    def test_warning_breaks_from_any_state(self):
        for prime in (FsmState.CAP, FsmState.COMMIT, FsmState.ABORT):
            mind = AgentMind(config(), DT)
            mind.state = prime
            own = ship("blue1", "blue")
            dec = mind.step(own, [], True, (0.0, 10000.0), 0.0)
            assert dec.state is FsmState.BREAK
            # hard defensive turn and dive at full power
            assert dec.command.climb_mps < 0
            assert dec.command.accel_kn_s > 0

    def test_no_rwr_never_breaks(self):
        mind = AgentMind(config(rwr_present=False), DT)
        own = ship("blue1", "blue")
        dec = mind.step(own, [], True, (0.0, 10000.0), 0.0)
        assert dec.state is FsmState.CAP

    def test_commit_aborts_over_threshold(self):
        cfg = config(vul_thr_bef_shot=0.7)
        mind = AgentMind(cfg, DT)
        own = ship("blue1", "blue")
        far = ship("red1", "red", y=0.9 * cfg.commit_distance_m, hdg=180.0)
        assert mind.step(own, [far], False, None, 0.0).state is FsmState.COMMIT
        # threat dives into its own no-escape zone around us: vulnerability 1.0
        close = ship("red1", "red", y=8000.0, hdg=180.0)
        dec = mind.step(own, [close], False, None, DT)
        assert dec.vulnerability == 1.0
        assert dec.state is FsmState.ABORT

    def test_threshold_switches_after_first_launch(self):
        cfg = config(vul_thr_bef_shot=1.0, vul_thr_aft_shot=0.05, shot_philosophy="NEZ")
        mind = AgentMind(cfg, DT)
        own = ship("blue1", "blue")
        # inside the NEZ launch band and moderately vulnerable
        bandit = ship("red1", "red", y=16000.0, hdg=180.0)
        dec = mind.step(own, [bandit], False, None, 0.0)
        assert dec.state is FsmState.COMMIT
        assert dec.launch_target_id == "red1"  # fires immediately in the NEZ
        dec = mind.step(own, [bandit], False, None, DT)
        assert dec.state is FsmState.ABORT  # same vulnerability now over the bar

    def test_break_recovers_after_hold(self):
        mind = AgentMind(config(), DT)
        own = ship("blue1", "blue")
        assert mind.step(own, [], True, (0.0, 5000.0), 0.0).state is FsmState.BREAK
        t = DT
        state = None
        while t <= HOLD_CLEAR_S + 3 * DT:
            state = mind.step(own, [], False, None, t).state
            t += DT
        assert state is FsmState.CAP
        # it stayed in BREAK through the hold window
        mind2 = AgentMind(config(), DT)
        mind2.step(own, [], True, (0.0, 5000.0), 0.0)
        assert mind2.step(own, [], False, None, HOLD_CLEAR_S).state is FsmState.BREAK

    def test_abort_recovers_only_when_clear(self):
        cfg = config(vul_thr_bef_shot=0.2)
        mind = AgentMind(cfg, DT)
        own = ship("blue1", "blue")
        far = ship("red1", "red", y=0.9 * cfg.commit_distance_m, hdg=180.0)
        mind.step(own, [far], False, None, 0.0)
        close = ship("red1", "red", y=8000.0, hdg=180.0)
        assert mind.step(own, [close], False, None, DT).state is FsmState.ABORT
        # still vulnerable: the hold timer must not run
        assert mind.step(own, [close], False, None, 10.0).state is FsmState.ABORT
        assert mind.step(own, [close], False, None, 40.0).state is FsmState.ABORT
        # clear of the threat: recover after the hold
        assert mind.step(own, [], False, None, 50.0).state is FsmState.ABORT
        assert mind.step(own, [], False, None, 50.0 + HOLD_CLEAR_S).state is FsmState.CAP


class TestLaunchDoctrine:
    def test_band_mapping(self):
        own = ship("blue1", "blue")
        bandit = ship("red1", "red", y=30000.0, hdg=180.0)
        wez = sensors.wez_estimate(own, bandit)
        span = wez.r_max_m - wez.r_nez_m
        assert launch_range_m(config(shot_philosophy="NEZ", shot_point=0.0), wez) == (
            pytest.approx(wez.r_nez_m)
        )
        assert launch_range_m(
            config(shot_philosophy="MAX_RANGE", shot_point=1.0), wez
        ) == pytest.approx(wez.r_max_m)
        mid = launch_range_m(config(shot_philosophy="MIDPOINT", shot_point=0.5), wez)
        assert mid == pytest.approx(wez.r_nez_m + 0.5 * span)

    def test_no_launch_without_missiles(self):
        cfg = config(shot_philosophy="NEZ")
        mind = AgentMind(cfg, DT)
        own = ship("blue1", "blue", missiles=0)
        bandit = ship("red1", "red", y=16000.0, hdg=180.0)
        dec = mind.step(own, [bandit], False, None, 0.0)
        assert dec.state is FsmState.COMMIT
        assert dec.launch_target_id is None

    def test_launch_cooldown(self):
        cfg = config(
            shot_philosophy="MAX_RANGE",
            shot_point=1.0,
            vul_thr_bef_shot=1.0,
            vul_thr_aft_shot=1.0,
        )
        mind = AgentMind(cfg, DT)
        own = ship("blue1", "blue")
        probe = ship("red1", "red", y=30000.0, hdg=180.0)
        r_max = sensors.wez_estimate(own, probe).r_max_m
        bandit = ship("red1", "red", y=0.95 * r_max, hdg=180.0)
        assert mind.step(own, [bandit], False, None, 0.0).launch_target_id == "red1"
        assert mind.step(own, [bandit], False, None, DT).launch_target_id is None
        assert mind.step(own, [bandit], False, None, 10.0).launch_target_id == "red1"

    def test_outside_launch_range_holds_fire(self):
        cfg = config(shot_philosophy="NEZ", shot_point=0.0)
        mind = AgentMind(cfg, DT)
        own = ship("blue1", "blue")
        bandit = ship("red1", "red", y=0.9 * cfg.commit_distance_m, hdg=180.0)
        dec = mind.step(own, [bandit], False, None, 0.0)
        assert dec.state is FsmState.COMMIT
        assert dec.launch_target_id is None
