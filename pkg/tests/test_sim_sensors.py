"""Radar gating, WEZ scaling, and index geometry checks."""

import pytest

from bvrsim.sim import sensors
from bvrsim.sim.aircraft import AircraftState


def ship(ac_id="blue1", side="blue", x=0.0, y=0.0, alt=9000.0, hdg=0.0, spd=420.0):
    return AircraftState(
        ac_id=ac_id, side=side, x_m=x, y_m=y, altitude_m=alt, heading_deg=hdg, speed_kn=spd
    )


class TestGeometry:
    def test_aspect_tail_on(self):
        # target due east, flying straight away from the reference
        ref = ship()
        tgt = ship("red1", "red", x=20000.0, hdg=90.0)
        assert sensors.aspect_deg(ref, tgt) == pytest.approx(0.0, abs=1e-9)

    def test_aspect_head_on(self):
        ref = ship()
        tgt = ship("red1", "red", x=20000.0, hdg=270.0)
        assert sensors.aspect_deg(ref, tgt) == pytest.approx(180.0, abs=1e-9)

    def test_aspect_beam(self):
        ref = ship()
        tgt = ship("red1", "red", x=20000.0, hdg=0.0)
        assert sensors.aspect_deg(ref, tgt) == pytest.approx(90.0, abs=1e-9)

    def test_delta_heading_range(self):
        a = ship(hdg=350.0)
        b = ship("red1", "red", hdg=10.0)
        assert sensors.delta_heading_deg(a, b) == pytest.approx(20.0, abs=1e-9)


class TestRadar:
    def test_detects_on_the_nose(self):
        own = ship()
        other = ship("red1", "red", y=0.5 * sensors.RADAR_RANGE_M)
        assert [c.ac_id for c in sensors.radar_contacts(own, [other])] == ["red1"]

    def test_no_detection_astern(self):
        own = ship()
        other = ship("red1", "red", y=-20000.0)
        assert sensors.radar_contacts(own, [other]) == []

    def test_no_detection_beyond_range(self):
        own = ship()
        other = ship("red1", "red", y=sensors.RADAR_RANGE_M * 1.01)
        assert sensors.radar_contacts(own, [other]) == []

    def test_gimbal_edge(self):
        own = ship()
        inside = ship("red1", "red", x=10000.0, y=17320.5)  # ~30 deg off nose
        outside = ship("red2", "red", x=17320.5, y=10000.0)  # ~60.0001+ deg
        ids = [c.ac_id for c in sensors.radar_contacts(own, [inside, outside])]
        assert "red1" in ids

    def test_merged_picture_unions_teammates(self):
        lead = ship("blue1")
        # wingman looks the other way and holds the tally
        wing = ship("blue2", y=-40000.0, hdg=180.0)
        bandit = ship("red1", "red", y=-60000.0)  # astern of lead, on wing's nose
        assert sensors.radar_contacts(lead, [bandit]) == []
        merged = sensors.merged_contact_ids([lead, wing], [bandit])
        assert merged == {"red1"}

    def test_ignores_teammates_and_dead(self):
        own = ship()
        mate = ship("blue2", y=10000.0)
        corpse = ship("red1", "red", y=10000.0)
        corpse.alive = False
        assert sensors.radar_contacts(own, [mate, corpse]) == []


class TestWez:
    def test_headon_beats_tailon(self):
        shooter = ship()
        hot = ship("red1", "red", y=30000.0, hdg=180.0)
        cold = ship("red2", "red", y=30000.0, hdg=0.0)
        r_hot = sensors.wez_estimate(shooter, hot)
        r_cold = sensors.wez_estimate(shooter, cold)
        assert r_hot.r_max_m > r_cold.r_max_m
        assert r_cold.r_max_m == pytest.approx(0.35 * r_hot.r_max_m, rel=1e-9)

    def test_nez_fraction_exact(self):
        est = sensors.wez_estimate(ship(), ship("red1", "red", y=30000.0, hdg=180.0))
        assert est.r_nez_m == 0.3 * est.r_max_m

    def test_undetected_target_is_invalid(self):
        est = sensors.wez_estimate(ship(), ship("red1", "red", y=30000.0), detected=False)
        assert not est.valid
        assert est.r_max_m == -1.0 and est.r_nez_m == -1.0

    def test_max_attainable_close_to_forty_nm(self):
        shooter = ship(alt=15000.0, spd=600.0)
        hot = ship("red1", "red", y=30000.0, hdg=180.0, alt=15000.0)
        est = sensors.wez_estimate(shooter, hot)
        assert est.r_max_m == pytest.approx(40.0 * 1852.0, rel=1e-9)

    def test_altitude_and_speed_scale_up(self):
        low_slow = sensors.wez_estimate(
            ship(alt=3000.0, spd=200.0), ship("red1", "red", y=30000.0, hdg=180.0)
        )
        high_fast = sensors.wez_estimate(
            ship(alt=12000.0, spd=550.0), ship("red1", "red", y=30000.0, hdg=180.0)
        )
        assert high_fast.r_max_m > low_slow.r_max_m


class TestIndices:
    def setup_method(self):
        self.own = ship()
        self.tgt = ship("red1", "red", y=30000.0, hdg=180.0)
        self.wez = sensors.wez_estimate(self.own, self.tgt)

    def place(self, rng):
        return ship("red1", "red", y=rng, hdg=180.0)

    def test_boundaries(self):
        at_max = self.place(self.wez.r_max_m)
        at_nez = self.place(self.wez.r_nez_m)
        # recompute the envelope for each placement: same aspect/alt/speed
        assert sensors.offense_index(self.own, at_max, self.wez) == 0.0
        assert sensors.offense_index(self.own, at_nez, self.wez) == 1.0

    def test_linear_midpoint(self):
        mid = self.place(0.5 * (self.wez.r_max_m + self.wez.r_nez_m))
        assert sensors.offense_index(self.own, mid, self.wez) == pytest.approx(
            0.5, abs=1e-9
        )

    def test_invalid_wez_scores_zero(self):
        assert sensors.offense_index(self.own, self.tgt, sensors.INVALID_WEZ) == 0.0

    def test_vulnerability_is_role_swap(self):
        threat_wez = sensors.wez_estimate(self.tgt, self.own)
        assert sensors.vulnerability_index(
            self.own, self.tgt, threat_wez
        ) == sensors.offense_index(self.tgt, self.own, threat_wez)

    def test_symmetric_geometry_matches(self):
        # co-altitude, co-speed, mutually head-on: my vulnerability to him
        # equals his offense on me by construction
        a = ship("blue1", "blue", y=0.0, hdg=0.0)
        b = ship("red1", "red", y=30000.0, hdg=180.0)
        vul = sensors.vulnerability_index(a, b, sensors.wez_estimate(b, a))
        off = sensors.offense_index(b, a, sensors.wez_estimate(b, a))
        assert vul == off
