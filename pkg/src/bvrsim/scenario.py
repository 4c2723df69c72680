"""Scenario configuration: two opposing 2-ship formations around one CAP point.

The CAP point is the ENU origin.  Each side samples one agent config
(commit distance, risk thresholds, shot doctrine, RWR fit) shared by its
two aircraft, plus a formation position offset around the CAP point.  The
red formation spawns on the bearing opposite blue's, which keeps the
initial separation at or above the 60 NM radar horizon, so the formations
approach each other disengaged.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

NM_TO_M = 1852.0
FT_TO_M = 0.3048
KN_TO_MPS = 1852.0 / 3600.0

BLUE = "blue"
RED = "red"
SIDES = (BLUE, RED)

SHOT_PHILOSOPHIES = ("MAX_RANGE", "MIDPOINT", "NEZ")

# Shared platform/scenario constants (single-type fighter in both formations).
INITIAL_SPEED_KN = 420.0
CAP_ORBIT_RADIUS_M = 5.0 * NM_TO_M
WINGMAN_SPACING_M = 2.0 * NM_TO_M
MISSILES_PER_AIRCRAFT = 4
DEFAULT_DT_S = 0.25
DEFAULT_DURATION_S = 720.0

# Sampling ranges enforced when mapping plan rows onto configs.
OFFSET_RANGE_NM = (30.0, 70.0)
FLIGHT_LEVEL_RANGE = (150.0, 400.0)
COMMIT_RANGE_NM = (20.0, 50.0)


@dataclass(frozen=True)
class AgentConfig:
    """Per-side tactical configuration."""

    commit_distance_m: float
    vul_thr_bef_shot: float  # vulnerability accepted before own first shot
    vul_thr_aft_shot: float  # vulnerability accepted after it
    shot_point: float  # position inside the philosophy's WEZ band, in [0, 1]
    shot_philosophy: str
    rwr_present: bool
    cap_point: tuple[float, float] = (0.0, 0.0)
    cap_orbit_radius_m: float = CAP_ORBIT_RADIUS_M

    def validate(self) -> None:
        if self.commit_distance_m <= 0:
            raise ValueError("commit distance must be positive")
        for name in ("vul_thr_bef_shot", "vul_thr_aft_shot", "shot_point"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.shot_philosophy not in SHOT_PHILOSOPHIES:
            raise ValueError(f"unknown shot philosophy {self.shot_philosophy!r}")


@dataclass(frozen=True)
class AircraftSetup:
    """Initial kinematic state of one aircraft."""

    ac_id: str
    side: str
    x_m: float
    y_m: float
    altitude_m: float
    heading_deg: float  # degrees true, 0 = +y (north), clockwise positive
    speed_kn: float


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: str
    aircraft: tuple[AircraftSetup, ...]
    configs: dict[str, AgentConfig]  # keyed by side
    cap_point: tuple[float, float] = (0.0, 0.0)
    dt_s: float = DEFAULT_DT_S
    duration_s: float = DEFAULT_DURATION_S

    def validate(self) -> None:
        if self.dt_s <= 0 or self.duration_s <= 0:
            raise ValueError("dt and duration must be positive")
        if sorted(self.configs) != sorted(SIDES):
            raise ValueError("scenario needs exactly one config per side")
        for cfg in self.configs.values():
            cfg.validate()
        for ac in self.aircraft:
            if ac.side not in SIDES:
                raise ValueError(f"unknown side {ac.side!r}")
            if not 150.0 <= ac.speed_kn <= 600.0:
                raise ValueError(f"{ac.ac_id}: speed {ac.speed_kn} kn outside [150, 600]")
            if not 1000.0 <= ac.altitude_m <= 15000.0:
                raise ValueError(
                    f"{ac.ac_id}: altitude {ac.altitude_m} m outside [1000, 15000]"
                )
        ids = [ac.ac_id for ac in self.aircraft]
        if len(set(ids)) != len(ids):
            raise ValueError("aircraft ids must be unique")
        for side in SIDES:
            if sum(1 for ac in self.aircraft if ac.side == side) != 2:
                raise ValueError("scenario must field two aircraft per side")


def _require(name: str, value: float, lo: float, hi: float) -> float:
    if not lo <= value <= hi:
        raise ValueError(f"{name}={value} outside [{lo}, {hi}]")
    return float(value)


def _formation(
    side: str, offset_nm: float, bearing_deg: float, fl: float, speed_kn: float
) -> list[AircraftSetup]:
    """Lead plus wingman abeam, heading for the CAP point."""
    offset_m = offset_nm * NM_TO_M
    altitude_m = fl * 100.0 * FT_TO_M
    br = math.radians(bearing_deg)
    lead_x = offset_m * math.sin(br)
    lead_y = offset_m * math.cos(br)
    heading = (bearing_deg + 180.0) % 360.0  # point back at the CAP
    hr = math.radians(heading)
    # wingman sits 90 degrees right of own heading
    wing_x = lead_x + WINGMAN_SPACING_M * math.cos(hr)
    wing_y = lead_y - WINGMAN_SPACING_M * math.sin(hr)
    return [
        AircraftSetup(f"{side}1", side, lead_x, lead_y, altitude_m, heading, speed_kn),
        AircraftSetup(f"{side}2", side, wing_x, wing_y, altitude_m, heading, speed_kn),
    ]


def scenario_from_values(values: dict, scenario_id: str) -> ScenarioConfig:
    """Build and validate a scenario from named plan values.

    Expects the canonical 17-parameter plan: nine blue entries (including
    the formation bearing) and eight red entries; red's bearing is blue's
    plus 180 degrees.
    """
    aircraft: list[AircraftSetup] = []
    configs: dict[str, AgentConfig] = {}
    blue_bearing = _require("blue_bearing_deg", values["blue_bearing_deg"], 0.0, 360.0)
    for side in SIDES:
        offset = _require(
            f"{side}_offset_nm", values[f"{side}_offset_nm"], *OFFSET_RANGE_NM
        )
        fl = _require(f"{side}_fl", values[f"{side}_fl"], *FLIGHT_LEVEL_RANGE)
        commit = _require(
            f"{side}_commit_nm", values[f"{side}_commit_nm"], *COMMIT_RANGE_NM
        )
        bearing = blue_bearing if side == BLUE else (blue_bearing + 180.0) % 360.0
        aircraft.extend(_formation(side, offset, bearing, fl, INITIAL_SPEED_KN))
        cfg = AgentConfig(
            commit_distance_m=commit * NM_TO_M,
            vul_thr_bef_shot=float(values[f"{side}_vul_thr_bef_shot"]),
            vul_thr_aft_shot=float(values[f"{side}_vul_thr_aft_shot"]),
            shot_point=float(values[f"{side}_shot_point"]),
            shot_philosophy=str(values[f"{side}_shot_phi"]),
            rwr_present=bool(values[f"{side}_rwr"]),
        )
        cfg.validate()
        configs[side] = cfg
    config = ScenarioConfig(
        scenario_id=scenario_id, aircraft=tuple(aircraft), configs=configs
    )
    config.validate()
    return config


def config_to_dict(config: ScenarioConfig) -> dict:
    return {
        "scenario_id": config.scenario_id,
        "cap_point": list(config.cap_point),
        "dt_s": config.dt_s,
        "duration_s": config.duration_s,
        "aircraft": [asdict(ac) for ac in config.aircraft],
        "configs": {
            side: {**asdict(cfg), "cap_point": list(cfg.cap_point)}
            for side, cfg in config.configs.items()
        },
    }


def config_from_dict(doc: dict) -> ScenarioConfig:
    aircraft = tuple(AircraftSetup(**ac) for ac in doc["aircraft"])
    configs = {}
    for side, cfg in doc["configs"].items():
        cfg = dict(cfg)
        cfg["cap_point"] = tuple(cfg["cap_point"])
        configs[side] = AgentConfig(**cfg)
    config = ScenarioConfig(
        scenario_id=doc["scenario_id"],
        aircraft=aircraft,
        configs=configs,
        cap_point=tuple(doc.get("cap_point", (0.0, 0.0))),
        dt_s=float(doc.get("dt_s", DEFAULT_DT_S)),
        duration_s=float(doc.get("duration_s", DEFAULT_DURATION_S)),
    )
    config.validate()
    return config


def save_config(config: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n")


def load_config(path: str | Path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))
