"""Constructive 2-v-2 BVR engagement simulation."""

from bvrsim.sim.aircraft import AircraftState, ManeuverCommand, step_kinematics
from bvrsim.sim.engine import run_simulation
from bvrsim.sim.events import EventLog, read_log, write_log
from bvrsim.sim.fsm import AgentMind, FsmState
from bvrsim.sim.missile import MissileState, launch, missile_step
from bvrsim.sim.sensors import (
    WezEstimate,
    merged_contact_ids,
    offense_index,
    radar_contacts,
    vulnerability_index,
    wez_estimate,
)

__all__ = [
    "AircraftState",
    "AgentMind",
    "EventLog",
    "FsmState",
    "ManeuverCommand",
    "MissileState",
    "WezEstimate",
    "launch",
    "merged_contact_ids",
    "missile_step",
    "offense_index",
    "radar_contacts",
    "read_log",
    "run_simulation",
    "step_kinematics",
    "vulnerability_index",
    "wez_estimate",
    "write_log",
]
