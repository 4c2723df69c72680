"""Engagement dataset construction from event logs.

An engagement is one maximal Commit episode of a blue agent: it opens at
the Commit transition and closes at the next Break or Abort (or is
truncated by death or scenario end).  Each engagement yields a
seventeen-field snapshot taken at the tick immediately before the Commit
plus the mean DCA index over the episode as the regression target.

Encoding follows tree-model conventions: no scaling, angular features
expanded to sine/cosine pairs, the RWR flag label-encoded, and the two
shot philosophies one-hot with a fixed category order.  Unknown WEZ
estimates carry -1 sentinels straight through.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from bvrsim.dca import IndexSample, engagement_target
from bvrsim.scenario import SHOT_PHILOSOPHIES
from bvrsim.sim import sensors
from bvrsim.sim.aircraft import AircraftState
from bvrsim.sim.events import AC_FIELDS, EventLog

TERMINAL_BREAK = "BREAK"
TERMINAL_ABORT = "ABORT"
TERMINAL_TRUNCATED = "TRUNCATED"

_IDX = {name: i for i, name in enumerate(AC_FIELDS)}


@dataclass(frozen=True)
class FeatureVector:
    """The snapshot taken right before an engagement starts."""

    distance: float  # m, reference to target
    aspect: float  # deg, target tail aspect in [0, 180]
    delta_head: float  # deg, between longitudinal axes, in [0, 180]
    delta_alt: float  # m, reference minus target
    delta_vel: float  # kn, reference minus target
    wez_max_o2t: float  # m, or -1 when not estimable
    wez_nez_o2t: float
    wez_max_t2o: float
    wez_nez_t2o: float
    vul_thr_bef_shot: float
    vul_thr_aft_shot: float
    shot_point: float
    rwr_warning: bool  # reference carries an active RWR
    hp_tgt_off: float
    hp_thr_vul: float
    own_shot_phi: str
    enemy_shot_phi: str

    def validate(self) -> None:
        if not 0.0 <= self.aspect <= 180.0:
            raise ValueError(f"aspect {self.aspect} outside [0, 180]")
        if not 0.0 <= self.delta_head <= 180.0:
            raise ValueError(f"delta_head {self.delta_head} outside [0, 180]")
        for name in ("wez_max_o2t", "wez_nez_o2t", "wez_max_t2o", "wez_nez_t2o"):
            v = getattr(self, name)
            if v < 0.0 and v != -1.0:
                raise ValueError(f"{name}={v} must be >= 0 or the -1 sentinel")
        for name in (
            "vul_thr_bef_shot",
            "vul_thr_aft_shot",
            "shot_point",
            "hp_tgt_off",
            "hp_thr_vul",
        ):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        for name in ("own_shot_phi", "enemy_shot_phi"):
            v = getattr(self, name)
            if v not in SHOT_PHILOSOPHIES:
                raise ValueError(f"{name}: unknown category {v!r}")


RAW_FEATURE_NAMES = tuple(f.name for f in fields(FeatureVector))


@dataclass(frozen=True)
class EngagementRecord:
    scenario_id: str
    agent_id: str
    t_start: float
    t_end: float
    ordinal: int  # 1 = the agent's first engagement of the run
    terminal_kind: str
    features: FeatureVector
    target: float  # mean DCA index over the episode

    def validate(self) -> None:
        if not self.t_start < self.t_end:
            raise ValueError("engagement must span a positive interval")
        if not 0.0 < self.target < 1.0:
            raise ValueError(f"target {self.target} outside (0, 1)")
        self.features.validate()


@dataclass
class EncodedMatrix:
    columns: tuple[str, ...]
    X: np.ndarray  # (n, len(columns)) float64
    y: np.ndarray  # (n,) float64


def _state_from_row(row: list, side: str) -> AircraftState:
    return AircraftState(
        ac_id=row[_IDX["id"]],
        side=side,
        x_m=row[_IDX["x"]],
        y_m=row[_IDX["y"]],
        altitude_m=row[_IDX["alt"]],
        heading_deg=row[_IDX["hdg"]],
        speed_kn=row[_IDX["spd"]],
        missiles_avail=row[_IDX["mis"]],
        alive=bool(row[_IDX["alive"]]),
    )


def _sides_by_id(log: EventLog) -> dict[str, str]:
    return {ac.ac_id: ac.side for ac in log.config.aircraft}


def _agent_rows(log: EventLog, agent_id: str) -> list[tuple[float, list]]:
    rows = []
    for tick in log.ticks:
        for row in tick["ac"]:
            if row[_IDX["id"]] == agent_id:
                rows.append((tick["t"], row))
                break
    return rows


def extract_engagements(log: EventLog) -> list[EngagementRecord]:
    """All Commit episodes of both blue agents, in chronological order."""
    dt = log.config.dt_s
    records: list[EngagementRecord] = []
    blue_ids = [ac.ac_id for ac in log.config.aircraft if ac.side == "blue"]

    idx_by_tick: dict[str, dict[float, float]] = {a: {} for a in blue_ids}
    for tick in log.ticks:
        for ac_id, value in tick["idx"]:
            idx_by_tick[ac_id][tick["t"]] = value

    for agent_id in blue_ids:
        rows = _agent_rows(log, agent_id)
        ordinal = 0
        i = 0
        while i < len(rows):
            t, row = rows[i]
            if row[_IDX["fsm"]] != "COMMIT" or not row[_IDX["alive"]]:
                i += 1
                continue
            # start of an episode: collect its ticks
            j = i
            while (
                j < len(rows)
                and rows[j][1][_IDX["fsm"]] == "COMMIT"
                and rows[j][1][_IDX["alive"]]
            ):
                j += 1
            t_start = rows[i][0]
            if j < len(rows) and rows[j][1][_IDX["alive"]]:
                terminal = rows[j][1][_IDX["fsm"]]
                if terminal not in (TERMINAL_BREAK, TERMINAL_ABORT):
                    terminal = TERMINAL_TRUNCATED
                t_end = rows[j][0]
            else:
                terminal = TERMINAL_TRUNCATED  # death or scenario end
                t_end = rows[j - 1][0] + dt
            ordinal += 1
            samples = [
                IndexSample(rows[k][0], idx_by_tick[agent_id][rows[k][0]])
                for k in range(i, j)
            ]
            record = EngagementRecord(
                scenario_id=log.config.scenario_id,
                agent_id=agent_id,
                t_start=t_start,
                t_end=t_end,
                ordinal=ordinal,
                terminal_kind=terminal,
                features=snapshot_features(log, agent_id, t_start),
                target=engagement_target(samples),
            )
            record.validate()
            records.append(record)
            i = j
    records.sort(key=lambda r: (r.t_start, r.agent_id))
    return records


def snapshot_features(log: EventLog, agent_id: str, t_commit: float) -> FeatureVector:
    """Table-style snapshot from the tick immediately preceding the Commit."""
    dt = log.config.dt_s
    snap_idx = int(round(t_commit / dt)) - 1
    if snap_idx < 0:
        raise ValueError("no tick precedes the engagement start")
    tick = log.ticks[snap_idx]
    if abs(tick["t"] - (t_commit - dt)) > 1e-9:
        raise ValueError(f"log has no tick at {t_commit - dt}")

    sides = _sides_by_id(log)
    rows = {row[_IDX["id"]]: row for row in tick["ac"]}
    own_row = rows[agent_id]
    own_side = sides[agent_id]

    target_id = own_row[_IDX["tgt"]]
    if target_id is None:
        # picture formed on the commit tick itself; use its priority target
        commit_row = next(
            r for r in log.ticks[snap_idx + 1]["ac"] if r[_IDX["id"]] == agent_id
        )
        target_id = commit_row[_IDX["tgt"]]
    if target_id is None:
        raise ValueError(f"{agent_id}: no priority target around t={t_commit}")

    me = _state_from_row(own_row, own_side)
    tgt = _state_from_row(rows[target_id], sides[target_id])

    states = [_state_from_row(r, sides[r[_IDX["id"]]]) for r in tick["ac"]]
    team = [s for s in states if s.side == own_side]
    detected = target_id in sensors.merged_contact_ids(team, states)
    wez_o2t = sensors.wez_estimate(me, tgt, detected)
    wez_t2o = sensors.wez_estimate(tgt, me, detected)

    own_cfg = log.config.configs[own_side]
    enemy_cfg = log.config.configs[tgt.side]
    fv = FeatureVector(
        distance=sensors.slant_range_m(me, tgt),
        aspect=sensors.aspect_deg(me, tgt),
        delta_head=sensors.delta_heading_deg(me, tgt),
        delta_alt=me.altitude_m - tgt.altitude_m,
        delta_vel=me.speed_kn - tgt.speed_kn,
        wez_max_o2t=wez_o2t.r_max_m,
        wez_nez_o2t=wez_o2t.r_nez_m,
        wez_max_t2o=wez_t2o.r_max_m,
        wez_nez_t2o=wez_t2o.r_nez_m,
        vul_thr_bef_shot=own_cfg.vul_thr_bef_shot,
        vul_thr_aft_shot=own_cfg.vul_thr_aft_shot,
        shot_point=own_cfg.shot_point,
        rwr_warning=own_cfg.rwr_present,
        hp_tgt_off=own_row[_IDX["off"]],
        hp_thr_vul=own_row[_IDX["vul"]],
        own_shot_phi=own_cfg.shot_philosophy,
        enemy_shot_phi=enemy_cfg.shot_philosophy,
    )
    fv.validate()
    return fv


def _one_hot(value: str, prefix: str) -> list[float]:
    if value not in SHOT_PHILOSOPHIES:
        raise ValueError(f"{prefix}: unknown category {value!r}")
    return [1.0 if value == cat else 0.0 for cat in SHOT_PHILOSOPHIES]


def encoded_columns() -> tuple[str, ...]:
    cols: list[str] = []
    for name in RAW_FEATURE_NAMES:
        if name in ("aspect", "delta_head"):
            cols.extend([f"{name}_sin", f"{name}_cos"])
        elif name in ("own_shot_phi", "enemy_shot_phi"):
            cols.extend(f"{name}_{cat}" for cat in SHOT_PHILOSOPHIES)
        else:
            cols.append(name)
    return tuple(cols)


ENCODED_COLUMNS = encoded_columns()


def encode_features(fv: FeatureVector) -> list[float]:
    """One encoded row in ENCODED_COLUMNS order."""
    fv.validate()
    row: list[float] = []
    for name in RAW_FEATURE_NAMES:
        value = getattr(fv, name)
        if name in ("aspect", "delta_head"):
            rad = math.radians(value)
            row.extend([math.sin(rad), math.cos(rad)])
        elif name in ("own_shot_phi", "enemy_shot_phi"):
            row.extend(_one_hot(value, name))
        elif name == "rwr_warning":
            row.append(1.0 if value else 0.0)
        else:
            row.append(float(value))
    return row


def encode(records: list[EngagementRecord]) -> EncodedMatrix:
    if not records:
        raise ValueError("cannot encode an empty record list")
    X = np.array([encode_features(r.features) for r in records], dtype=np.float64)
    y = np.array([r.target for r in records], dtype=np.float64)
    return EncodedMatrix(columns=ENCODED_COLUMNS, X=X, y=y)


def split(
    matrix: EncodedMatrix, ratio: float = 0.8, seed: int = 0
) -> tuple[EncodedMatrix, EncodedMatrix]:
    n = len(matrix.y)
    if n < 10:
        raise ValueError(f"need at least 10 rows to split, got {n}")
    if not 0.0 < ratio < 1.0:
        raise ValueError("split ratio must lie in (0, 1)")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = min(max(int(round(n * ratio)), 1), n - 1)
    tr, te = perm[:n_train], perm[n_train:]
    return (
        EncodedMatrix(matrix.columns, matrix.X[tr], matrix.y[tr]),
        EncodedMatrix(matrix.columns, matrix.X[te], matrix.y[te]),
    )


def target_stats(y: np.ndarray) -> dict:
    return {
        "count": int(len(y)),
        "mean": float(np.mean(y)) if len(y) else None,
        "std": float(np.std(y)) if len(y) else None,
        "min": float(np.min(y)) if len(y) else None,
        "median": float(np.median(y)) if len(y) else None,
        "max": float(np.max(y)) if len(y) else None,
    }


def write_csv(matrix: EncodedMatrix, path: str | Path) -> None:
    lines = [",".join(matrix.columns) + ",target"]
    for row, target in zip(matrix.X, matrix.y):
        lines.append(",".join(repr(float(v)) for v in row) + f",{float(target)!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path: str | Path) -> EncodedMatrix:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if header[-1] != "target":
            raise ValueError(f"{path}: last column must be 'target', got {header[-1]!r}")
        columns = tuple(header[:-1])
        if columns != ENCODED_COLUMNS:
            raise ValueError(
                f"{path}: column schema mismatch; expected {list(ENCODED_COLUMNS)}"
            )
        X_rows, y_rows = [], []
        for lineno, line in enumerate(fh, start=2):
            parts = line.strip().split(",")
            if len(parts) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} fields")
            values = [float(v) for v in parts]
            X_rows.append(values[:-1])
            y_rows.append(values[-1])
    return EncodedMatrix(
        columns=columns,
        X=np.array(X_rows, dtype=np.float64),
        y=np.array(y_rows, dtype=np.float64),
    )
