"""Latin hypercube sampling of scenario input parameters.

A sample plan lists the parameter specs (continuous, categorical, or
boolean), the number of samples, and a seed.  Each dimension draws from
its own counter-based Philox stream keyed by (seed, dimension index), so
the matrix is reproducible regardless of evaluation order and safe to
partition across workers.

Continuous dimensions split [0, 1) into n equal strata and place exactly
one uniform draw inside each, then scale to [lo, hi).  Categorical and
boolean dimensions map the same stratified draws onto values by equal
partition of [0, 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from bvrsim.scenario import (
    ScenarioConfig,
    scenario_from_values,
)

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"
BOOLEAN = "boolean"


@dataclass(frozen=True)
class ParameterSpec:
    """One sampled dimension."""

    name: str
    kind: str
    lo: float = 0.0
    hi: float = 1.0
    units: str = ""
    values: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in (CONTINUOUS, CATEGORICAL, BOOLEAN):
            raise ValueError(f"unknown parameter kind {self.kind!r}")
        if self.kind == CONTINUOUS and not self.lo < self.hi:
            raise ValueError(f"{self.name}: continuous spec needs lo < hi")
        if self.kind == CATEGORICAL and len(set(self.values)) < 2:
            raise ValueError(f"{self.name}: categorical spec needs >= 2 distinct values")


@dataclass(frozen=True)
class SamplePlan:
    specs: tuple[ParameterSpec, ...]
    n: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sample count must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        names = [s.name for s in self.specs]
        if len(set(names)) != len(names):
            raise ValueError("spec names must be unique")

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.specs]


def plan_to_dict(plan: SamplePlan) -> dict:
    specs = []
    for s in plan.specs:
        entry: dict = {"name": s.name, "kind": s.kind}
        if s.kind == CONTINUOUS:
            entry.update(lo=s.lo, hi=s.hi)
            if s.units:
                entry["units"] = s.units
        elif s.kind == CATEGORICAL:
            entry["values"] = list(s.values)
        specs.append(entry)
    return {"n": plan.n, "seed": plan.seed, "specs": specs}


def plan_from_dict(doc: dict) -> SamplePlan:
    try:
        specs = tuple(
            ParameterSpec(
                name=s["name"],
                kind=s["kind"],
                lo=float(s.get("lo", 0.0)),
                hi=float(s.get("hi", 1.0)),
                units=s.get("units", ""),
                values=tuple(s.get("values", ())),
            )
            for s in doc["specs"]
        )
        return SamplePlan(specs=specs, n=int(doc["n"]), seed=int(doc["seed"]))
    except KeyError as exc:
        raise ValueError(f"plan document missing field {exc}") from exc
    except TypeError as exc:
        raise ValueError(f"malformed plan document: {exc}") from exc


def load_plan(path: str | Path) -> SamplePlan:
    with open(path, encoding="utf-8") as fh:
        return plan_from_dict(json.load(fh))


def save_plan(plan: SamplePlan, path: str | Path) -> None:
    Path(path).write_text(json.dumps(plan_to_dict(plan), indent=2) + "\n", encoding="utf-8")


def default_plan(n: int = 100, seed: int = 1) -> SamplePlan:
    """The packaged 17-spec scenario plan with n and seed overridden."""
    text = resources.files("bvrsim.data").joinpath("default_plan.json").read_text()
    doc = json.loads(text)
    doc["n"] = n
    doc["seed"] = seed
    return plan_from_dict(doc)


def _dimension_rng(seed: int, dim: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, dim], dtype=np.uint64)))


def lhs_sample(plan: SamplePlan) -> np.ndarray:
    """Sample the plan into an (n, len(specs)) float matrix.

    Continuous columns hold scaled values; categorical columns hold the
    category index; boolean columns hold 0.0 or 1.0.
    """
    n = plan.n
    out = np.empty((n, len(plan.specs)), dtype=np.float64)
    for j, spec in enumerate(plan.specs):
        rng = _dimension_rng(plan.seed, j)
        strata = rng.permutation(n)
        u = (strata + rng.random(n)) / n
        if spec.kind == CONTINUOUS:
            out[:, j] = spec.lo + u * (spec.hi - spec.lo)
        elif spec.kind == CATEGORICAL:
            out[:, j] = np.floor(u * len(spec.values))
        else:
            out[:, j] = np.floor(u * 2)
    return out


def decode_row(plan: SamplePlan, row: np.ndarray) -> dict:
    """Turn one matrix row into named Python values."""
    if len(row) != len(plan.specs):
        raise ValueError(f"row has {len(row)} values, plan has {len(plan.specs)} specs")
    values: dict = {}
    for spec, raw in zip(plan.specs, row):
        if spec.kind == CONTINUOUS:
            values[spec.name] = float(raw)
        elif spec.kind == CATEGORICAL:
            idx = int(raw)
            if not 0 <= idx < len(spec.values):
                raise ValueError(f"{spec.name}: category index {idx} out of range")
            values[spec.name] = spec.values[idx]
        else:
            values[spec.name] = bool(int(raw))
    return values


def scenario_from_row(
    plan: SamplePlan, row: np.ndarray, scenario_id: str
) -> ScenarioConfig:
    """Map one sampled row of the canonical scenario plan to a config."""
    return scenario_from_values(decode_row(plan, row), scenario_id)


def write_matrix_csv(plan: SamplePlan, matrix: np.ndarray, path: str | Path) -> None:
    lines = [",".join(plan.names)]
    for row in matrix:
        lines.append(",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
