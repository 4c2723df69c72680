"""Stratification, determinism, and row-to-scenario mapping checks."""

import numpy as np
import pytest

from bvrsim import lhs
from bvrsim.scenario import NM_TO_M


def make_plan(specs, n=10, seed=42):
    return lhs.SamplePlan(specs=tuple(specs), n=n, seed=seed)


def unit_spec(name="u"):
    return lhs.ParameterSpec(name=name, kind=lhs.CONTINUOUS, lo=0.0, hi=1.0)


class TestLhsSample:
    def test_one_sample_per_stratum(self):
        plan = make_plan([unit_spec()], n=4)
        col = np.sort(lhs.lhs_sample(plan)[:, 0])
        for i, v in enumerate(col):
            assert i / 4 <= v < (i + 1) / 4

    def test_boolean_balance(self):
        plan = make_plan([lhs.ParameterSpec(name="b", kind=lhs.BOOLEAN)], n=10)
        col = lhs.lhs_sample(plan)[:, 0]
        assert int(col.sum()) == 5

    def test_determinism(self):
        plan = lhs.default_plan(n=25, seed=7)
        a = lhs.lhs_sample(plan)
        b = lhs.lhs_sample(plan)
        assert a.tobytes() == b.tobytes()

    def test_seed_changes_output(self):
        a = lhs.lhs_sample(lhs.default_plan(n=25, seed=1))
        b = lhs.lhs_sample(lhs.default_plan(n=25, seed=2))
        assert a.tobytes() != b.tobytes()

    def test_stratification_every_continuous_dim(self):
        plan = lhs.default_plan(n=100, seed=3)
        matrix = lhs.lhs_sample(plan)
        for j, spec in enumerate(plan.specs):
            if spec.kind != lhs.CONTINUOUS:
                continue
            u = (matrix[:, j] - spec.lo) / (spec.hi - spec.lo)
            strata = np.floor(u * plan.n).astype(int)
            assert sorted(strata) == list(range(plan.n)), spec.name

    def test_marginal_uniformity(self):
        plan = lhs.default_plan(n=10000, seed=11)
        matrix = lhs.lhs_sample(plan)
        for j, spec in enumerate(plan.specs):
            if spec.kind != lhs.CONTINUOUS:
                continue
            mid = 0.5 * (spec.lo + spec.hi)
            assert abs(matrix[:, j].mean() - mid) <= 0.02 * (spec.hi - spec.lo)

    def test_categorical_values_in_range(self):
        plan = lhs.default_plan(n=33, seed=5)
        matrix = lhs.lhs_sample(plan)
        for j, spec in enumerate(plan.specs):
            if spec.kind == lhs.CATEGORICAL:
                assert set(np.unique(matrix[:, j])) <= {0.0, 1.0, 2.0}

    def test_rejects_zero_samples(self):
        with pytest.raises(ValueError):
            make_plan([unit_spec()], n=0)


class TestPlanIO:
    def test_round_trip(self, tmp_path):
        plan = lhs.default_plan(n=12, seed=99)
        path = tmp_path / "plan.json"
        lhs.save_plan(plan, path)
        assert lhs.load_plan(path) == plan

    def test_default_plan_shape(self):
        plan = lhs.default_plan()
        assert len(plan.specs) == 17
        kinds = [s.kind for s in plan.specs]
        assert kinds.count(lhs.CONTINUOUS) == 13
        assert kinds.count(lhs.CATEGORICAL) == 2
        assert kinds.count(lhs.BOOLEAN) == 2

    def test_validation(self):
        with pytest.raises(ValueError):
            lhs.ParameterSpec(name="x", kind="weird")
        with pytest.raises(ValueError):
            lhs.ParameterSpec(name="x", kind=lhs.CONTINUOUS, lo=1.0, hi=1.0)
        with pytest.raises(ValueError):
            lhs.ParameterSpec(name="x", kind=lhs.CATEGORICAL, values=("a",))
        with pytest.raises(ValueError):
            make_plan([unit_spec("a"), unit_spec("a")])


class TestScenarioFromRow:
    def test_rwr_flag_propagates(self):
        plan = lhs.default_plan(n=40, seed=21)
        matrix = lhs.lhs_sample(plan)
        j = plan.names.index("blue_rwr")
        for i in (0, 1, 2):
            cfg = lhs.scenario_from_row(plan, matrix[i], f"s{i}")
            assert cfg.configs["blue"].rwr_present == bool(matrix[i, j])

    def test_commit_distance_mapping(self):
        plan = lhs.default_plan(n=5, seed=2)
        row = lhs.lhs_sample(plan)[0].copy()
        row[plan.names.index("blue_commit_nm")] = 35.0
        cfg = lhs.scenario_from_row(plan, row, "s0")
        assert cfg.configs["blue"].commit_distance_m == pytest.approx(35.0 * NM_TO_M)

    def test_every_default_row_validates(self):
        plan = lhs.default_plan(n=64, seed=13)
        matrix = lhs.lhs_sample(plan)
        for i in range(plan.n):
            cfg = lhs.scenario_from_row(plan, matrix[i], f"s{i}")
            cfg.validate()

    def test_out_of_range_rejected(self):
        plan = lhs.default_plan(n=5, seed=2)
        row = lhs.lhs_sample(plan)[0].copy()
        row[plan.names.index("blue_offset_nm")] = 500.0
        with pytest.raises(ValueError):
            lhs.scenario_from_row(plan, row, "bad")

    def test_formations_spawn_beyond_radar_range(self):
        from bvrsim.sim.sensors import RADAR_RANGE_M

        plan = lhs.default_plan(n=50, seed=31)
        matrix = lhs.lhs_sample(plan)
        for i in range(plan.n):
            cfg = lhs.scenario_from_row(plan, matrix[i], f"s{i}")
            blues = [a for a in cfg.aircraft if a.side == "blue"]
            reds = [a for a in cfg.aircraft if a.side == "red"]
            for b in blues:
                for r in reds:
                    d = np.hypot(b.x_m - r.x_m, b.y_m - r.y_m)
                    assert d >= RADAR_RANGE_M - 1e-6


class TestMatrixCsv:
    def test_header_and_shape(self, tmp_path):
        plan = lhs.default_plan(n=6, seed=4)
        matrix = lhs.lhs_sample(plan)
        path = tmp_path / "m.csv"
        lhs.write_matrix_csv(plan, matrix, path)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == ",".join(plan.names)
        assert len(lines) == 7
        parsed = np.array(
            [[float(v) for v in line.split(",")] for line in lines[1:]]
        )
        assert np.array_equal(parsed, matrix)
