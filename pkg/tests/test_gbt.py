"""Trainer checks against exhaustive split search and arithmetic oracles."""

import json

import numpy as np
import pytest

from bvrsim.dataset import EncodedMatrix
from bvrsim.gbt import (
    GbtModel,
    HyperParams,
    Tree,
    fit,
    grid_search,
    kfold_cv,
    load_model,
    r2,
    rmse,
    save_model,
)
from bvrsim.gbt.train import expand_grid, select_budget


def matrix(X, y, names=None):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    names = names or tuple(f"f{i}" for i in range(X.shape[1]))
    return EncodedMatrix(columns=tuple(names), X=X, y=np.asarray(y, dtype=np.float64))


def sse_reduction(X, y, f, thr):
    parent = float(np.sum((y - y.mean()) ** 2))
    left = y[X[:, f] < thr]
    right = y[X[:, f] >= thr]
    if len(left) == 0 or len(right) == 0:
        return 0.0
    child = float(np.sum((left - left.mean()) ** 2)) + float(
        np.sum((right - right.mean()) ** 2)
    )
    return parent - child


def brute_force_split(X, y):
    """Exhaustive minimizer of squared error over all (feature, threshold).

    Mirrors the trainer's tie rules: lowest feature index, then lowest
    threshold; thresholds are midpoints between consecutive distinct
    sorted values.  Returns (feature, threshold, reduction, unique) where
    ``unique`` says the optimum stands clear of every other candidate.
    """
    n, p = X.shape
    candidates = []
    for f in range(p):
        vs = np.sort(np.unique(X[:, f]))
        for a, b in zip(vs, vs[1:]):
            thr = 0.5 * (a + b)
            candidates.append((f, thr, sse_reduction(X, y, f, thr)))
    if not candidates:
        return None
    best = max(candidates, key=lambda c: c[2])
    first = next(c for c in candidates if c[2] == best[2])
    margin = 1e-9 * max(1.0, abs(best[2]))
    unique = sum(1 for c in candidates if c[2] >= best[2] - margin) == 1
    return first[0], first[1], first[2], unique


def stump_hp(**overrides):
    defaults = dict(
        n_estimators=1,
        learning_rate=1.0,
        max_depth=1,
        gamma=0.0,
        reg_alpha=0.0,
        reg_lambda=0.0,
        min_child_weight=0.0,
    )
    defaults.update(overrides)
    return HyperParams(**defaults)


class TestSplitOracle:
    def test_textbook_step_function(self):
        m = matrix([1.0, 2.0, 3.0, 4.0], [0.0, 0.0, 1.0, 1.0])
        model = fit(m, stump_hp(), seed=0)
        tree = model.trees[0]
        assert tree.feature[0] == 0
        assert tree.threshold[0] == 2.5
        # raw SSE reduction is 1.0; the second-order gain at lambda=0 is half
        oracle = brute_force_split(m.X, m.y)
        assert oracle[:2] == (0, 2.5)
        assert oracle[2] == pytest.approx(1.0)
        gl = np.sum(m.y.mean() - m.y[:2])
        gr = np.sum(m.y.mean() - m.y[2:])
        gain = 0.5 * (gl * gl / 2.0 + gr * gr / 2.0 - 0.0)
        assert gain == pytest.approx(0.5)

    def test_matches_brute_force_on_random_data(self):
        rng = np.random.default_rng(8)
        for trial in range(120):
            n = int(rng.integers(4, 65))
            p = int(rng.integers(1, 5))
            if trial % 3 == 0:
                X = rng.integers(0, 5, size=(n, p)).astype(float)  # heavy ties
            else:
                X = rng.normal(size=(n, p))
            y = rng.normal(size=n)
            if len(np.unique(y)) < 2:
                continue
            oracle = brute_force_split(X, y)
            model = fit(matrix(X, y), stump_hp(), seed=trial)
            tree = model.trees[0]
            if oracle is None or oracle[2] <= 1e-12:
                assert tree.feature[0] == -1
                continue
            f, thr, best_red, unique = oracle
            # the chosen split must achieve the brute-force optimum; when the
            # optimum is unique it must be the same (feature, threshold)
            chosen_red = sse_reduction(X, y, int(tree.feature[0]), tree.threshold[0])
            assert chosen_red >= best_red - 1e-9 * max(1.0, best_red), f"trial {trial}"
            if unique:
                assert (int(tree.feature[0]), tree.threshold[0]) == (f, thr)

    def test_huge_gamma_kills_all_splits(self):
        rng = np.random.default_rng(1)
        m = matrix(rng.normal(size=(64, 3)), rng.normal(size=64))
        model = fit(m, stump_hp(gamma=1e9), seed=0)
        tree = model.trees[0]
        assert len(tree) == 1 and tree.feature[0] == -1

    def test_l1_soft_threshold_zeroes_leaf(self):
        # after the split each child carries |G| = 0.5 < alpha = 1, so the
        # soft threshold zeroes both leaf weights exactly
        m = matrix([1.0, 2.0], [0.0, 1.0])
        model = fit(m, stump_hp(reg_alpha=1.0), seed=0)
        tree = model.trees[0]
        assert tree.feature[0] == 0  # the split itself is still worthwhile
        assert np.all(tree.weight == 0.0)

    def test_alpha_never_grows_leaf_weights(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(50, 2))
        y = rng.normal(size=50)
        weights = []
        for alpha in (0.0, 0.1, 1.0, 10.0):
            model = fit(matrix(X, y), stump_hp(max_depth=3, reg_alpha=alpha), seed=5)
            weights.append(np.abs(model.trees[0].weight).max())
        assert all(a >= b - 1e-15 for a, b in zip(weights, weights[1:]))


class TestFit:
    def test_constant_target(self):
        rng = np.random.default_rng(0)
        m = matrix(rng.normal(size=(30, 3)), np.full(30, 0.37))
        model = fit(m, HyperParams(n_estimators=5), seed=0)
        pred = model.predict(rng.normal(size=(10, 3)))
        assert np.allclose(pred, 0.37, atol=1e-12)

    def test_learns_identity_function(self):
        x = np.linspace(0, 1, 100)
        m = matrix(x, x)
        model = fit(
            m, HyperParams(n_estimators=50, learning_rate=0.3, max_depth=3), seed=0
        )
        train_rmse = rmse(m.y, model.predict(m.X))
        assert train_rmse < 0.02 * float(np.std(m.y))

    def test_deterministic_model_bytes(self):
        rng = np.random.default_rng(4)
        m = matrix(rng.normal(size=(80, 4)), rng.normal(size=80))
        hp = HyperParams(n_estimators=12, subsample=0.7, colsample_bytree=0.6)
        a = fit(m, hp, seed=11).to_json()
        b = fit(m, hp, seed=11).to_json()
        assert a == b

    def test_seed_changes_subsampled_model(self):
        rng = np.random.default_rng(4)
        m = matrix(rng.normal(size=(80, 4)), rng.normal(size=80))
        hp = HyperParams(n_estimators=12, subsample=0.7)
        assert fit(m, hp, seed=1).to_json() != fit(m, hp, seed=2).to_json()

    def test_training_loss_monotone_without_subsampling(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(120, 3))
        y = X[:, 0] + 0.5 * np.sin(3 * X[:, 1]) + 0.1 * rng.normal(size=120)
        m = matrix(X, y)
        model = fit(m, HyperParams(n_estimators=25, learning_rate=0.2), seed=0)
        losses = []
        for k in range(len(model.trees) + 1):
            partial = GbtModel(
                schema=model.schema,
                base_score=model.base_score,
                learning_rate=model.learning_rate,
                trees=model.trees[:k],
                hyperparams=model.hyperparams,
            )
            losses.append(rmse(m.y, partial.predict(m.X)))
        assert all(a >= b - 1e-12 for a, b in zip(losses, losses[1:]))

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            fit(matrix([[1.0]], [1.0]), HyperParams(), seed=0)
        with pytest.raises(ValueError):
            fit(matrix([1.0, 2.0], [np.nan, 1.0]), HyperParams(), seed=0)


class TestPredict:
    def test_empty_forest_returns_base(self):
        model = GbtModel(
            schema=("a",),
            base_score=0.42,
            learning_rate=0.1,
            trees=[],
            hyperparams=HyperParams(),
        )
        assert np.allclose(model.predict(np.zeros((3, 1))), 0.42)

    def test_single_leaf_arithmetic(self):
        leaf = Tree.from_nested({"weight": 2.0})
        model = GbtModel(
            schema=("a",),
            base_score=0.5,
            learning_rate=0.1,
            trees=[leaf],
            hyperparams=HyperParams(),
        )
        assert np.allclose(model.predict(np.zeros((2, 1))), 0.5 + 0.1 * 2.0)

    def test_batch_equals_per_row(self):
        rng = np.random.default_rng(6)
        m = matrix(rng.normal(size=(60, 3)), rng.normal(size=60))
        model = fit(m, HyperParams(n_estimators=10, max_depth=4), seed=0)
        X = rng.normal(size=(20, 3))
        batch = model.predict(X)
        rows = [model.predict_row(X[i]) for i in range(len(X))]
        assert np.allclose(batch, rows, atol=0.0)

    def test_nan_routes_by_default_direction(self):
        tree = Tree.from_nested(
            {
                "feature": 0,
                "threshold": 0.0,
                "default": "right",
                "left": {"weight": -1.0},
                "right": {"weight": 1.0},
            }
        )
        model = GbtModel(
            schema=("a",),
            base_score=0.0,
            learning_rate=1.0,
            trees=[tree],
            hyperparams=HyperParams(),
        )
        assert model.predict(np.array([[np.nan]]))[0] == 1.0

    def test_schema_mismatch(self):
        m = matrix(np.zeros((12, 2)), np.arange(12, dtype=float))
        model = fit(m, HyperParams(n_estimators=1), seed=0)
        with pytest.raises(ValueError):
            model.predict(np.zeros((3, 5)))


class TestMetrics:
    def test_perfect_fit(self):
        y = np.array([0.1, 0.4, 0.9])
        assert rmse(y, y) == 0.0
        assert r2(y, y) == 1.0

    def test_mean_prediction_r2_zero(self):
        y = np.array([0.0, 0.5, 1.0])
        pred = np.full(3, y.mean())
        assert r2(y, pred) == pytest.approx(0.0, abs=1e-15)

    def test_two_point_hand_computation(self):
        y = np.array([0.0, 1.0])
        pred = np.array([0.5, 0.5])
        assert rmse(y, pred) == pytest.approx(0.5)
        assert r2(y, pred) == pytest.approx(0.0, abs=1e-15)

    def test_zero_variance_undefined(self):
        with pytest.raises(ValueError):
            r2(np.ones(4), np.zeros(4))


class TestKfold:
    def make(self, n=100, seed=0):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(n, 3))
        y = X[:, 0] + 0.1 * rng.normal(size=n)
        return matrix(X, y)

    def test_every_row_held_out_once(self):
        n = 100
        perm = np.random.default_rng(7).permutation(n)
        folds = np.array_split(perm, 10)
        assert sorted(np.concatenate(folds).tolist()) == list(range(n))
        assert all(abs(len(f) - 10) <= 1 for f in folds)

    def test_deterministic(self):
        m = self.make()
        hp = HyperParams(n_estimators=5, max_depth=2)
        a = kfold_cv(m, hp, k=5, seed=3)
        b = kfold_cv(m, hp, k=5, seed=3)
        assert a.fold_rmse == b.fold_rmse and a.fold_r2 == b.fold_r2

    def test_learnable_signal_scores_well(self):
        m = self.make(200)
        cv = kfold_cv(m, HyperParams(n_estimators=40, max_depth=3), k=5, seed=0)
        assert cv.r2_mean > 0.8

    def test_unlearnable_signal_near_zero(self):
        rng = np.random.default_rng(12)
        m = matrix(rng.normal(size=(600, 3)), rng.normal(size=600))
        # huge gamma forces constant predictions: R^2 hovers around zero
        cv = kfold_cv(m, HyperParams(n_estimators=3, gamma=1e9), k=5, seed=0)
        assert abs(cv.r2_mean) < 0.1

    def test_bad_k(self):
        m = self.make(20)
        with pytest.raises(ValueError):
            kfold_cv(m, HyperParams(n_estimators=1), k=1, seed=0)
        with pytest.raises(ValueError):
            kfold_cv(m, HyperParams(n_estimators=1), k=30, seed=0)


class TestGridSearch:
    def test_singleton_grid(self):
        m = TestKfold().make(60)
        grid = {"n_estimators": [5], "max_depth": [2]}
        best, report = grid_search(m, grid, k=3, seed=0)
        assert best == HyperParams(n_estimators=5, max_depth=2)
        assert len(report) == 1
        assert report[0]["rmse_mean"] > 0

    def test_learning_rate_toy_selection(self):
        x = np.linspace(0, 1, 120)
        m = matrix(x, x)
        grid = {"learning_rate": [0.1, 0.001], "n_estimators": [20]}
        best, report = grid_search(m, grid, k=4, seed=0)
        assert best.learning_rate == 0.1
        assert len(report) == 2

    def test_budget_contract(self):
        grid = {
            "n_estimators": [100, 1000, 5000],
            "learning_rate": [0.1, 0.01, 0.001],
            "max_depth": [2, 3, 6, 10, 15, 20],
            "gamma": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
            "subsample": [0.6, 0.7, 0.8, 0.9],
            "colsample_bytree": [0.6, 0.7, 0.8, 0.9],
            "reg_alpha": [0.001, 0.01, 0.1, 1, 10, 100],
            "min_child_weight": [1, 3, 5, 7, 9, 10, 13, 15],
        }
        configs = expand_grid(grid)
        assert len(configs) == 3 * 3 * 6 * 6 * 4 * 4 * 6 * 8
        chosen = select_budget(len(configs), 10, seed=9)
        assert len(chosen) == 10 == len(set(chosen))
        assert all(0 <= i < len(configs) for i in chosen)
        assert chosen == select_budget(len(configs), 10, seed=9)

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            expand_grid({})


class TestModelIO:
    def test_json_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        m = matrix(rng.normal(size=(50, 3)), rng.uniform(0, 1, 50))
        model = fit(m, HyperParams(n_estimators=8, max_depth=3), seed=1)
        path = tmp_path / "model.json"
        save_model(model, path)
        back = load_model(path)
        assert back.to_json() == model.to_json()
        X = rng.normal(size=(10, 3))
        assert np.array_equal(back.predict(X), model.predict(X))

    def test_hyperparams_validation(self):
        with pytest.raises(ValueError):
            HyperParams(n_estimators=0)
        with pytest.raises(ValueError):
            HyperParams(learning_rate=0.0)
        with pytest.raises(ValueError):
            HyperParams(subsample=1.5)
        with pytest.raises(ValueError):
            HyperParams(reg_alpha=-1.0)
