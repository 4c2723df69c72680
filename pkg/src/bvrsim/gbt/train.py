"""Boosting driver, evaluation metrics, k-fold CV, and grid search.

Each round fits one exact-greedy regression tree to the squared-error
gradients (g = prediction - target, h = 1), drawing seeded row and column
subsamples, then nudges predictions by the learning rate.  The kernel that
grows trees is selected at import (compiled if available, numpy fallback
otherwise); both produce identical models.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from bvrsim.dataset import EncodedMatrix
from bvrsim.gbt.model import GbtModel, HyperParams, Tree


@dataclass
class CvResult:
    fold_rmse: list[float]
    fold_r2: list[float]

    @property
    def rmse_mean(self) -> float:
        return float(np.mean(self.fold_rmse))

    @property
    def rmse_std(self) -> float:
        return float(np.std(self.fold_rmse))

    @property
    def r2_mean(self) -> float:
        return float(np.mean(self.fold_r2))

    @property
    def r2_std(self) -> float:
        return float(np.std(self.fold_r2))

    def to_dict(self) -> dict:
        return {
            "fold_rmse": self.fold_rmse,
            "fold_r2": self.fold_r2,
            "rmse_mean": self.rmse_mean,
            "rmse_std": self.rmse_std,
            "r2_mean": self.r2_mean,
            "r2_std": self.r2_std,
        }


def rmse(y: np.ndarray, pred: np.ndarray) -> float:
    y = np.asarray(y, dtype=np.float64)
    pred = np.asarray(pred, dtype=np.float64)
    if y.shape != pred.shape or y.size == 0:
        raise ValueError("rmse needs two equal-length non-empty vectors")
    return float(np.sqrt(np.mean((y - pred) ** 2)))


def r2(y: np.ndarray, pred: np.ndarray) -> float:
    y = np.asarray(y, dtype=np.float64)
    pred = np.asarray(pred, dtype=np.float64)
    if y.shape != pred.shape or y.size == 0:
        raise ValueError("r2 needs two equal-length non-empty vectors")
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise ValueError("r2 is undefined for a zero-variance target")
    return 1.0 - float(np.sum((y - pred) ** 2)) / ss_tot


def fit(
    train: EncodedMatrix, hp: HyperParams, seed: int, kernel=None
) -> GbtModel:
    """Train a forest on the encoded matrix; deterministic in (data, hp, seed)."""
    if kernel is None:
        from bvrsim.gbt import active_kernel

        kernel = active_kernel()
    X = np.ascontiguousarray(train.X, dtype=np.float64)
    y = np.asarray(train.y, dtype=np.float64)
    n, p = X.shape
    if n < 2:
        raise ValueError("need at least 2 training rows")
    if not np.isfinite(y).all():
        raise ValueError("targets must be finite")

    rng = np.random.default_rng(seed)
    order = np.argsort(X, axis=0, kind="stable").astype(np.int32)
    order = np.ascontiguousarray(order)
    base_score = float(np.mean(y))
    pred = np.full(n, base_score, dtype=np.float64)
    ones = np.ones(n, dtype=np.float64)
    trees: list[Tree] = []

    n_rows = max(1, int(round(hp.subsample * n)))
    n_cols = max(1, int(round(hp.colsample_bytree * p)))
    for _ in range(hp.n_estimators):
        g = pred - y
        h = ones
        if n_rows < n:
            keep = rng.permutation(n)[:n_rows]
            g_used = np.zeros(n, dtype=np.float64)
            h_used = np.zeros(n, dtype=np.float64)
            g_used[keep] = g[keep]
            h_used[keep] = 1.0
        else:
            g_used, h_used = g, h
        if n_cols < p:
            feats = np.sort(rng.permutation(p)[:n_cols]).astype(np.int32)
        else:
            feats = np.arange(p, dtype=np.int32)
        feature, threshold, left, right, default_left, weight, leaf_of_row = (
            kernel.build_tree(
                X,
                order,
                g_used,
                h_used,
                feats,
                hp.max_depth,
                hp.min_child_weight,
                hp.reg_lambda,
                hp.reg_alpha,
                hp.gamma,
            )
        )
        trees.append(Tree(feature, threshold, left, right, default_left, weight))
        pred = pred + hp.learning_rate * weight[leaf_of_row]

    return GbtModel(
        schema=tuple(train.columns),
        base_score=base_score,
        learning_rate=hp.learning_rate,
        trees=trees,
        hyperparams=hp,
        metadata={"seed": seed, "n_train_rows": n},
    )


def kfold_cv(
    matrix: EncodedMatrix, hp: HyperParams, k: int = 10, seed: int = 0, kernel=None
) -> CvResult:
    """Seeded shuffle, k near-equal folds, one fit per held-out fold."""
    n = len(matrix.y)
    if k < 2:
        raise ValueError("k must be >= 2")
    if n < k:
        raise ValueError(f"need at least k={k} rows, got {n}")
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(perm, k)
    fold_rmse, fold_r2 = [], []
    for held in folds:
        mask = np.ones(n, dtype=bool)
        mask[held] = False
        train = EncodedMatrix(matrix.columns, matrix.X[mask], matrix.y[mask])
        model = fit(train, hp, seed, kernel=kernel)
        pred = model.predict(matrix.X[held])
        fold_rmse.append(rmse(matrix.y[held], pred))
        fold_r2.append(r2(matrix.y[held], pred))
    return CvResult(fold_rmse=fold_rmse, fold_r2=fold_r2)


def expand_grid(grid: dict[str, list]) -> list[HyperParams]:
    """Cross product of the grid's value lists, in stable order."""
    if not grid:
        raise ValueError("grid must name at least one hyperparameter")
    keys = list(grid)
    combos = []
    for values in itertools.product(*(grid[k] for k in keys)):
        combos.append(HyperParams(**dict(zip(keys, values))))
    return combos


def select_budget(n_configs: int, budget: int | None, seed: int) -> list[int]:
    """Indices of the configurations to evaluate, seeded and sorted."""
    if budget is None or budget >= n_configs:
        return list(range(n_configs))
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    return sorted(rng.permutation(n_configs)[:budget].tolist())


def grid_search(
    matrix: EncodedMatrix,
    grid: dict[str, list],
    k: int = 10,
    seed: int = 0,
    budget: int | None = None,
    kernel=None,
) -> tuple[HyperParams, list[dict]]:
    """Evaluate (a budgeted subset of) the grid by k-fold CV.

    Returns the winning configuration (lowest mean RMSE; ties fall to the
    smaller n_estimators then smaller max_depth) and the full report table.
    """
    configs = expand_grid(grid)
    chosen = select_budget(len(configs), budget, seed)
    report = []
    best = None
    best_key = None
    for idx in chosen:
        hp = configs[idx]
        cv = kfold_cv(matrix, hp, k=k, seed=seed, kernel=kernel)
        report.append(
            {"config_index": idx, "hyperparams": hp.__dict__, **cv.to_dict()}
        )
        key = (cv.rmse_mean, hp.n_estimators, hp.max_depth)
        if best_key is None or key < best_key:
            best, best_key = hp, key
    return best, report
