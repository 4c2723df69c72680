"""Benchmark the compiled tree kernel against the numpy fallback.

Times training and batch prediction on a synthetic regression task and
verifies both backends emit identical model bytes.  Run:

    python benchmarks/bench_backends.py [--rows 2000] [--rounds 200]
"""

import argparse
import time

import numpy as np

from bvrsim.dataset import EncodedMatrix
from bvrsim.gbt import HyperParams, fit
from bvrsim.gbt import _kernel_py

try:
    from bvrsim.gbt import _kernel as _compiled
except ImportError:
    _compiled = None


def friedman(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.uniform(size=(n, 10))
    y = (
        10.0 * np.sin(np.pi * X[:, 0] * X[:, 1])
        + 20.0 * (X[:, 2] - 0.5) ** 2
        + 10.0 * X[:, 3]
        + 5.0 * X[:, 4]
    )
    y += 0.1 * y.std() * rng.normal(size=n)
    return EncodedMatrix(tuple(f"x{i}" for i in range(10)), X, y)


def bench(kernel, name, matrix, hp, n_pred):
    t0 = time.perf_counter()
    model = fit(matrix, hp, seed=0, kernel=kernel)
    t_fit = time.perf_counter() - t0

    rng = np.random.default_rng(1)
    X = rng.uniform(size=(n_pred, matrix.X.shape[1]))
    flat = model._flat_forest()
    t0 = time.perf_counter()
    kernel.predict_forest(*flat, X, model.base_score, model.learning_rate)
    t_pred = time.perf_counter() - t0
    print(
        f"{name:>9}: fit {t_fit * 1e3:8.1f} ms   "
        f"predict {n_pred} rows {t_pred * 1e3:8.2f} ms "
        f"({n_pred / t_pred:,.0f} rows/s)"
    )
    return model, t_fit, t_pred


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=2000)
    parser.add_argument("--rounds", type=int, default=200)
    parser.add_argument("--depth", type=int, default=6)
    parser.add_argument("--pred-rows", type=int, default=20000)
    args = parser.parse_args()

    matrix = friedman(args.rows, seed=7)
    hp = HyperParams(
        n_estimators=args.rounds, learning_rate=0.1, max_depth=args.depth
    )
    print(f"rows={args.rows} rounds={args.rounds} depth={args.depth}")

    py_model, py_fit, py_pred = bench(
        _kernel_py, "python", matrix, hp, args.pred_rows
    )
    if _compiled is None:
        print("compiled kernel not built; skipping comparison")
        return
    c_model, c_fit, c_pred = bench(
        _compiled, "compiled", matrix, hp, args.pred_rows
    )
    identical = c_model.to_json() == py_model.to_json()
    print(f"identical model bytes: {identical}")
    print(f"speedup: fit {py_fit / c_fit:.1f}x, predict {py_pred / c_pred:.1f}x")
    if not identical:
        raise SystemExit("backend outputs diverged")


if __name__ == "__main__":
    main()
