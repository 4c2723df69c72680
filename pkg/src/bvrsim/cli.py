"""Batch orchestration CLI.

Subcommands cover the whole pipeline: emit a sampling plan, run a
simulation batch, extract the engagement dataset, train and evaluate a
model, score new states, and serve the inference API.  Every command is
deterministic under fixed seeds and never mutates its inputs.

Exit codes: 0 success, 1 partial failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np

from bvrsim import __version__, dataset, lhs
from bvrsim.gbt import fit, grid_search, load_model, r2, rmse, save_model
from bvrsim.sim.engine import run_simulation
from bvrsim.sim.events import read_log, write_log

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _load_grid(name: str) -> dict:
    if name in ("default", "quick"):
        text = resources.files("bvrsim.data").joinpath(f"{name}_grid.json").read_text()
    else:
        text = Path(name).read_text(encoding="utf-8")
    grid = json.loads(text)
    if not isinstance(grid, dict) or not grid:
        raise ValueError("grid file must map hyperparameter names to value lists")
    return grid


# --- plan ---------------------------------------------------------------


def cmd_plan(args) -> int:
    try:
        if args.base:
            plan = lhs.load_plan(args.base)
            doc = lhs.plan_to_dict(plan)
            doc["n"], doc["seed"] = args.n, args.seed
            plan = lhs.plan_from_dict(doc)
        else:
            plan = lhs.default_plan(n=args.n, seed=args.seed)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"cannot build plan: {exc}")
    lhs.save_plan(plan, args.out)
    print(f"wrote plan with {len(plan.specs)} specs, n={plan.n} to {args.out}")
    return EXIT_OK


# --- simulate -------------------------------------------------------------


def _run_one(task):
    index, config_doc, seed, out_path = task
    from bvrsim.scenario import config_from_dict

    config = config_from_dict(config_doc)
    log = run_simulation(config, seed=seed)
    write_log(log, out_path)
    return index, len(log.ticks)


def cmd_simulate(args) -> int:
    try:
        plan = lhs.load_plan(args.plan)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"cannot read plan {args.plan}: {exc}")
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        return _fail(f"cannot create output dir: {exc}")
    seed = plan.seed if args.seed is None else args.seed
    if args.seed is not None and args.seed != plan.seed:
        plan = lhs.plan_from_dict({**lhs.plan_to_dict(plan), "seed": args.seed})

    matrix = lhs.lhs_sample(plan)
    suffix = ".jsonl.gz" if args.gzip else ".jsonl"
    tasks = []
    errors = []
    from bvrsim.scenario import config_to_dict

    for i in range(plan.n):
        try:
            config = lhs.scenario_from_row(plan, matrix[i], f"s{i:05d}")
        except ValueError as exc:
            errors.append({"index": i, "error": str(exc)})
            continue
        tasks.append(
            (i, config_to_dict(config), seed + i, str(out_dir / f"s{i:05d}{suffix}"))
        )

    t0 = time.time()
    results = {}
    if args.workers > 1:
        import multiprocessing

        with multiprocessing.Pool(args.workers) as pool:
            for index, ticks in pool.imap_unordered(_run_one, tasks):
                results[index] = ticks
    else:
        for task in tasks:
            try:
                index, ticks = _run_one(task)
                results[index] = ticks
            except Exception as exc:  # keep the batch going
                errors.append({"index": task[0], "error": str(exc)})
    elapsed = time.time() - t0

    runs = []
    for i, _doc, run_seed, out_path in tasks:
        if i not in results:
            continue
        path = Path(out_path)
        runs.append(
            {
                "scenario_id": f"s{i:05d}",
                "file": path.name,
                "seed": run_seed,
                "ticks": results[i],
                "sha256": _sha256(path),
            }
        )
    manifest = {
        "version": __version__,
        "seed": seed,
        "plan": lhs.plan_to_dict(plan),
        "runs": runs,
        "errors": errors,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(
        f"simulated {len(runs)}/{plan.n} scenarios in {elapsed:.1f}s "
        f"-> {out_dir}/manifest.json"
    )
    if errors:
        for e in errors[:10]:
            print(f"  run {e['index']}: {e['error']}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


# --- dataset -------------------------------------------------------------


def cmd_dataset(args) -> int:
    log_dir = Path(args.logs)
    manifest_path = log_dir / "manifest.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text())
        files = [log_dir / r["file"] for r in manifest["runs"]]
    else:
        files = sorted(log_dir.glob("*.jsonl*"))
    if not files:
        return _fail(f"no event logs found under {log_dir}")

    records = []
    parse_errors = []
    for path in files:
        try:
            log = read_log(path)
            records.extend(dataset.extract_engagements(log))
        except (ValueError, OSError) as exc:
            parse_errors.append(f"{path.name}: {exc}")
    total = len(records)
    if args.first_episode_only:
        records = [r for r in records if r.ordinal == 1]
    if not args.include_truncated:
        records = [r for r in records if r.terminal_kind != dataset.TERMINAL_TRUNCATED]

    stats_path = Path(args.out).with_suffix(Path(args.out).suffix + ".stats.json")
    if not records:
        stats_path.write_text(
            json.dumps({"version": __version__, "count": 0}, indent=2) + "\n"
        )
        print("no engagements extracted (count 0)", file=sys.stderr)
        return EXIT_PARTIAL

    matrix = dataset.encode(records)
    dataset.write_csv(matrix, args.out)
    stats = {
        "version": __version__,
        **dataset.target_stats(matrix.y),
        "extracted_total": total,
        "first_episode_only": args.first_episode_only,
        "include_truncated": args.include_truncated,
        "by_terminal": {
            kind: sum(1 for r in records if r.terminal_kind == kind)
            for kind in (
                dataset.TERMINAL_BREAK,
                dataset.TERMINAL_ABORT,
                dataset.TERMINAL_TRUNCATED,
            )
        },
        "columns": list(matrix.columns),
    }
    stats_path.write_text(json.dumps(stats, indent=2) + "\n")
    print(
        f"wrote {len(records)} engagements x {len(matrix.columns)} columns "
        f"to {args.out} (stats: {stats_path.name})"
    )
    if parse_errors:
        for e in parse_errors[:10]:
            print(f"  {e}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


# --- train ----------------------------------------------------------------


def cmd_train(args) -> int:
    try:
        matrix = dataset.read_csv(args.csv)
    except (OSError, ValueError) as exc:
        return _fail(f"cannot read dataset: {exc}")
    try:
        grid = _load_grid(args.grid)
        train_m, test_m = dataset.split(matrix, ratio=0.8, seed=args.seed)
        best, report_rows = grid_search(
            train_m, grid, k=args.k, seed=args.seed, budget=args.budget
        )
        model = fit(train_m, best, seed=args.seed)
    except (ValueError, OSError) as exc:
        return _fail(str(exc))

    pred = np.clip(model.predict(test_m.X), 0.0, 1.0)
    baseline = np.full_like(test_m.y, float(np.mean(train_m.y)))
    holdout = {
        "rmse": rmse(test_m.y, pred),
        "r2": r2(test_m.y, pred),
        "baseline_rmse": rmse(test_m.y, baseline),
        "n_test_rows": int(len(test_m.y)),
    }
    best_cv = min(report_rows, key=lambda r: r["rmse_mean"])
    model.metadata.update(
        {
            "version": __version__,
            "hyperparams": best.__dict__,
            "cv": {
                "rmse_mean": best_cv["rmse_mean"],
                "rmse_std": best_cv["rmse_std"],
                "r2_mean": best_cv["r2_mean"],
                "r2_std": best_cv["r2_std"],
                "k": args.k,
            },
            "holdout": holdout,
            "trained_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
            if args.stamp
            else None,
        }
    )
    save_model(model, args.model_out)
    report = {
        "version": __version__,
        "seed": args.seed,
        "k": args.k,
        "budget": args.budget,
        "grid": grid,
        "n_grid_configs": int(np.prod([len(v) for v in grid.values()])),
        "evaluated": len(report_rows),
        "best_hyperparams": best.__dict__,
        "holdout": holdout,
        "configurations": report_rows,
    }
    report_path = args.report_out or str(Path(args.model_out).with_suffix(".report.json"))
    Path(report_path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(
        f"best config: {best.__dict__}\n"
        f"holdout rmse={holdout['rmse']:.4f} r2={holdout['r2']:.4f} "
        f"(baseline rmse={holdout['baseline_rmse']:.4f})\n"
        f"model -> {args.model_out}, report -> {report_path}"
    )
    return EXIT_OK


# --- predict ----------------------------------------------------------------


def _rows_from_json(doc, model_schema) -> np.ndarray:
    states = doc if isinstance(doc, list) else [doc]
    rows = []
    for state in states:
        missing = [k for k in dataset.RAW_FEATURE_NAMES if k not in state]
        if missing:
            raise ValueError(f"state missing fields: {', '.join(missing)}")
        fv = dataset.FeatureVector(**{k: state[k] for k in dataset.RAW_FEATURE_NAMES})
        rows.append(dataset.encode_features(fv))
    X = np.array(rows, dtype=np.float64)
    if list(model_schema) != list(dataset.ENCODED_COLUMNS):
        raise ValueError("model schema does not match this tool's encoder")
    return X


def cmd_predict(args) -> int:
    try:
        model = load_model(args.model)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"cannot load model: {exc}")
    try:
        if args.csv:
            matrix = dataset.read_csv(args.csv)
            if tuple(matrix.columns) != tuple(model.schema):
                return _fail("csv schema does not match the model schema")
            X = matrix.X
        else:
            text = (
                sys.stdin.read() if args.json == "-" else Path(args.json).read_text()
            )
            doc = json.loads(text)
            X = _rows_from_json(doc, model.schema)
    except json.JSONDecodeError as exc:
        return _fail(f"malformed JSON state: {exc}")
    except (OSError, ValueError, TypeError) as exc:
        return _fail(str(exc))

    pred = np.clip(model.predict(X), 0.0, 1.0)
    if args.format == "json":
        print(json.dumps([float(v) for v in pred]))
    else:
        print("prediction")
        for v in pred:
            print(repr(float(v)))
    return EXIT_OK


# --- serve -----------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from bvrsim.service import create_app

    try:
        app = create_app(model_path=args.model, cors_origin=args.cors, ui_dir=args.ui_dir)
    except (OSError, ValueError) as exc:
        return _fail(f"cannot start service: {exc}")
    host, _, port = args.addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvrsim", description="BVR engagement simulation and decision support"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="write a sampling plan file")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--base", help="start from an existing plan instead of the default")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="run a batch of scenarios from a plan")
    p.add_argument("--plan", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the plan seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--gzip", action="store_true", help="compress event logs")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dataset", help="extract the engagement dataset from logs")
    p.add_argument("--logs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--first-episode-only", action="store_true")
    p.add_argument("--include-truncated", action="store_true")
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("train", help="grid-search, cross-validate, and fit")
    p.add_argument("--csv", required=True)
    p.add_argument("--model-out", required=True)
    p.add_argument("--report-out")
    p.add_argument(
        "--grid",
        default="default",
        help="grid file path, or the packaged 'default' / 'quick' grids",
    )
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--stamp", action="store_true", help="embed a wall-clock training timestamp"
    )
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score rows or a JSON state")
    p.add_argument("--model", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--csv")
    src.add_argument("--json", help="path to a JSON state, or - for stdin")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("serve", help="serve the inference API")
    p.add_argument("--model", required=True)
    p.add_argument(
        "--addr",
        default=os.environ.get("SERVICE_ADDR", "127.0.0.1:8000"),
        help="host:port (defaults to SERVICE_ADDR or 127.0.0.1:8000)",
    )
    p.add_argument("--cors", default=None, help="allowed CORS origin for the UI")
    p.add_argument("--ui-dir", default=None, help="static directory to serve at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
