"""Trained-forest artifact: hyperparameters, flat tree storage, JSON format.

Trees live in flat parallel arrays (feature, threshold, children, default
direction, leaf weight) for fast traversal; the JSON artifact stores them
as nested objects so the file is self-describing.  Serialization is
canonical (sorted keys, repr floats), so identical training inputs yield
byte-identical model files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class HyperParams:
    n_estimators: int = 100
    learning_rate: float = 0.1
    max_depth: int = 6
    gamma: float = 0.0  # minimum split gain
    subsample: float = 1.0
    colsample_bytree: float = 1.0
    reg_alpha: float = 0.0  # L1 on leaf weights
    reg_lambda: float = 1.0  # L2 on leaf weights
    min_child_weight: float = 1.0

    def __post_init__(self):
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must lie in (0, 1]")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.gamma < 0 or self.reg_alpha < 0 or self.reg_lambda < 0:
            raise ValueError("gamma, reg_alpha, reg_lambda must be >= 0")
        for name in ("subsample", "colsample_bytree"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1]")
        if self.min_child_weight < 0:
            raise ValueError("min_child_weight must be >= 0")


@dataclass
class Tree:
    """One regression tree in flat array form; feature == -1 marks leaves."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    default_left: np.ndarray
    weight: np.ndarray

    def __len__(self) -> int:
        return len(self.feature)

    def to_nested(self, node: int = 0) -> dict:
        if self.feature[node] < 0:
            return {"weight": float(self.weight[node])}
        return {
            "feature": int(self.feature[node]),
            "threshold": float(self.threshold[node]),
            "default": "left" if self.default_left[node] else "right",
            "left": self.to_nested(int(self.left[node])),
            "right": self.to_nested(int(self.right[node])),
        }

    @classmethod
    def from_nested(cls, doc: dict) -> "Tree":
        feature, threshold, left, right, default_left, weight = [], [], [], [], [], []

        def walk(d: dict) -> int:
            nid = len(feature)
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            default_left.append(0)
            weight.append(0.0)
            if "weight" in d:
                weight[nid] = float(d["weight"])
            else:
                feature[nid] = int(d["feature"])
                threshold[nid] = float(d["threshold"])
                default_left[nid] = 1 if d.get("default", "left") == "left" else 0
                left[nid] = walk(d["left"])
                right[nid] = walk(d["right"])
            return nid

        walk(doc)
        return cls(
            feature=np.array(feature, dtype=np.int32),
            threshold=np.array(threshold, dtype=np.float64),
            left=np.array(left, dtype=np.int32),
            right=np.array(right, dtype=np.int32),
            default_left=np.array(default_left, dtype=np.uint8),
            weight=np.array(weight, dtype=np.float64),
        )


@dataclass
class GbtModel:
    schema: tuple[str, ...]
    base_score: float
    learning_rate: float
    trees: list[Tree]
    hyperparams: HyperParams
    metadata: dict = field(default_factory=dict)
    # flattened-forest cache; the tree list never changes after training
    _flat: Optional[tuple] = field(default=None, repr=False, compare=False)

    def _flat_forest(self):
        """Concatenate tree arrays; child indices become forest-global."""
        if self._flat is not None:
            return self._flat
        offsets = np.zeros(len(self.trees) + 1, dtype=np.int64)
        for i, tree in enumerate(self.trees):
            offsets[i + 1] = offsets[i] + len(tree)
        dtypes = (np.int32, np.float64, np.int32, np.int32, np.uint8, np.float64)
        names = ("feature", "threshold", "left", "right", "default_left", "weight")
        flat = []
        for name, dt in zip(names, dtypes):
            if self.trees:
                parts = []
                for tree, off in zip(self.trees, offsets):
                    arr = getattr(tree, name)
                    if name in ("left", "right"):
                        arr = np.where(arr >= 0, arr + off, arr).astype(np.int32)
                    parts.append(arr)
                flat.append(np.concatenate(parts))
            else:
                flat.append(np.zeros(0, dtype=dt))
        flat.append(offsets)
        self._flat = tuple(flat)
        return self._flat

    def predict(self, X: np.ndarray) -> np.ndarray:
        from bvrsim.gbt import active_kernel

        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.schema):
            raise ValueError(
                f"expected (n, {len(self.schema)}) feature matrix, got {X.shape}"
            )
        flat = self._flat_forest()
        return active_kernel().predict_forest(
            *flat, X, self.base_score, self.learning_rate
        )

    def predict_row(self, row: np.ndarray) -> float:
        return float(self.predict(np.asarray(row, dtype=np.float64)[None, :])[0])

    def to_dict(self) -> dict:
        return {
            "schema": list(self.schema),
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "hyperparams": asdict(self.hyperparams),
            "metadata": self.metadata,
            "trees": [t.to_nested() for t in self.trees],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "GbtModel":
        return cls(
            schema=tuple(doc["schema"]),
            base_score=float(doc["base_score"]),
            learning_rate=float(doc["learning_rate"]),
            trees=[Tree.from_nested(t) for t in doc["trees"]],
            hyperparams=HyperParams(**doc["hyperparams"]),
            metadata=doc.get("metadata", {}),
        )

    def model_id(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]


def save_model(model: GbtModel, path: str | Path) -> None:
    Path(path).write_text(model.to_json() + "\n", encoding="utf-8")


def load_model(path: str | Path) -> GbtModel:
    with open(path, encoding="utf-8") as fh:
        return GbtModel.from_dict(json.load(fh))
