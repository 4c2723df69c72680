"""Pure-numpy tree-building and prediction kernel.

Interface and numerics mirror the compiled kernel exactly: candidate
splits scan node rows in ascending feature order (stable over ties), per
node running sums accumulate sequentially, and ties in gain keep the
lowest feature index and then the lowest threshold.  Both kernels produce
bit-identical trees on the same inputs.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def build_tree(
    X: np.ndarray,
    order: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    feats: np.ndarray,
    max_depth: int,
    min_child_weight: float,
    reg_lambda: float,
    reg_alpha: float,
    gamma: float,
):
    """Grow one depth-limited tree by exact greedy search.

    Returns (feature, threshold, left, right, default_left, weight,
    leaf_of_row); ``feature`` is -1 at leaves.  ``order`` holds the
    per-feature stable argsort of X's columns.
    """
    n = X.shape[0]
    cap = 2 * n + 8
    feature = np.full(cap, -1, dtype=np.int32)
    threshold = np.zeros(cap, dtype=np.float64)
    left = np.full(cap, -1, dtype=np.int32)
    right = np.full(cap, -1, dtype=np.int32)
    default_left = np.zeros(cap, dtype=np.uint8)
    weight = np.zeros(cap, dtype=np.float64)

    node_g = np.zeros(cap, dtype=np.float64)
    node_h = np.zeros(cap, dtype=np.float64)
    # sequential accumulation keeps the totals bit-identical to the
    # compiled kernel's running sums (np.sum would pair up terms)
    node_g[0] = np.cumsum(g)[-1] if n else 0.0
    node_h[0] = np.cumsum(h)[-1] if n else 0.0
    node_of_row = np.zeros(n, dtype=np.int32)
    n_nodes = 1
    level = [0]

    for depth in range(max_depth):
        active = [
            nid for nid in level if node_h[nid] >= 2.0 * min_child_weight
        ]
        if not active:
            break
        local = {nid: i for i, nid in enumerate(active)}
        m = len(active)
        best_gain = np.zeros(m)
        best_feat = np.full(m, -1, dtype=np.int64)
        best_thr = np.zeros(m)
        best_gl = np.zeros(m)
        best_hl = np.zeros(m)

        for f in feats:
            col_order = order[:, f]
            nid_sorted = node_of_row[col_order]
            # group rows by node, keeping the feature ordering inside groups
            grouped = col_order[np.argsort(nid_sorted, kind="stable")]
            nids_grouped = np.sort(nid_sorted, kind="stable")
            for nid in active:
                lo = np.searchsorted(nids_grouped, nid, side="left")
                hi = np.searchsorted(nids_grouped, nid, side="right")
                rows = grouped[lo:hi]
                if len(rows) < 2:
                    continue
                v = X[rows, f]
                gl = np.cumsum(g[rows])[:-1]
                hl = np.cumsum(h[rows])[:-1]
                gr = node_g[nid] - gl
                hr = node_h[nid] - hl
                valid = (
                    (v[1:] > v[:-1])
                    & (hl >= min_child_weight)
                    & (hr >= min_child_weight)
                )
                if not valid.any():
                    continue
                parent = node_g[nid] ** 2 / (node_h[nid] + reg_lambda)
                gain = (
                    0.5
                    * (
                        gl * gl / (hl + reg_lambda)
                        + gr * gr / (hr + reg_lambda)
                        - parent
                    )
                    - gamma
                )
                gain = np.where(valid, gain, -np.inf)
                k = int(np.argmax(gain))
                li = local[nid]
                if gain[k] > best_gain[li]:
                    best_gain[li] = gain[k]
                    best_feat[li] = f
                    best_thr[li] = 0.5 * (v[k] + v[k + 1])
                    best_gl[li] = gl[k]
                    best_hl[li] = hl[k]

        next_level = []
        split_now = {}
        for nid in active:
            li = local[nid]
            if best_feat[li] < 0 or not best_gain[li] > 0.0:
                continue
            lc, rc = n_nodes, n_nodes + 1
            n_nodes += 2
            feature[nid] = best_feat[li]
            threshold[nid] = best_thr[li]
            left[nid] = lc
            right[nid] = rc
            hl = best_hl[li]
            default_left[nid] = 1 if hl >= node_h[nid] - hl else 0
            node_g[lc] = best_gl[li]
            node_h[lc] = hl
            node_g[rc] = node_g[nid] - best_gl[li]
            node_h[rc] = node_h[nid] - hl
            split_now[nid] = (int(best_feat[li]), best_thr[li], lc, rc)
            next_level.extend((lc, rc))

        if not split_now:
            break
        for nid, (f, thr, lc, rc) in split_now.items():
            mask = node_of_row == nid
            v = X[mask, f]
            go_left = np.where(np.isnan(v), default_left[nid] == 1, v < thr)
            node_of_row[mask] = np.where(go_left, lc, rc)
        level = next_level

    for nid in range(n_nodes):
        if feature[nid] == -1:
            gsum = node_g[nid]
            mag = max(abs(gsum) - reg_alpha, 0.0)
            if gsum > 0.0:
                weight[nid] = -mag / (node_h[nid] + reg_lambda)
            elif gsum < 0.0:
                weight[nid] = mag / (node_h[nid] + reg_lambda)
            else:
                weight[nid] = 0.0

    s = slice(0, n_nodes)
    return (
        feature[s].copy(),
        threshold[s].copy(),
        left[s].copy(),
        right[s].copy(),
        default_left[s].copy(),
        weight[s].copy(),
        node_of_row,
    )


def predict_forest(
    feature: np.ndarray,
    threshold: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
    default_left: np.ndarray,
    weight: np.ndarray,
    offsets: np.ndarray,
    X: np.ndarray,
    base_score: float,
    learning_rate: float,
) -> np.ndarray:
    """Sum the forest over rows, level-synchronously per tree."""
    n = X.shape[0]
    out = np.full(n, base_score, dtype=np.float64)
    rows = np.arange(n)
    for t in range(len(offsets) - 1):
        cur = np.full(n, offsets[t], dtype=np.int64)
        while True:
            feat = feature[cur]
            leafy = feat < 0
            if leafy.all():
                break
            live = ~leafy
            idx = cur[live]
            v = X[rows[live], feat[live]]
            thr = threshold[idx]
            go_left = np.where(np.isnan(v), default_left[idx] == 1, v < thr)
            cur[live] = np.where(go_left, left[idx], right[idx])
        out += learning_rate * weight[cur]
    return out
