# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled tree-building and prediction kernel.

Same interface and numerics as _kernel_py: per-node running sums scan
rows in ascending feature order, gains use the identical expression, and
ties keep the lowest feature then the lowest threshold, so the two
backends build bit-identical trees.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, isnan

cnp.import_array()

BACKEND_NAME = "compiled"


def build_tree(
    cnp.ndarray[cnp.float64_t, ndim=2] X,
    cnp.ndarray[cnp.int32_t, ndim=2] order,
    cnp.ndarray[cnp.float64_t, ndim=1] g,
    cnp.ndarray[cnp.float64_t, ndim=1] h,
    cnp.ndarray[cnp.int32_t, ndim=1] feats,
    int max_depth,
    double min_child_weight,
    double reg_lambda,
    double reg_alpha,
    double gamma,
):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t cap = 2 * n + 8
    cdef cnp.ndarray[cnp.int32_t, ndim=1] feature = np.full(cap, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] threshold = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] left = np.full(cap, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] right = np.full(cap, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] default_left = np.zeros(cap, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] weight = np.zeros(cap, dtype=np.float64)

    cdef cnp.ndarray[cnp.float64_t, ndim=1] node_g = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] node_h = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] node_of_row = np.zeros(n, dtype=np.int32)

    # per-level scratch, indexed by node id
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] active = np.zeros(cap, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] run_g = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] run_h = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] run_cnt = np.zeros(cap, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] prev_val = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] best_gain = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] best_feat = np.zeros(cap, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] best_thr = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] best_gl = np.zeros(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] best_hl = np.zeros(cap, dtype=np.float64)

    cdef double gsum = 0.0, hsum = 0.0
    cdef Py_ssize_t i, r, fi
    cdef int f, nid, depth, lc, rc
    cdef int n_nodes = 1, level_start = 0, level_end = 1, n_active, n_split
    cdef double v, gl, hl, gr, hr, gain, parent, w, mag

    for i in range(n):
        gsum += g[i]
        hsum += h[i]
    node_g[0] = gsum
    node_h[0] = hsum

    for depth in range(max_depth):
        n_active = 0
        for nid in range(level_start, level_end):
            if node_h[nid] >= 2.0 * min_child_weight:
                active[nid] = 1
                best_gain[nid] = 0.0
                best_feat[nid] = -1
                n_active += 1
            else:
                active[nid] = 0
        if n_active == 0:
            break

        for fi in range(feats.shape[0]):
            f = feats[fi]
            for nid in range(level_start, level_end):
                if active[nid]:
                    run_g[nid] = 0.0
                    run_h[nid] = 0.0
                    run_cnt[nid] = 0
            for i in range(n):
                r = order[i, f]
                nid = node_of_row[r]
                if nid < level_start or not active[nid]:
                    continue
                v = X[r, f]
                if run_cnt[nid] > 0 and v > prev_val[nid]:
                    gl = run_g[nid]
                    hl = run_h[nid]
                    gr = node_g[nid] - gl
                    hr = node_h[nid] - hl
                    if hl >= min_child_weight and hr >= min_child_weight:
                        parent = node_g[nid] * node_g[nid] / (node_h[nid] + reg_lambda)
                        gain = 0.5 * (
                            gl * gl / (hl + reg_lambda)
                            + gr * gr / (hr + reg_lambda)
                            - parent
                        ) - gamma
                        if gain > best_gain[nid]:
                            best_gain[nid] = gain
                            best_feat[nid] = f
                            best_thr[nid] = 0.5 * (prev_val[nid] + v)
                            best_gl[nid] = gl
                            best_hl[nid] = hl
                run_g[nid] += g[r]
                run_h[nid] += h[r]
                run_cnt[nid] += 1
                prev_val[nid] = v

        n_split = 0
        for nid in range(level_start, level_end):
            if not active[nid] or best_feat[nid] < 0 or not best_gain[nid] > 0.0:
                active[nid] = 0
                continue
            lc = n_nodes
            rc = n_nodes + 1
            n_nodes += 2
            feature[nid] = best_feat[nid]
            threshold[nid] = best_thr[nid]
            left[nid] = lc
            right[nid] = rc
            hl = best_hl[nid]
            default_left[nid] = 1 if hl >= node_h[nid] - hl else 0
            node_g[lc] = best_gl[nid]
            node_h[lc] = hl
            node_g[rc] = node_g[nid] - best_gl[nid]
            node_h[rc] = node_h[nid] - hl
            n_split += 1
        if n_split == 0:
            break

        for r in range(n):
            nid = node_of_row[r]
            if nid >= level_start and feature[nid] >= 0:
                v = X[r, feature[nid]]
                if isnan(v):
                    node_of_row[r] = left[nid] if default_left[nid] else right[nid]
                else:
                    node_of_row[r] = left[nid] if v < threshold[nid] else right[nid]

        level_start = level_end
        level_end = n_nodes

    for nid in range(n_nodes):
        if feature[nid] == -1:
            gsum = node_g[nid]
            mag = fabs(gsum) - reg_alpha
            if mag < 0.0:
                mag = 0.0
            if gsum > 0.0:
                w = -mag / (node_h[nid] + reg_lambda)
            elif gsum < 0.0:
                w = mag / (node_h[nid] + reg_lambda)
            else:
                w = 0.0
            weight[nid] = w

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        default_left[:n_nodes].copy(),
        weight[:n_nodes].copy(),
        node_of_row,
    )


def predict_forest(
    cnp.ndarray[cnp.int32_t, ndim=1] feature,
    cnp.ndarray[cnp.float64_t, ndim=1] threshold,
    cnp.ndarray[cnp.int32_t, ndim=1] left,
    cnp.ndarray[cnp.int32_t, ndim=1] right,
    cnp.ndarray[cnp.uint8_t, ndim=1] default_left,
    cnp.ndarray[cnp.float64_t, ndim=1] weight,
    cnp.ndarray[cnp.int64_t, ndim=1] offsets,
    cnp.ndarray[cnp.float64_t, ndim=2] X,
    double base_score,
    double learning_rate,
):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t n_trees = offsets.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.full(n, base_score, dtype=np.float64)
    cdef Py_ssize_t i, t
    cdef int nid
    cdef double v
    for i in range(n):
        for t in range(n_trees):
            nid = <int> offsets[t]
            while feature[nid] >= 0:
                v = X[i, feature[nid]]
                if isnan(v):
                    nid = left[nid] if default_left[nid] else right[nid]
                else:
                    nid = left[nid] if v < threshold[nid] else right[nid]
            # scale per tree, matching the fallback's accumulation order
            out[i] += learning_rate * weight[nid]
    return out
