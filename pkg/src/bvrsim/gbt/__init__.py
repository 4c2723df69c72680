"""Gradient-boosted regression trees with a compiled hot kernel.

The tree-building and forest-traversal inner loops live in a Cython
extension; a numpy implementation of the same interface serves as the
fallback when the extension was not built.  Set ``BVRSIM_PURE_PYTHON=1``
to force the fallback.  ``backend_name()`` reports which one is active;
both yield bit-identical models (benchmarks/bench_backends.py compares
speed and output).
"""

from __future__ import annotations

import os

from bvrsim.gbt import _kernel_py

try:
    from bvrsim.gbt import _kernel as _compiled
except ImportError:
    _compiled = None

_FORCED_PY = os.environ.get("BVRSIM_PURE_PYTHON", "") == "1"


def active_kernel():
    if _compiled is not None and not _FORCED_PY:
        return _compiled
    return _kernel_py


def backend_name() -> str:
    return active_kernel().BACKEND_NAME


from bvrsim.gbt.model import (  # noqa: E402
    GbtModel,
    HyperParams,
    Tree,
    load_model,
    save_model,
)
from bvrsim.gbt.train import (  # noqa: E402
    CvResult,
    fit,
    grid_search,
    kfold_cv,
    r2,
    rmse,
)

__all__ = [
    "CvResult",
    "GbtModel",
    "HyperParams",
    "Tree",
    "active_kernel",
    "backend_name",
    "fit",
    "grid_search",
    "kfold_cv",
    "load_model",
    "r2",
    "rmse",
    "save_model",
]
