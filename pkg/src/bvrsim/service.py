"""HTTP inference facade over a trained model.

Endpoints (JSON over HTTP):

    POST /api/v1/predict  raw 17-field engagement state -> clamped index
    POST /api/v1/sweep    evaluate predict over one swept field
    GET  /api/v1/model    model metadata (schema, hyperparams, CV metrics)
    GET  /healthz         liveness probe

The model loads once at startup and is immutable afterwards, so request
handling is safely concurrent.  Validation failures return 400 with
field-level diagnostics; a service without a loaded model answers 503.
"""

from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from bvrsim import __version__, dataset
from bvrsim.gbt import GbtModel, load_model
from bvrsim.scenario import SHOT_PHILOSOPHIES

SWEEPABLE_NUMERIC = tuple(
    name
    for name in dataset.RAW_FEATURE_NAMES
    if name not in ("rwr_warning", "own_shot_phi", "enemy_shot_phi")
)


class PredictRequest(BaseModel):
    """The seventeen raw engagement-state fields, pre-encoding."""

    distance: float = Field(ge=0)
    aspect: float = Field(ge=0, le=180)
    delta_head: float = Field(ge=0, le=180)
    delta_alt: float
    delta_vel: float
    wez_max_o2t: float
    wez_nez_o2t: float
    wez_max_t2o: float
    wez_nez_t2o: float
    vul_thr_bef_shot: float = Field(ge=0, le=1)
    vul_thr_aft_shot: float = Field(ge=0, le=1)
    shot_point: float = Field(ge=0, le=1)
    rwr_warning: bool
    hp_tgt_off: float = Field(ge=0, le=1)
    hp_thr_vul: float = Field(ge=0, le=1)
    own_shot_phi: Literal["MAX_RANGE", "MIDPOINT", "NEZ"]
    enemy_shot_phi: Literal["MAX_RANGE", "MIDPOINT", "NEZ"]

    @field_validator("wez_max_o2t", "wez_nez_o2t", "wez_max_t2o", "wez_nez_t2o")
    @classmethod
    def _wez_sentinel(cls, v: float) -> float:
        if v < 0 and v != -1.0:
            raise ValueError("must be >= 0 or the -1 'unknown' sentinel")
        return v

    def to_feature_vector(self) -> dataset.FeatureVector:
        return dataset.FeatureVector(**self.model_dump())


class SweepRequest(BaseModel):
    base: PredictRequest
    field_name: str = Field(alias="field")
    lo: Optional[float] = None
    hi: Optional[float] = None
    steps: Optional[int] = Field(default=None, ge=2, le=500)
    categories: Optional[list[str]] = None

    model_config = {"populate_by_name": True}


def _predict_clamped(model: GbtModel, fv: dataset.FeatureVector) -> float:
    row = np.array([dataset.encode_features(fv)], dtype=np.float64)
    return float(np.clip(model.predict(row), 0.0, 1.0)[0])


def create_app(
    model_path: Optional[str] = None,
    model: Optional[GbtModel] = None,
    cors_origin: Optional[str] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    if model is None and model_path is not None:
        model = load_model(model_path)
    app = FastAPI(title="bvrsim inference service", version=__version__)
    app.state.model = model
    app.state.model_id = model.model_id() if model is not None else None

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        errors = [
            {"field": ".".join(str(p) for p in e["loc"] if p != "body"), "message": e["msg"]}
            for e in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"errors": errors})

    def require_model() -> GbtModel:
        if app.state.model is None:
            raise HTTPException(status_code=503, detail="no model loaded")
        return app.state.model

    @app.get("/healthz")
    async def healthz():
        return JSONResponse(content="ok")

    @app.post("/api/v1/predict")
    async def predict(req: PredictRequest):
        mdl = require_model()
        index = _predict_clamped(mdl, req.to_feature_vector())
        return {"index": index, "model_id": app.state.model_id}

    @app.post("/api/v1/sweep")
    async def sweep(req: SweepRequest):
        mdl = require_model()
        name = req.field_name
        base = req.base
        results = []
        if name in ("own_shot_phi", "enemy_shot_phi"):
            categories = req.categories or list(SHOT_PHILOSOPHIES)
            unknown = [c for c in categories if c not in SHOT_PHILOSOPHIES]
            if unknown:
                raise HTTPException(
                    status_code=400, detail=f"unknown categories: {unknown}"
                )
            for cat in categories:
                fv = base.model_copy(update={name: cat}).to_feature_vector()
                results.append({"value": cat, "index": _predict_clamped(mdl, fv)})
            return results
        if name not in SWEEPABLE_NUMERIC:
            raise HTTPException(
                status_code=400,
                detail=f"field {name!r} is not sweepable; pick one of "
                f"{list(SWEEPABLE_NUMERIC) + ['own_shot_phi', 'enemy_shot_phi']}",
            )
        if req.lo is None or req.hi is None or req.steps is None:
            raise HTTPException(
                status_code=400, detail="numeric sweep needs lo, hi, and steps"
            )
        if not req.lo < req.hi:
            raise HTTPException(status_code=400, detail="sweep needs lo < hi")
        for value in np.linspace(req.lo, req.hi, req.steps):
            try:
                fv = base.model_copy(update={name: float(value)}).to_feature_vector()
                fv.validate()
            except ValueError as exc:
                raise HTTPException(
                    status_code=400, detail=f"swept value {value}: {exc}"
                ) from exc
            results.append({"value": float(value), "index": _predict_clamped(mdl, fv)})
        return results

    @app.get("/api/v1/model")
    async def model_info():
        mdl = require_model()
        return {
            "model_id": app.state.model_id,
            "schema": list(mdl.schema),
            "base_score": mdl.base_score,
            "learning_rate": mdl.learning_rate,
            "n_trees": len(mdl.trees),
            "hyperparams": mdl.hyperparams.__dict__,
            "metadata": mdl.metadata,
            "trained_at": mdl.metadata.get("trained_at"),
        }

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
