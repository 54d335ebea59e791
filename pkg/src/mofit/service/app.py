"""HTTP API: predictions, progress tracking, diet plans, scale ingestion."""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from pydantic import BaseModel, Field

from .. import __version__
from ..experiment.config import TASK_BODYFAT, TASK_OBESITY, TASK_WEIGHT
from .registry import ModelRegistry, PredictionError
from .store import Store, StoreError, nutrition_for

API_DESCRIPTION_VERSION = 1

_STATUS = {"invalid": 422, "not_found": 404, "conflict": 409}


class UserProfileIn(BaseModel):
    start_weight_kg: float = Field(gt=0)
    goal_weight_kg: float = Field(gt=0)
    start_date: str
    goal_date: str


class ProgressIn(BaseModel):
    date: str
    actual_weight_kg: float = Field(gt=0)


class PlanEntryIn(BaseModel):
    food_id: str
    grams: float


class PlanIn(BaseModel):
    user_id: str
    entries: list[PlanEntryIn]


class FoodIn(BaseModel):
    food_id: str
    name: str
    kcal_per_100g: float = Field(ge=0)
    protein_g_per_100g: float = Field(ge=0)
    carbs_g_per_100g: float = Field(ge=0)
    fat_g_per_100g: float = Field(ge=0)


class DeviceIn(BaseModel):
    device_id: str


class ReadingIn(BaseModel):
    device_id: str
    grams: float
    timestamp: float


def build_api_description(registry: ModelRegistry) -> dict:
    """The versioned contract the browser client builds its forms from."""
    return {
        "format": "mofit-api",
        "version": API_DESCRIPTION_VERSION,
        "service_version": __version__,
        "bundle_hash": registry.content_hash,
        "predictors": {
            TASK_OBESITY: {
                "path": "/predict/obesity",
                "fields": registry.describe_fields(TASK_OBESITY),
                "output": {"label": "one of 7 obesity levels",
                           "probabilities": "per-label probabilities"},
            },
            TASK_WEIGHT: {
                "path": "/predict/weight",
                "fields": registry.describe_fields(TASK_WEIGHT),
                "output": {"weight_kg": "predicted body weight, kg"},
            },
            TASK_BODYFAT: {
                "path": "/predict/bodyfat",
                "fields": registry.describe_fields(TASK_BODYFAT),
                "output": {"bodyfat_percent": "predicted body fat, percent"},
            },
        },
        "endpoints": [
            "POST /users", "POST /users/{user_id}/progress",
            "GET /users/{user_id}/progress",
            "POST /plans", "GET /plans/{plan_id}", "GET /plans/{plan_id}/export",
            "GET /foods", "POST /foods",
            "POST /scale/devices", "POST /scale/readings",
            "GET /scale/{device_id}/latest",
            "GET /scale/{device_id}/nutrition?food=<food_id>",
            "GET /healthz", "GET /api-description",
        ],
    }


def create_app(store: Store, registry: ModelRegistry) -> FastAPI:
    app = FastAPI(title="MOFit service", version=__version__)
    app.state.store = store
    app.state.registry = registry
    description = build_api_description(registry)

    def _store_call(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except StoreError as exc:
            raise HTTPException(status_code=_STATUS[exc.kind], detail=str(exc))

    def _predict(fn, payload: dict) -> dict:
        try:
            out = fn(payload)
        except PredictionError as exc:
            raise HTTPException(status_code=422, detail={"errors": exc.errors})
        out["bundle_hash"] = registry.content_hash
        return out

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "service_version": __version__,
                "bundle_hash": registry.content_hash}

    @app.get("/api-description")
    def api_description():
        return description

    # -- predictions --------------------------------------------------------

    @app.post("/predict/obesity")
    def predict_obesity(payload: dict):
        return _predict(registry.predict_obesity, payload)

    @app.post("/predict/weight")
    def predict_weight(payload: dict):
        return _predict(registry.predict_weight, payload)

    @app.post("/predict/bodyfat")
    def predict_bodyfat(payload: dict):
        return _predict(registry.predict_bodyfat, payload)

    # -- users & progress -----------------------------------------------------

    @app.post("/users", status_code=201)
    def create_user(profile: UserProfileIn):
        user_id = _store_call(store.create_user, profile.model_dump())
        return {"user_id": user_id}

    @app.post("/users/{user_id}/progress", status_code=201)
    def add_progress(user_id: str, entry: ProgressIn):
        _store_call(store.add_progress, user_id, entry.model_dump())
        return {"ok": True}

    @app.get("/users/{user_id}/progress")
    def progress_series(user_id: str):
        return _store_call(store.progress_series, user_id)

    # -- plans & foods ----------------------------------------------------------

    @app.post("/plans", status_code=201)
    def create_plan(plan: PlanIn):
        return _store_call(store.create_plan, plan.user_id,
                           [e.model_dump() for e in plan.entries])

    @app.get("/plans/{plan_id}")
    def get_plan(plan_id: str):
        return _store_call(store.get_plan, plan_id)

    @app.get("/plans/{plan_id}/export")
    def export_plan(plan_id: str):
        doc = _store_call(store.export_plan, plan_id)
        return Response(
            content=json.dumps(doc, indent=1),
            media_type="application/json",
            headers={"Content-Disposition":
                     f'attachment; filename="diet-plan-{plan_id}.json"'},
        )

    @app.get("/foods")
    def list_foods():
        return {"foods": store.list_foods()}

    @app.post("/foods", status_code=201)
    def add_food(food: FoodIn):
        return _store_call(store.add_food, food.model_dump())

    # -- scale -------------------------------------------------------------------

    @app.post("/scale/devices", status_code=201)
    def register_device(device: DeviceIn):
        _store_call(store.register_device, device.device_id)
        return {"ok": True, "device_id": device.device_id}

    @app.post("/scale/readings", status_code=201)
    def ingest_reading(reading: ReadingIn):
        stored = _store_call(store.add_reading, reading.device_id,
                             reading.grams, reading.timestamp)
        return {"ok": True, "reading": stored}

    @app.get("/scale/{device_id}/latest")
    def latest_reading(device_id: str):
        return _store_call(store.latest_reading, device_id)

    @app.get("/scale/{device_id}/nutrition")
    def scale_nutrition(device_id: str, food: str = Query(...)):
        reading = _store_call(store.latest_reading, device_id)
        item = _store_call(store.get_food, food)
        macros = nutrition_for(reading["grams"], item)
        return {"device_id": device_id, "food_id": food,
                "timestamp": reading["timestamp"], **macros}

    return app


def make_app(bundle_dir: str | Path, data_dir: str | Path) -> FastAPI:
    return create_app(Store(data_dir), ModelRegistry(bundle_dir))
