"""Prediction and tracking web service."""

from .app import API_DESCRIPTION_VERSION, build_api_description, create_app, make_app
from .registry import BODYFAT_CLAMP, ModelRegistry, PredictionError
from .store import Store, StoreError, load_food_seed, nutrition_for, plan_totals

__all__ = [
    "create_app", "make_app", "build_api_description", "API_DESCRIPTION_VERSION",
    "ModelRegistry", "PredictionError", "BODYFAT_CLAMP",
    "Store", "StoreError", "load_food_seed", "nutrition_for", "plan_totals",
]
