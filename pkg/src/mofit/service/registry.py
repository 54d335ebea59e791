"""Loaded model bundle behind the prediction endpoints."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..dataset.encode import encode_payload
from ..dataset.schema import FeatureSchema
from ..experiment.bundle import load_bundle_manifest
from ..experiment.config import TASK_BODYFAT, TASK_OBESITY, TASK_WEIGHT
from ..learners import loads_model

BODYFAT_CLAMP = (0.0, 60.0)


class PredictionError(ValueError):
    """Field-level validation failures for a prediction request."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass
class LoadedModel:
    task_id: str
    algorithm: str
    model: object
    schema: FeatureSchema


class ModelRegistry:
    """Three serving models plus their schemas, loaded from one bundle."""

    def __init__(self, bundle_dir: str | Path):
        self.bundle_dir = Path(bundle_dir)
        manifest = load_bundle_manifest(self.bundle_dir)
        self.content_hash: str = manifest["content_hash"]
        self.version: int = manifest["version"]
        self.models: dict[str, LoadedModel] = {}
        for task_id, entry in manifest["models"].items():
            model = loads_model((self.bundle_dir / entry["model_file"]).read_text())
            schema = FeatureSchema.from_doc(
                json.loads((self.bundle_dir / entry["schema_file"]).read_text()))
            if model.n_features != schema.n_features:
                raise ValueError(
                    f"{task_id}: model expects {model.n_features} features, "
                    f"schema provides {schema.n_features}")
            self.models[task_id] = LoadedModel(task_id=task_id,
                                               algorithm=entry["algorithm"],
                                               model=model, schema=schema)
        for task_id in (TASK_OBESITY, TASK_WEIGHT, TASK_BODYFAT):
            if task_id not in self.models:
                raise ValueError(f"bundle is missing the {task_id} model")

    def _encode(self, task_id: str, payload: dict) -> np.ndarray:
        loaded = self.models[task_id]
        vector, errors = encode_payload(loaded.schema, payload)
        if errors:
            raise PredictionError(errors)
        return vector.reshape(1, -1)

    def predict_obesity(self, payload: dict) -> dict:
        loaded = self.models[TASK_OBESITY]
        X = self._encode(TASK_OBESITY, payload)
        probs = loaded.model.predict_proba(X)[0]
        labels = loaded.schema.target.kind.labels
        idx = int(np.argmax(probs))
        return {
            "label": labels[idx],
            "class_index": idx,
            "probabilities": {label: float(p) for label, p in zip(labels, probs)},
        }

    def predict_weight(self, payload: dict) -> dict:
        loaded = self.models[TASK_WEIGHT]
        X = self._encode(TASK_WEIGHT, payload)
        value = float(loaded.model.predict_batch(X)[0])
        return {"weight_kg": value}

    def predict_bodyfat(self, payload: dict) -> dict:
        loaded = self.models[TASK_BODYFAT]
        X = self._encode(TASK_BODYFAT, payload)
        value = float(loaded.model.predict_batch(X)[0])
        lo, hi = BODYFAT_CLAMP
        out = {"bodyfat_percent": value, "clamped": False}
        if not lo < value < hi:
            out["bodyfat_percent"] = min(max(value, lo), hi)
            out["clamped"] = True
            out["warning"] = (
                f"raw prediction {value:.2f} outside physiological range "
                f"({lo}, {hi}); clamped")
        return out

    def describe_fields(self, task_id: str) -> list[dict]:
        schema = self.models[task_id].schema
        return [
            {"name": f.name, "encoding": f.encoding,
             "categories": list(f.categories), "lo": f.lo, "hi": f.hi}
            for f in schema.fields
        ]
