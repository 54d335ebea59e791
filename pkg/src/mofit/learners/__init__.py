"""Five from-scratch learners sharing one prediction surface."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset.types import TASK_CLASSIFICATION
from .forest import (MODE_EXTRA_TREES, MODE_RANDOM_FOREST, ForestModel, ForestParams,
                     extra_trees_params, fit_forest, random_forest_params)
from .gbm import GBMModel, GBMParams, fit_gbm
from .knn import WEIGHT_DISTANCE, WEIGHT_UNIFORM, KNNModel, KNNParams, fit_knn
from .serialize import (dumps_model, load_model, loads_model, model_from_doc,
                        model_to_doc, save_model)
from .tree import SPLIT_EXACT, SPLIT_RANDOM, TreeModel, TreeParams, fit_tree

__all__ = [
    "TreeParams", "TreeModel", "fit_tree", "SPLIT_EXACT", "SPLIT_RANDOM",
    "ForestParams", "ForestModel", "fit_forest",
    "random_forest_params", "extra_trees_params",
    "MODE_RANDOM_FOREST", "MODE_EXTRA_TREES",
    "GBMParams", "GBMModel", "fit_gbm",
    "KNNParams", "KNNModel", "fit_knn", "WEIGHT_UNIFORM", "WEIGHT_DISTANCE",
    "Prediction", "predict",
    "model_to_doc", "model_from_doc", "dumps_model", "loads_model",
    "save_model", "load_model",
]


@dataclass(frozen=True)
class Prediction:
    """Uniform prediction result across all model kinds."""

    task: str
    value: float | None = None
    class_index: int | None = None
    probabilities: tuple[float, ...] | None = None
    label: str | None = None


def predict(model, row) -> Prediction:
    """Predict a single feature vector with any trained model."""
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1 or row.shape[0] != model.n_features:
        raise ValueError(f"expected a vector of {model.n_features} features")
    X = row.reshape(1, -1)
    if model.task == TASK_CLASSIFICATION:
        probs = model.predict_proba(X)[0]
        class_index = int(np.argmax(probs))
        label = None
        if model.target is not None and model.target.labels:
            label = model.target.labels[class_index]
        return Prediction(task=model.task, class_index=class_index,
                          probabilities=tuple(float(p) for p in probs),
                          label=label)
    value = float(model.predict_batch(X)[0])
    return Prediction(task=model.task, value=value)
