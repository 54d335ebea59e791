"""Versioned JSON serialization for trained models.

Floats are written with full repr precision, so a serialized model predicts
bit-identically after a round-trip.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..dataset.types import TargetKind
from .forest import ForestModel, ForestParams
from .gbm import BoostedTree, GBMModel, GBMParams
from .knn import KNNModel, KNNParams
from .tree import TreeModel, TreeParams

FORMAT = "mofit-model"
VERSION = 1


def _target_to_doc(target: TargetKind | None) -> dict | None:
    if target is None:
        return None
    return {"kind": target.kind, "labels": list(target.labels), "units": target.units}


def _target_from_doc(doc: dict | None) -> TargetKind | None:
    if doc is None:
        return None
    return TargetKind(kind=doc["kind"], labels=tuple(doc["labels"]), units=doc["units"])


def _tree_payload(model: TreeModel) -> dict:
    payload = {
        "feature": model.feature.tolist(),
        "threshold": model.threshold.tolist(),
        "left": model.left.tolist(),
        "right": model.right.tolist(),
    }
    if model.value is not None:
        payload["value"] = model.value.tolist()
    if model.probs is not None:
        payload["probs"] = model.probs.tolist()
    return payload


def _tree_from_payload(payload: dict, task: str, n_features: int,
                       params: TreeParams, target: TargetKind | None) -> TreeModel:
    return TreeModel(
        task=task,
        n_features=n_features,
        params=params,
        feature=np.asarray(payload["feature"], dtype=np.int64),
        threshold=np.asarray(payload["threshold"], dtype=np.float64),
        left=np.asarray(payload["left"], dtype=np.int64),
        right=np.asarray(payload["right"], dtype=np.int64),
        value=np.asarray(payload["value"], dtype=np.float64) if "value" in payload else None,
        probs=np.asarray(payload["probs"], dtype=np.float64) if "probs" in payload else None,
        target=target,
    )


def model_to_doc(model) -> dict:
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "task": model.task,
        "n_features": model.n_features,
        "target": _target_to_doc(model.target),
    }
    if isinstance(model, TreeModel):
        doc["kind"] = "tree"
        doc["params"] = asdict(model.params)
        doc["payload"] = _tree_payload(model)
    elif isinstance(model, ForestModel):
        doc["kind"] = "forest"
        doc["params"] = asdict(model.params)
        doc["payload"] = {"trees": [_tree_payload(t) for t in model.trees]}
    elif isinstance(model, GBMModel):
        doc["kind"] = "gbm"
        doc["params"] = asdict(model.params)
        doc["payload"] = {
            "base_score": model.base_score.tolist(),
            "rounds": [
                [
                    {
                        "feature": t.feature.tolist(),
                        "threshold": t.threshold.tolist(),
                        "left": t.left.tolist(),
                        "right": t.right.tolist(),
                        "value": t.value.tolist(),
                    }
                    for t in rnd
                ]
                for rnd in model.rounds
            ],
        }
    elif isinstance(model, KNNModel):
        doc["kind"] = "knn"
        doc["params"] = asdict(model.params)
        doc["payload"] = {
            "mean": model.mean.tolist(),
            "inv_std": model.inv_std.tolist(),
            "T": model.T.tolist(),
            "y": model.y.tolist(),
        }
    else:
        raise TypeError(f"unknown model type {type(model)!r}")
    return doc


def model_from_doc(doc: dict):
    if doc.get("format") != FORMAT:
        raise ValueError("not a model document")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported model document version {doc.get('version')}")
    kind = doc["kind"]
    task = doc["task"]
    n_features = doc["n_features"]
    target = _target_from_doc(doc.get("target"))
    params = dict(doc["params"])
    if kind == "tree":
        return _tree_from_payload(doc["payload"], task, n_features,
                                  TreeParams(**params), target)
    if kind == "forest":
        fp = ForestParams(tree=TreeParams(**params.pop("tree")), **params)
        trees = [_tree_from_payload(p, task, n_features, fp.tree, target)
                 for p in doc["payload"]["trees"]]
        return ForestModel(task=task, n_features=n_features, params=fp,
                           trees=trees, target=target)
    if kind == "gbm":
        gp = GBMParams(**params)
        rounds = [
            [
                BoostedTree(
                    feature=np.asarray(t["feature"], dtype=np.int64),
                    threshold=np.asarray(t["threshold"], dtype=np.float64),
                    left=np.asarray(t["left"], dtype=np.int64),
                    right=np.asarray(t["right"], dtype=np.int64),
                    value=np.asarray(t["value"], dtype=np.float64),
                )
                for t in rnd
            ]
            for rnd in doc["payload"]["rounds"]
        ]
        return GBMModel(task=task, n_features=n_features, params=gp,
                        base_score=np.asarray(doc["payload"]["base_score"]),
                        rounds=rounds, target=target)
    if kind == "knn":
        kp = KNNParams(**params)
        payload = doc["payload"]
        y = np.asarray(payload["y"])
        if task == "classification":
            y = y.astype(np.int64)
        return KNNModel(task=task, n_features=n_features, params=kp,
                        mean=np.asarray(payload["mean"], dtype=np.float64),
                        inv_std=np.asarray(payload["inv_std"], dtype=np.float64),
                        T=np.ascontiguousarray(payload["T"], dtype=np.float64),
                        y=y, target=target)
    raise ValueError(f"unknown model kind {kind!r}")


def dumps_model(model) -> str:
    return json.dumps(model_to_doc(model), separators=(",", ":"))


def loads_model(text: str):
    return model_from_doc(json.loads(text))


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model))


def load_model(path: str | Path):
    return loads_model(Path(path).read_text())
