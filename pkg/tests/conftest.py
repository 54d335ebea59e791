"""Shared fixtures: generated source CSVs, encoded tasks, a stub service."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from mofit import datagen
from mofit import learners as L
from mofit.dataset import (load_csv, prepare_bodyfat,
                           prepare_obesity_classification,
                           prepare_weight_regression, split)
from mofit.dataset.types import EncodedDataset, TargetKind


@pytest.fixture(scope="session")
def obesity_csv_text() -> str:
    return datagen.obesity_csv()


@pytest.fixture(scope="session")
def bodyfat_csv_text() -> str:
    return datagen.bodyfat_csv()


@pytest.fixture(scope="session")
def obesity_table(obesity_csv_text):
    return load_csv(obesity_csv_text, "obesity")


@pytest.fixture(scope="session")
def bodyfat_table(bodyfat_csv_text):
    return load_csv(bodyfat_csv_text, "bodyfat")


@pytest.fixture(scope="session")
def obesity_cls(obesity_table):
    return prepare_obesity_classification(obesity_table)


@pytest.fixture(scope="session")
def weight_reg(obesity_table):
    return prepare_weight_regression(obesity_table)


@pytest.fixture(scope="session")
def bodyfat_reg(bodyfat_table):
    return prepare_bodyfat(bodyfat_table)


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("csv")
    datagen.write_datasets(out)
    return out


def small_classification(n=240, n_features=5, n_classes=3, seed=0) -> EncodedDataset:
    rng = np.random.default_rng(seed)
    X = rng.random((n, n_features))
    y = (X[:, 0] * 2 + (X[:, 1] > 0.5)).astype(np.int64) % n_classes
    labels = tuple(f"c{i}" for i in range(n_classes))
    return EncodedDataset(X=X, y=y,
                          feature_names=[f"f{i}" for i in range(n_features)],
                          target_kind=TargetKind(kind="classes", labels=labels))


def small_regression(n=240, n_features=5, seed=0) -> EncodedDataset:
    rng = np.random.default_rng(seed)
    X = rng.random((n, n_features))
    y = 3.0 * X[:, 0] + X[:, 1] ** 2 + 0.1 * rng.standard_normal(n) + 5.0
    return EncodedDataset(X=X, y=y,
                          feature_names=[f"f{i}" for i in range(n_features)],
                          target_kind=TargetKind(kind="real", units="kg"))


@pytest.fixture
def cls_small():
    return small_classification()


@pytest.fixture
def reg_small():
    return small_regression()


# ---------------------------------------------------------------------------
# stub bundle: tiny real models for the two obesity tasks plus a constant
# body-fat model, fast enough for service unit tests
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def stub_bundle(tmp_path_factory, obesity_cls, weight_reg, bodyfat_reg) -> Path:
    import hashlib

    from mofit.dataset.schema import (bodyfat_schema,
                                      obesity_classification_schema,
                                      weight_regression_schema)
    from mofit.learners import model_to_doc

    out = tmp_path_factory.mktemp("bundle")
    sub_cls = split(obesity_cls, 0.2, seed=3, stratified=True).train
    sub_reg = split(weight_reg, 0.2, seed=3).train
    models = {
        "obesity_level": (
            L.fit_forest(sub_cls, L.random_forest_params(n_trees=30, seed=1)),
            obesity_classification_schema(), "random_forest"),
        "body_weight": (
            L.fit_forest(sub_reg, L.extra_trees_params(n_trees=30, max_features="all", seed=1)),
            weight_regression_schema(), "extra_trees"),
        "body_fat": (
            L.fit_gbm(bodyfat_reg, L.GBMParams(n_rounds=60, learning_rate=0.1,
                                               lam=1.0, max_depth=3, seed=1)),
            bodyfat_schema(), "gbm"),
    }
    entries = {}
    for task_id, (model, schema, algo) in models.items():
        model_file = f"model__{task_id}.json"
        schema_file = f"schema__{task_id}.json"
        (out / model_file).write_text(json.dumps(model_to_doc(model),
                                                 separators=(",", ":")))
        (out / schema_file).write_text(json.dumps(schema.to_doc(), indent=1))
        entries[task_id] = {"algorithm": algo, "sampler": "stub",
                            "best_params": {}, "cv_objective": None,
                            "model_file": model_file, "schema_file": schema_file}
    digest = hashlib.sha256()
    for task_id in sorted(entries):
        for key in ("model_file", "schema_file"):
            digest.update(entries[task_id][key].encode())
            digest.update((out / entries[task_id][key]).read_bytes())
    (out / "manifest.json").write_text(json.dumps({
        "format": "mofit-bundle", "version": 1, "master_seed": 0,
        "content_hash": digest.hexdigest(), "models": entries,
    }, indent=1, sort_keys=True))
    return out


@pytest.fixture()
def service_client(stub_bundle, tmp_path):
    from fastapi.testclient import TestClient

    from mofit.service import make_app
    app = make_app(stub_bundle, tmp_path / "svc")
    with TestClient(app) as client:
        yield client


def valid_payload_for(client, task_id: str) -> dict:
    """Build an in-range payload from the served schema (no hardcoded lists)."""
    desc = client.get("/api-description").json()
    payload = {}
    for f in desc["predictors"][task_id]["fields"]:
        if f["encoding"] == "numeric":
            payload[f["name"]] = round((f["lo"] + f["hi"]) / 2, 3)
        else:
            payload[f["name"]] = f["categories"][0]
    return payload
