"""Registry bridging algorithm ids, hyperparameter dicts and learner fits."""

from __future__ import annotations

from . import learners as L
from .dataset.types import EncodedDataset

ALGO_DECISION_TREE = "decision_tree"
ALGO_RANDOM_FOREST = "random_forest"
ALGO_EXTRA_TREES = "extra_trees"
ALGO_GBM = "gbm"
ALGO_KNN = "knn"

ALGORITHM_IDS = (ALGO_RANDOM_FOREST, ALGO_DECISION_TREE, ALGO_EXTRA_TREES,
                 ALGO_KNN, ALGO_GBM)

# display names for report tables
ALGORITHM_LABELS = {
    ALGO_RANDOM_FOREST: "RandomForest",
    ALGO_DECISION_TREE: "DecisionTree",
    ALGO_EXTRA_TREES: "ExtraTrees",
    ALGO_KNN: "KNN",
    ALGO_GBM: "XGBoost",
}

GBM_MIN_CHILD_WEIGHT = 1.0


def fit(algorithm_id: str, train: EncodedDataset, params: dict, seed: int):
    """Fit one learner from a sampled hyperparameter dict."""
    p = dict(params)
    if algorithm_id == ALGO_DECISION_TREE:
        return L.fit_tree(train, L.TreeParams(
            max_depth=int(p["max_depth"]),
            min_samples_split=int(p["min_samples_split"]),
            min_samples_leaf=int(p["min_samples_leaf"]),
            max_features="all", split_mode=L.SPLIT_EXACT, seed=seed))
    if algorithm_id == ALGO_RANDOM_FOREST:
        return L.fit_forest(train, L.random_forest_params(
            n_trees=int(p["n_trees"]), max_depth=int(p["max_depth"]),
            min_samples_split=int(p["min_samples_split"]),
            max_features=p["max_features"], seed=seed))
    if algorithm_id == ALGO_EXTRA_TREES:
        return L.fit_forest(train, L.extra_trees_params(
            n_trees=int(p["n_trees"]), max_depth=int(p["max_depth"]),
            min_samples_split=int(p["min_samples_split"]),
            max_features=p["max_features"], seed=seed))
    if algorithm_id == ALGO_GBM:
        return L.fit_gbm(train, L.GBMParams(
            n_rounds=int(p["n_rounds"]), learning_rate=float(p["learning_rate"]),
            lam=float(p["lam"]), max_depth=int(p["max_depth"]),
            min_child_weight=GBM_MIN_CHILD_WEIGHT,
            subsample=float(p["subsample"]), seed=seed))
    if algorithm_id == ALGO_KNN:
        return L.fit_knn(train, L.KNNParams(k=int(p["k"]), weighting=p["weighting"]))
    raise ValueError(f"unknown algorithm {algorithm_id!r}")
