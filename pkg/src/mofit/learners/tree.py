"""CART-style decision trees: exact greedy or random-threshold splits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels as K
from ..dataset.types import TASK_CLASSIFICATION, TASK_REGRESSION, EncodedDataset, TargetKind

SPLIT_EXACT = "exact"
SPLIT_RANDOM = "random"


@dataclass(frozen=True)
class TreeParams:
    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    max_features: str | float = "all"  # "all" | "sqrt" | fraction in (0, 1]
    split_mode: str = SPLIT_EXACT
    seed: int = 0

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.min_samples_leaf > self.min_samples_split:
            raise ValueError("min_samples_leaf must not exceed min_samples_split")
        if isinstance(self.max_features, str):
            if self.max_features not in ("all", "sqrt"):
                raise ValueError("max_features must be 'all', 'sqrt' or a fraction")
        elif not 0.0 < float(self.max_features) <= 1.0:
            raise ValueError("max_features fraction must be in (0, 1]")
        if self.split_mode not in (SPLIT_EXACT, SPLIT_RANDOM):
            raise ValueError("split_mode must be 'exact' or 'random'")


def resolve_max_features(max_features: str | float, n_features: int) -> int:
    if max_features == "all":
        return n_features
    if max_features == "sqrt":
        return max(1, int(math.sqrt(n_features)))
    return max(1, min(n_features, int(float(max_features) * n_features)))


@dataclass
class TreeModel:
    task: str
    n_features: int
    params: TreeParams
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray | None = None  # regression leaves
    probs: np.ndarray | None = None  # classification leaves, (n_nodes, K)
    target: TargetKind | None = None

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    @property
    def n_classes(self) -> int:
        return 0 if self.probs is None else int(self.probs.shape[1])

    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        out = 0
        for node in range(self.n_nodes):
            if self.feature[node] >= 0:
                for child in (self.left[node], self.right[node]):
                    depths[child] = depths[node] + 1
                    out = max(out, int(depths[child]))
        return out

    def _check_input(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        if X.shape[1] != self.n_features:
            raise ValueError(
                f"expected {self.n_features} features, got {X.shape[1]}"
            )
        return X

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.task != TASK_CLASSIFICATION:
            raise ValueError("predict_proba requires a classification tree")
        X = self._check_input(X)
        out = np.zeros((X.shape[0], self.n_classes), dtype=np.float64)
        K.tree_add_probs(X, self.feature, self.threshold, self.left, self.right,
                         self.probs, out)
        return out

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = self._check_input(X)
        if self.task == TASK_CLASSIFICATION:
            return self.predict_proba(X).argmax(axis=1)
        out = np.zeros(X.shape[0], dtype=np.float64)
        K.tree_add_values(X, self.feature, self.threshold, self.left, self.right,
                          self.value, out)
        return out

    def validate(self) -> None:
        internal = self.feature >= 0
        if internal.any() and self.feature[internal].max() >= self.n_features:
            raise ValueError("internal node references unknown feature")
        if self.task == TASK_CLASSIFICATION:
            leaf_probs = self.probs[~internal]
            if not np.allclose(leaf_probs.sum(axis=1), 1.0, atol=1e-9):
                raise ValueError("leaf probabilities do not sum to 1")
        if self.params.max_depth is not None and self.depth() > self.params.max_depth:
            raise ValueError("tree exceeds max_depth")


def _grow_from_arrays(XT: np.ndarray, y: np.ndarray, target: TargetKind,
                      params: TreeParams, state: np.ndarray) -> dict:
    """Run the right growth kernel; returns the flat node arrays."""
    n_feat, m = XT.shape
    max_depth = -1 if params.max_depth is None else params.max_depth
    max_feat = resolve_max_features(params.max_features, n_feat)
    mode = K.SPLIT_EXACT if params.split_mode == SPLIT_EXACT else K.SPLIT_RANDOM
    if mode == K.SPLIT_EXACT:
        order = K.presort(XT)
        rows = K.EMPTY_ROWS
    else:
        order = K.EMPTY_ORDER
        rows = np.arange(m, dtype=np.int32)

    if target.is_classification:
        feature, threshold, left, right, probs = K.grow_tree_cls(
            XT, y, target.n_classes, order, rows, mode, max_depth,
            params.min_samples_split, params.min_samples_leaf, max_feat, state)
        return {"feature": feature, "threshold": threshold, "left": left,
                "right": right, "probs": probs}
    g = np.ascontiguousarray(-y, dtype=np.float64)
    h = np.ones(m, dtype=np.float64)
    feature, threshold, left, right, value = K.grow_tree_reg(
        XT, g, h, 0.0, 0.0, order, rows, mode, max_depth,
        params.min_samples_split, params.min_samples_leaf, max_feat, state)
    return {"feature": feature, "threshold": threshold, "left": left,
            "right": right, "value": value}


def fit_tree(train: EncodedDataset, params: TreeParams) -> TreeModel:
    """Greedy recursive partitioning on the training data."""
    if train.n_rows == 0:
        raise ValueError("cannot fit a tree on an empty dataset")
    target = train.target_kind
    XT = K.feature_major(np.asarray(train.X, dtype=np.float64))
    if target.is_classification:
        y = np.ascontiguousarray(train.y, dtype=np.int64)
    else:
        y = np.ascontiguousarray(train.y, dtype=np.float64)
    state = K.new_state(params.seed, 0)
    arrays = _grow_from_arrays(XT, y, target, params, state)
    task = TASK_CLASSIFICATION if target.is_classification else TASK_REGRESSION
    return TreeModel(task=task, n_features=train.n_features, params=params,
                     target=target, **arrays)
