"""Tree ensembles: bagged random forests and extremely randomized trees."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels as K
from ..dataset.types import TASK_CLASSIFICATION, TASK_REGRESSION, EncodedDataset, TargetKind
from .tree import SPLIT_EXACT, SPLIT_RANDOM, TreeModel, TreeParams, _grow_from_arrays

MODE_RANDOM_FOREST = "random_forest"
MODE_EXTRA_TREES = "extra_trees"


@dataclass(frozen=True)
class ForestParams:
    tree: TreeParams
    n_trees: int = 100
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")

    @property
    def mode(self) -> str:
        if self.bootstrap and self.tree.split_mode == SPLIT_EXACT:
            return MODE_RANDOM_FOREST
        if not self.bootstrap and self.tree.split_mode == SPLIT_RANDOM:
            return MODE_EXTRA_TREES
        return "custom"


def random_forest_params(n_trees: int = 100, max_depth: int | None = None,
                         min_samples_split: int = 2, min_samples_leaf: int = 1,
                         max_features: str | float = "sqrt", seed: int = 0) -> ForestParams:
    tree = TreeParams(max_depth=max_depth, min_samples_split=min_samples_split,
                      min_samples_leaf=min_samples_leaf, max_features=max_features,
                      split_mode=SPLIT_EXACT, seed=seed)
    return ForestParams(tree=tree, n_trees=n_trees, bootstrap=True)


def extra_trees_params(n_trees: int = 100, max_depth: int | None = None,
                       min_samples_split: int = 2, min_samples_leaf: int = 1,
                       max_features: str | float = "sqrt", seed: int = 0) -> ForestParams:
    tree = TreeParams(max_depth=max_depth, min_samples_split=min_samples_split,
                      min_samples_leaf=min_samples_leaf, max_features=max_features,
                      split_mode=SPLIT_RANDOM, seed=seed)
    return ForestParams(tree=tree, n_trees=n_trees, bootstrap=False)


@dataclass
class ForestModel:
    task: str
    n_features: int
    params: ForestParams
    trees: list[TreeModel]
    target: TargetKind | None = None

    @property
    def n_classes(self) -> int:
        return self.trees[0].n_classes

    def _check_input(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        return X

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.task != TASK_CLASSIFICATION:
            raise ValueError("predict_proba requires a classification forest")
        X = self._check_input(X)
        out = np.zeros((X.shape[0], self.n_classes), dtype=np.float64)
        for tree in self.trees:
            K.tree_add_probs(X, tree.feature, tree.threshold, tree.left,
                             tree.right, tree.probs, out)
        out /= len(self.trees)
        return out

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = self._check_input(X)
        if self.task == TASK_CLASSIFICATION:
            return self.predict_proba(X).argmax(axis=1)
        out = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees:
            K.tree_add_values(X, tree.feature, tree.threshold, tree.left,
                              tree.right, tree.value, out)
        out /= len(self.trees)
        return out


def fit_forest(train: EncodedDataset, params: ForestParams) -> ForestModel:
    """Fit n_trees trees on bootstrap samples (or the full set for extra-trees).

    Each tree draws from its own PRNG stream keyed by (seed, tree_index), so
    the ensemble is independent of the order trees are built in.
    """
    if train.n_rows == 0:
        raise ValueError("cannot fit a forest on an empty dataset")
    target = train.target_kind
    m = train.n_rows
    XT = K.feature_major(np.asarray(train.X, dtype=np.float64))
    if target.is_classification:
        y = np.ascontiguousarray(train.y, dtype=np.int64)
    else:
        y = np.ascontiguousarray(train.y, dtype=np.float64)

    task = TASK_CLASSIFICATION if target.is_classification else TASK_REGRESSION
    trees: list[TreeModel] = []
    for t in range(params.n_trees):
        state = K.new_state(params.tree.seed, t)
        if params.bootstrap:
            idx = np.asarray(K.sample_with_replacement(m, m, state))
            XTs = np.ascontiguousarray(XT[:, idx])
            ys = y[idx]
        else:
            XTs, ys = XT, y
        arrays = _grow_from_arrays(XTs, ys, target, params.tree, state)
        trees.append(TreeModel(task=task, n_features=train.n_features,
                               params=params.tree, target=target, **arrays))
    return ForestModel(task=task, n_features=train.n_features, params=params,
                       trees=trees, target=target)
