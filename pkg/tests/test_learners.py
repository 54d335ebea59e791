"""Learner contracts: hand-built oracles, spec examples, properties."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import mofit.learners as L
from mofit.dataset.types import EncodedDataset, TargetKind
from mofit.metrics import accuracy, rmse
from tests.conftest import small_classification, small_regression

CLS2 = TargetKind(kind="classes", labels=("A", "B"))
REAL = TargetKind(kind="real")


def make_ds(X, y, target):
    X = np.asarray(X, dtype=np.float64)
    return EncodedDataset(X=X, y=np.asarray(y),
                          feature_names=[f"f{i}" for i in range(X.shape[1])],
                          target_kind=target)


class TestTree:
    def test_pure_node_single_leaf(self):
        ds = make_ds([[0.0], [1.0], [2.0]], np.array([1, 1, 1]), CLS2)
        tree = L.fit_tree(ds, L.TreeParams())
        assert tree.n_nodes == 1
        probs = tree.predict_proba(ds.X)
        assert np.allclose(probs[:, 1], 1.0)

    def test_xor_needs_depth_two(self):
        X = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
        y = np.array([0, 1, 1, 0])
        # oracle: no single split separates XOR
        for f in range(2):
            for thr in (0.5,):
                left = [y[i] for i in range(4) if X[i][f] <= thr]
                assert len(set(left)) == 2
        ds = make_ds(X, y, CLS2)
        tree = L.fit_tree(ds, L.TreeParams())
        assert accuracy(y, tree.predict_batch(ds.X)) == 1.0
        assert int((tree.feature >= 0).sum()) >= 3

    def test_full_depth_memorizes_consistent_data(self, cls_small):
        tree = L.fit_tree(cls_small, L.TreeParams())
        assert accuracy(cls_small.y, tree.predict_batch(cls_small.X)) == 1.0

    def test_max_depth_honored(self, cls_small):
        tree = L.fit_tree(cls_small, L.TreeParams(max_depth=3))
        assert tree.depth() <= 3
        tree.validate()

    def test_min_samples_leaf(self, reg_small):
        tree = L.fit_tree(reg_small, L.TreeParams(min_samples_leaf=10,
                                                  min_samples_split=20))
        leaves = (tree.feature < 0)
        # count rows reaching each leaf
        from mofit import kernels as K
        hit = K.tree_apply(np.ascontiguousarray(reg_small.X), tree.feature,
                           tree.threshold, tree.left, tree.right)
        counts = np.bincount(hit, minlength=tree.n_nodes)[leaves]
        assert counts.min() >= 10

    def test_deterministic(self, cls_small):
        a = L.fit_tree(cls_small, L.TreeParams(max_features="sqrt", seed=7))
        b = L.fit_tree(cls_small, L.TreeParams(max_features="sqrt", seed=7))
        assert L.dumps_model(a) == L.dumps_model(b)

    def test_empty_rejected(self):
        ds = make_ds(np.empty((0, 2)), np.empty(0, dtype=np.int64), CLS2)
        with pytest.raises(ValueError):
            L.fit_tree(ds, L.TreeParams())

    def test_param_validation(self):
        with pytest.raises(ValueError):
            L.TreeParams(min_samples_split=1)
        with pytest.raises(ValueError):
            L.TreeParams(min_samples_leaf=5, min_samples_split=4)
        with pytest.raises(ValueError):
            L.TreeParams(max_features=1.5)
        with pytest.raises(ValueError):
            L.TreeParams(split_mode="fancy")


def constant_tree(value=None, probs=None, n_features=1):
    task = "regression" if value is not None else "classification"
    return L.TreeModel(
        task=task, n_features=n_features, params=L.TreeParams(),
        feature=np.array([-1]), threshold=np.array([0.0]),
        left=np.array([-1]), right=np.array([-1]),
        value=np.array([value]) if value is not None else None,
        probs=np.array([probs]) if probs is not None else None,
        target=REAL if value is not None else CLS2)


class TestPredictSurface:
    def test_single_leaf_constant(self):
        tree = constant_tree(value=7.0)
        assert L.predict(tree, [123.0]).value == 7.0

    def test_forest_regression_mean(self):
        forest = L.ForestModel(task="regression", n_features=1,
                               params=L.ForestParams(tree=L.TreeParams(), n_trees=2),
                               trees=[constant_tree(value=4.0), constant_tree(value=6.0)],
                               target=REAL)
        assert L.predict(forest, [0.0]).value == 5.0

    def test_probability_averaging(self):
        forest = L.ForestModel(
            task="classification", n_features=1,
            params=L.ForestParams(tree=L.TreeParams(), n_trees=2),
            trees=[constant_tree(probs=[0.6, 0.4]), constant_tree(probs=[0.2, 0.8])],
            target=CLS2)
        pred = L.predict(forest, [0.0])
        assert pred.probabilities == pytest.approx((0.4, 0.6))
        assert pred.class_index == 1 and pred.label == "B"

    def test_dimension_mismatch(self, cls_small):
        tree = L.fit_tree(cls_small, L.TreeParams())
        with pytest.raises(ValueError, match="features"):
            L.predict(tree, [0.0, 1.0])

    def test_probabilities_sum_to_one(self, cls_small):
        for model in (
            L.fit_tree(cls_small, L.TreeParams(max_depth=4)),
            L.fit_forest(cls_small, L.random_forest_params(n_trees=12)),
            L.fit_gbm(cls_small, L.GBMParams(n_rounds=10, max_depth=3)),
            L.fit_knn(cls_small, L.KNNParams(k=5)),
        ):
            pred = L.predict(model, cls_small.X[0])
            assert sum(pred.probabilities) == pytest.approx(1.0, abs=1e-9)
            assert 0 <= pred.class_index < 3


class TestForest:
    def test_degenerate_single_tree(self, cls_small):
        p = L.TreeParams(max_features="all", split_mode=L.SPLIT_EXACT, seed=5)
        forest = L.fit_forest(cls_small, L.ForestParams(tree=p, n_trees=1,
                                                        bootstrap=False))
        tree = L.fit_tree(cls_small, p)
        assert np.array_equal(forest.predict_batch(cls_small.X),
                              tree.predict_batch(cls_small.X))
        assert np.allclose(forest.predict_proba(cls_small.X),
                           tree.predict_proba(cls_small.X))

    def test_modes(self):
        rf = L.random_forest_params()
        assert rf.mode == "random_forest" and rf.bootstrap
        et = L.extra_trees_params()
        assert et.mode == "extra_trees" and not et.bootstrap

    def test_order_invariance(self, cls_small):
        # trees drawn from per-index streams: building any single tree
        # standalone reproduces the ensemble member exactly
        params = L.random_forest_params(n_trees=8, seed=11)
        forest = L.fit_forest(cls_small, params)
        for idx in (7, 3, 0):
            solo = L.fit_forest(cls_small, L.ForestParams(
                tree=params.tree, n_trees=idx + 1, bootstrap=True))
            assert L.dumps_model(solo.trees[idx]) == L.dumps_model(forest.trees[idx])

    def test_deterministic(self, reg_small):
        a = L.fit_forest(reg_small, L.extra_trees_params(n_trees=10, seed=2))
        b = L.fit_forest(reg_small, L.extra_trees_params(n_trees=10, seed=2))
        assert L.dumps_model(a) == L.dumps_model(b)

    def test_extra_trees_beats_chance(self, cls_small):
        et = L.fit_forest(cls_small, L.extra_trees_params(n_trees=40, seed=3))
        assert accuracy(cls_small.y, et.predict_batch(cls_small.X)) > 0.8


class TestGBM:
    def test_zero_rounds_is_base_score(self):
        ds = make_ds([[0.0], [1.0], [2.0]], np.array([2.0, 4.0, 6.0]), REAL)
        model = L.fit_gbm(ds, L.GBMParams(n_rounds=0))
        assert np.allclose(model.predict_batch(ds.X), 4.0)

    def test_one_round_stump_exact(self):
        ds = make_ds([[0.0], [0.1], [0.9], [1.0]],
                     np.array([0.0, 0.0, 10.0, 10.0]), REAL)
        model = L.fit_gbm(ds, L.GBMParams(n_rounds=1, learning_rate=1.0,
                                          lam=0.0, max_depth=1))
        # by hand: g = mean - y = [5,5,-5,-5]; leaf = -sum(g)/count
        assert np.allclose(model.predict_batch(ds.X), ds.y, atol=1e-12)

    def test_training_rmse_monotone(self, reg_small):
        errs = []
        for rounds in (0, 1, 3, 10, 30, 80):
            model = L.fit_gbm(reg_small, L.GBMParams(
                n_rounds=rounds, learning_rate=0.3, lam=0.5, max_depth=3, seed=4))
            errs.append(rmse(reg_small.y, model.predict_batch(reg_small.X)))
        assert all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))

    def test_classification_learns(self, cls_small):
        model = L.fit_gbm(cls_small, L.GBMParams(n_rounds=40, learning_rate=0.3,
                                                 max_depth=3, seed=4))
        assert accuracy(cls_small.y, model.predict_batch(cls_small.X)) > 0.9
        probs = model.predict_proba(cls_small.X)
        assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-9)

    def test_subsample_deterministic(self, reg_small):
        a = L.fit_gbm(reg_small, L.GBMParams(n_rounds=12, subsample=0.7, seed=9))
        b = L.fit_gbm(reg_small, L.GBMParams(n_rounds=12, subsample=0.7, seed=9))
        assert L.dumps_model(a) == L.dumps_model(b)

    def test_leaf_values_finite_with_zero_lambda(self, cls_small):
        model = L.fit_gbm(cls_small, L.GBMParams(n_rounds=25, learning_rate=1.0,
                                                 lam=0.0, max_depth=4, seed=1))
        for rnd in model.rounds:
            for tree in rnd:
                assert np.isfinite(tree.value).all()


class TestKNN:
    def test_exact_match_wins(self, cls_small):
        model = L.fit_knn(cls_small, L.KNNParams(k=1))
        assert np.array_equal(model.predict_batch(cls_small.X), cls_small.y)

    def test_majority_vote(self):
        ds = make_ds([[0.0], [0.1], [0.2], [10.0]],
                     np.array([0, 1, 1, 0]), CLS2)
        model = L.fit_knn(ds, L.KNNParams(k=3))
        assert model.predict_batch(np.array([[0.05]]))[0] == 1

    def test_one_dimensional_example(self):
        ds = make_ds([[0.0], [1.0], [10.0]], np.array([0.0, 2.0, 10.0]), REAL)
        model = L.fit_knn(ds, L.KNNParams(k=2, weighting="uniform"))
        assert model.predict_batch(np.array([[0.4]]))[0] == pytest.approx(1.0)

    def test_k_equals_n_predicts_global(self, cls_small, reg_small):
        model = L.fit_knn(cls_small, L.KNNParams(k=cls_small.n_rows))
        majority = np.bincount(cls_small.y).argmax()
        assert np.all(model.predict_batch(cls_small.X[:10]) == majority)
        rmodel = L.fit_knn(reg_small, L.KNNParams(k=reg_small.n_rows))
        assert rmodel.predict_batch(reg_small.X[:3])[0] == pytest.approx(reg_small.y.mean())

    def test_zero_distance_dominates_inverse_weighting(self):
        ds = make_ds([[0.0], [0.5], [0.6]], np.array([5.0, 100.0, 100.0]), REAL)
        model = L.fit_knn(ds, L.KNNParams(k=3, weighting="inverse-distance"))
        assert model.predict_batch(np.array([[0.0]]))[0] == pytest.approx(5.0)

    def test_k_exceeds_train_rejected(self, cls_small):
        with pytest.raises(ValueError, match="exceeds"):
            L.fit_knn(cls_small, L.KNNParams(k=cls_small.n_rows + 1))

    def test_constant_feature_ignored(self, reg_small):
        base = L.fit_knn(reg_small, L.KNNParams(k=3))
        padded = EncodedDataset(
            X=np.hstack([reg_small.X, np.full((reg_small.n_rows, 1), 9.0)]),
            y=reg_small.y, feature_names=reg_small.feature_names + ["const"],
            target_kind=reg_small.target_kind)
        model = L.fit_knn(padded, L.KNNParams(k=3))
        q = np.hstack([reg_small.X[:5], np.full((5, 1), -3.0)])
        assert np.allclose(model.predict_batch(q),
                           base.predict_batch(reg_small.X[:5]))

    def test_tie_broken_by_lower_index(self):
        ds = make_ds([[0.0], [2.0], [2.0]], np.array([0, 1, 0]), CLS2)
        model = L.fit_knn(ds, L.KNNParams(k=2))
        # query at 2.0: rows 1 and 2 tie at distance 0; row 1 comes first,
        # then votes tie 1-1 and argmax picks the lower class index
        assert model.predict_batch(np.array([[2.0]]))[0] == 0


class TestSerialization:
    @pytest.mark.parametrize("fit", [
        lambda ds: L.fit_tree(ds, L.TreeParams(max_depth=5, seed=3)),
        lambda ds: L.fit_forest(ds, L.random_forest_params(n_trees=8, seed=3)),
        lambda ds: L.fit_forest(ds, L.extra_trees_params(n_trees=8, seed=3)),
        lambda ds: L.fit_gbm(ds, L.GBMParams(n_rounds=8, max_depth=3, seed=3)),
        lambda ds: L.fit_knn(ds, L.KNNParams(k=4)),
    ])
    def test_roundtrip_bit_exact(self, fit):
        for ds in (small_classification(seed=5), small_regression(seed=5)):
            model = fit(ds)
            clone = L.loads_model(L.dumps_model(model))
            a = model.predict_batch(ds.X)
            b = clone.predict_batch(ds.X)
            assert np.array_equal(np.asarray(a), np.asarray(b))
            if ds.target_kind.is_classification:
                assert np.array_equal(model.predict_proba(ds.X),
                                      clone.predict_proba(ds.X))

    def test_version_check(self, cls_small):
        doc = L.model_to_doc(L.fit_knn(cls_small, L.KNNParams(k=2)))
        doc["version"] = 99
        with pytest.raises(ValueError, match="version"):
            L.model_from_doc(doc)


@given(st.integers(0, 10_000))
@settings(max_examples=15, deadline=None)
def test_tree_memorizes_any_consistent_data(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 60))
    X = rng.integers(0, 6, (n, 3)).astype(np.float64)
    # force consistency: label derived from the features
    y = ((X[:, 0] + 2 * X[:, 1] + X[:, 2] ** 2) % 3).astype(np.int64)
    ds = EncodedDataset(X=X, y=y, feature_names=["a", "b", "c"],
                        target_kind=TargetKind(kind="classes", labels=("x", "y", "z")))
    tree = L.fit_tree(ds, L.TreeParams())
    assert accuracy(y, tree.predict_batch(X)) == 1.0
