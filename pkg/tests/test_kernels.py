"""Kernel-level checks plus numba/numpy backend agreement."""

import json
import os
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from mofit import kernels as K


class TestPRNG:
    def test_streams_independent_and_deterministic(self):
        a = K.new_state(42, 0)
        b = K.new_state(42, 0)
        c = K.new_state(42, 1)
        seq_a = [int(K.prng_next(a)) for _ in range(5)]
        seq_b = [int(K.prng_next(b)) for _ in range(5)]
        seq_c = [int(K.prng_next(c)) for _ in range(5)]
        assert seq_a == seq_b != seq_c

    def test_uniform_range(self):
        s = K.new_state(7, 0)
        vals = [float(K.prng_uniform(s)) for _ in range(2000)]
        assert all(0.0 <= v < 1.0 for v in vals)
        assert 0.45 < np.mean(vals) < 0.55

    def test_below_bounds(self):
        s = K.new_state(7, 0)
        vals = [int(K.prng_below(s, 13)) for _ in range(1000)]
        assert set(vals) <= set(range(13))
        assert len(set(vals)) == 13

    def test_sampling(self):
        s = K.new_state(1, 0)
        boot = np.asarray(K.sample_with_replacement(50, 50, s))
        assert boot.min() >= 0 and boot.max() < 50
        sub = np.asarray(K.sample_without_replacement(50, 20, s))
        assert len(np.unique(sub)) == 20
        assert np.array_equal(sub, np.sort(sub))


class TestGrowthKernels:
    def test_presort_orders_each_feature(self):
        rng = np.random.default_rng(0)
        XT = np.ascontiguousarray(rng.random((4, 30)))
        order = K.presort(XT)
        for f in range(4):
            assert np.array_equal(XT[f, order[f]], np.sort(XT[f]))

    def test_exact_split_matches_brute_force_variance(self):
        # single greedy split on 1 feature == brute-force best variance split
        rng = np.random.default_rng(3)
        x = np.sort(rng.random(40))
        y = np.where(x > 0.6, 5.0, 1.0) + rng.normal(0, 0.05, 40)
        XT = np.ascontiguousarray(x.reshape(1, -1))
        order = K.presort(XT)
        state = K.new_state(0, 0)
        feat, thr, left, right, value = K.grow_tree_reg(
            XT, np.ascontiguousarray(-y), np.ones(40), 0.0, 0.0, order,
            K.EMPTY_ROWS, K.SPLIT_EXACT, 1, 2, 1, 1, state)
        best_gain, best_thr = -1.0, None
        for i in range(39):
            if x[i] == x[i + 1]:
                continue
            t = (x[i] + x[i + 1]) / 2
            l, r = y[x <= t], y[x > t]
            gain = y.var() * 40 - (l.var() * len(l) + r.var() * len(r))
            if gain > best_gain:
                best_gain, best_thr = gain, t
        assert thr[0] == pytest.approx(best_thr, abs=1e-12)

    def test_knn_neighbors_against_numpy_oracle(self):
        rng = np.random.default_rng(5)
        Q = rng.random((10, 4))
        T = rng.random((50, 4))
        idx, dist = K.knn_neighbors(np.ascontiguousarray(Q),
                                    np.ascontiguousarray(T), 7)
        d2 = ((Q[:, None, :] - T[None, :, :]) ** 2).sum(axis=2)
        oracle = np.argsort(d2, axis=1, kind="stable")[:, :7]
        assert np.array_equal(idx, oracle)
        assert np.allclose(dist, np.sqrt(np.take_along_axis(d2, oracle, axis=1)))


BACKEND_SCRIPT = textwrap.dedent("""
    import json, sys
    import numpy as np
    from mofit import kernels as K
    from tests.conftest import small_classification, small_regression
    import mofit.learners as L

    assert K.BACKEND == sys.argv[1], K.BACKEND
    cls = small_classification(n=120, seed=9)
    reg = small_regression(n=120, seed=9)
    out = {
        "prng": [int(K.prng_next(K.new_state(3, 1))) for _ in range(4)],
        "tree": L.fit_tree(cls, L.TreeParams(max_depth=6, seed=2)).predict_batch(cls.X).tolist(),
        "rf": L.fit_forest(cls, L.random_forest_params(n_trees=6, seed=2)).predict_proba(cls.X)[:8].tolist(),
        "et": L.fit_forest(reg, L.extra_trees_params(n_trees=6, seed=2)).predict_batch(reg.X)[:8].tolist(),
        "gbm": L.fit_gbm(reg, L.GBMParams(n_rounds=6, max_depth=3, subsample=0.8, seed=2)).predict_batch(reg.X)[:8].tolist(),
        "knn": L.fit_knn(reg, L.KNNParams(k=3)).predict_batch(reg.X)[:8].tolist(),
    }
    print(json.dumps(out))
""")


def _run_backend(disable_numba: bool) -> dict:
    env = dict(os.environ)
    env["MOFIT_NO_NUMBA"] = "1" if disable_numba else "0"
    env["PYTHONPATH"] = os.getcwd()
    expected = "numpy" if disable_numba else "numba"
    proc = subprocess.run([sys.executable, "-c", BACKEND_SCRIPT, expected],
                          capture_output=True, text=True, env=env,
                          cwd=os.path.dirname(os.path.dirname(__file__)))
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


@pytest.mark.slow
def test_numpy_fallback_matches_numba_backend():
    """The env-flag fallback path must agree with the JIT path."""
    jit = _run_backend(disable_numba=False)
    plain = _run_backend(disable_numba=True)
    assert jit["prng"] == plain["prng"]
    assert jit["tree"] == plain["tree"]
    np.testing.assert_allclose(jit["rf"], plain["rf"], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(jit["et"], plain["et"], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(jit["gbm"], plain["gbm"], rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(jit["knn"], plain["knn"], rtol=1e-12, atol=1e-12)
