"""Compare the numba-jitted kernels against the pure-numpy fallback.

Each workload runs in a fresh subprocess (the backend is chosen at import
time from MOFIT_NO_NUMBA), then the wall times are printed side by side.

    python3 benchmarks/bench_kernels.py [--rows 800] [--reps 5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import textwrap

WORKER = textwrap.dedent("""
    import json, sys, time
    import numpy as np
    from mofit import kernels as K

    rows = int(sys.argv[1])
    reps = int(sys.argv[2])
    rng = np.random.default_rng(0)
    n_feat = 21
    X = np.round(rng.random((rows, n_feat)) * 3 / 0.05) * 0.05
    XT = np.ascontiguousarray(X.T)
    y = rng.integers(0, 7, rows).astype(np.int64)
    g = rng.standard_normal(rows)
    h = np.abs(rng.random(rows)) * 0.25 + 0.01
    Q = rng.random((rows // 4, n_feat))

    def time_it(fn, warmups=1):
        for _ in range(warmups):
            fn()
        t0 = time.perf_counter()
        for _ in range(reps):
            fn()
        return (time.perf_counter() - t0) / reps

    def cls_exact():
        order = K.presort(XT)
        K.grow_tree_cls(XT, y, 7, order, K.EMPTY_ROWS, K.SPLIT_EXACT, 16, 2, 1,
                        5, K.new_state(1, 0))

    def cls_random():
        rows_ix = np.arange(rows, dtype=np.int32)
        K.grow_tree_cls(XT, y, 7, K.EMPTY_ORDER, rows_ix, K.SPLIT_RANDOM, 16,
                        2, 1, 5, K.new_state(1, 0))

    def reg_exact():
        order = K.presort(XT)
        K.grow_tree_reg(XT, g, h, 1.0, 0.5, order, K.EMPTY_ROWS, K.SPLIT_EXACT,
                        6, 2, 1, n_feat, K.new_state(1, 0))

    def traversal():
        order = K.presort(XT)
        tree = K.grow_tree_reg(XT, g, h, 1.0, 0.5, order, K.EMPTY_ROWS,
                               K.SPLIT_EXACT, 6, 2, 1, n_feat, K.new_state(1, 0))
        out = np.zeros(rows)
        for _ in range(20):
            K.tree_add_values(np.ascontiguousarray(X), *tree, out)

    def knn():
        K.knn_neighbors(np.ascontiguousarray(Q), np.ascontiguousarray(X), 10)

    results = {
        "backend": K.BACKEND,
        "classification tree (exact greedy)": time_it(cls_exact),
        "classification tree (random threshold)": time_it(cls_random),
        "gradient tree (exact greedy)": time_it(reg_exact),
        "tree traversal x20": time_it(traversal),
        "knn neighbour search": time_it(knn),
    }
    print(json.dumps(results))
""")


def run_backend(disable_numba: bool, rows: int, reps: int) -> dict:
    env = dict(os.environ)
    env["MOFIT_NO_NUMBA"] = "1" if disable_numba else "0"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(rows), str(reps)],
                          capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=800)
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()

    print(f"rows={args.rows} reps={args.reps}")
    print("building jitted timings (includes one-time compile)...")
    jit = run_backend(False, args.rows, args.reps)
    print("building fallback timings...")
    plain = run_backend(True, args.rows, args.reps)

    width = max(len(k) for k in jit) + 2
    print(f"\n{'workload':<{width}}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for key, jit_t in jit.items():
        if key == "backend":
            continue
        plain_t = plain[key]
        print(f"{key:<{width}}{jit_t * 1000:>10.2f}ms{plain_t * 1000:>10.2f}ms"
              f"{plain_t / jit_t:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
