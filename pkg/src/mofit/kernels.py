"""Hot numeric kernels for tree growth, tree traversal and KNN search.

Every kernel is written as a plain numpy function and JIT-compiled with
numba by default.  Setting the environment variable ``MOFIT_NO_NUMBA=1``
(or running without numba installed) selects the pure-numpy fallback: the
same functions executed by CPython.  Both paths share one source, so they
implement identical logic; ``benchmarks/bench_kernels.py`` compares their
speed.

Growth kernels operate on a feature-major transpose ``XT`` of the training
matrix plus per-feature row orderings from :func:`presort`, which they
repartition in place as nodes split.  Randomness uses a splitmix64
generator carried in a one-element uint64 state array, so results are
reproducible and identical across both backends.
"""

from __future__ import annotations

import functools
import os

import numpy as np

_U64_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_U64_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_U64_MIX2 = np.uint64(0x94D4DE3AF27732A5)
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


def _plain(func):
    # numpy 2.x warns on scalar uint64 overflow; the PRNG relies on wrapping
    @functools.wraps(func)
    def wrapper(*args):
        with np.errstate(over="ignore"):
            return func(*args)

    return wrapper


if _env_flag("MOFIT_NO_NUMBA"):
    NUMBA_ENABLED = False
else:
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but be safe
        NUMBA_ENABLED = False

if NUMBA_ENABLED:
    maybe_jit = njit(cache=True)
else:
    maybe_jit = _plain

BACKEND = "numba" if NUMBA_ENABLED else "numpy"

SPLIT_EXACT = 0
SPLIT_RANDOM = 1


# ---------------------------------------------------------------------------
# splitmix64 PRNG
# ---------------------------------------------------------------------------

@maybe_jit
def mix64(seed, stream):
    """Derive an independent 64-bit state from (seed, stream)."""
    z = np.uint64(seed) + np.uint64(stream) * _U64_GOLDEN + _U64_GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _U64_MIX1
    z = (z ^ (z >> np.uint64(27))) * _U64_MIX2
    return z ^ (z >> np.uint64(31))


@maybe_jit
def prng_next(state):
    state[0] = state[0] + _U64_GOLDEN
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * _U64_MIX1
    z = (z ^ (z >> np.uint64(27))) * _U64_MIX2
    return z ^ (z >> np.uint64(31))


@maybe_jit
def prng_uniform(state):
    """Uniform float64 in [0, 1)."""
    return np.float64(prng_next(state) >> np.uint64(11)) * _INV_2_53


@maybe_jit
def prng_below(state, n):
    """Integer in [0, n)."""
    return np.int64(prng_next(state) % np.uint64(n))


def new_state(seed: int, stream: int = 0) -> np.ndarray:
    """Fresh PRNG state array for a (seed, stream) pair."""
    with np.errstate(over="ignore"):
        return np.array(
            [mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(stream))],
            dtype=np.uint64,
        )


# ---------------------------------------------------------------------------
# row sampling
# ---------------------------------------------------------------------------

@maybe_jit
def sample_with_replacement(n, size, state):
    out = np.empty(size, np.int64)
    for i in range(size):
        out[i] = prng_below(state, n)
    return out


@maybe_jit
def sample_without_replacement(n, size, state):
    """`size` distinct indices from range(n), returned sorted ascending."""
    perm = np.arange(n)
    for i in range(size):
        j = i + prng_below(state, n - i)
        perm[i], perm[j] = perm[j], perm[i]
    return np.sort(perm[:size])


# ---------------------------------------------------------------------------
# layout helpers (vectorized numpy; cheap next to growth itself)
# ---------------------------------------------------------------------------

def feature_major(X: np.ndarray) -> np.ndarray:
    """C-contiguous (n_features, n_rows) transpose used by growth kernels."""
    return np.ascontiguousarray(X.T)


def presort(XT: np.ndarray) -> np.ndarray:
    """Per-feature row order of feature-major data, (n_features, n_rows) int32.

    Consumed destructively by the exact-greedy growth kernels.
    """
    return np.ascontiguousarray(np.argsort(XT, axis=1).astype(np.int32))


EMPTY_ORDER = np.empty((0, 0), np.int32)
EMPTY_ROWS = np.empty(0, np.int32)


@maybe_jit
def _sample_features(n_feat, n_pick, perm, chosen, state):
    if n_pick >= n_feat:
        for i in range(n_feat):
            chosen[i] = i
        return
    # partial Fisher-Yates, then ascending order for deterministic ties
    for i in range(n_pick):
        j = i + prng_below(state, n_feat - i)
        perm[i], perm[j] = perm[j], perm[i]
    for i in range(n_pick):
        chosen[i] = perm[i]
    chosen[:n_pick].sort()


@maybe_jit
def _node_cap(m, max_depth):
    cap = 2 * m + 1
    if 0 <= max_depth < 60:
        full = (np.int64(1) << np.int64(max_depth + 1)) + 1
        if full < cap:
            cap = full
    return cap


@maybe_jit
def _midpoint(a, b):
    mid = a + (b - a) * 0.5
    if mid >= b:
        mid = a
    return mid


# ---------------------------------------------------------------------------
# classification tree growth (Gini)
# ---------------------------------------------------------------------------

@maybe_jit
def grow_tree_cls(XT, y, n_classes, order, rows, split_mode, max_depth,
                  min_samples_split, min_samples_leaf, max_feat, state):
    """Grow one classification tree; splits maximize Gini impurity decrease.

    SPLIT_EXACT scans midpoints of consecutive distinct values per candidate
    feature and needs `order` from presort(); SPLIT_RANDOM draws one uniform
    threshold per candidate feature between the node's min and max and needs
    int32 `rows`.  Both index structures are consumed destructively.

    At an impure node the best candidate is taken even at zero gain (ties:
    lowest feature index, then lowest threshold), so e.g. XOR-style targets
    are still separated at depth 2.

    Returns (feature, threshold, left, right, probs); leaves carry
    feature == -1 and their class-frequency vector in probs.
    """
    n_feat = XT.shape[0]
    m = order.shape[1] if split_mode == SPLIT_EXACT else rows.shape[0]
    cap = _node_cap(m, max_depth)
    feat = np.full(cap, -1, np.int64)
    thr = np.zeros(cap, np.float64)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    probs = np.zeros((cap, n_classes), np.float64)

    stack_node = np.empty(cap, np.int64)
    stack_lo = np.empty(cap, np.int64)
    stack_hi = np.empty(cap, np.int64)
    stack_depth = np.empty(cap, np.int64)

    counts = np.zeros(n_classes, np.int64)
    lcounts = np.zeros(n_classes, np.int64)
    go_left = np.zeros(m, np.uint8)
    tmp_i = np.empty(m, np.int32)
    perm = np.arange(n_feat)
    chosen = np.empty(n_feat, np.int64)

    n_pick = max_feat if max_feat < n_feat else n_feat
    n_nodes = 1
    stack_node[0] = 0
    stack_lo[0] = 0
    stack_hi[0] = m
    stack_depth[0] = 0
    sp = 1

    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        lo = stack_lo[sp]
        hi = stack_hi[sp]
        depth = stack_depth[sp]
        cnt = hi - lo

        for k in range(n_classes):
            counts[k] = 0
        if split_mode == SPLIT_EXACT:
            for i in range(lo, hi):
                counts[y[order[0, i]]] += 1
        else:
            for i in range(lo, hi):
                counts[y[rows[i]]] += 1

        n_major = np.int64(0)
        for k in range(n_classes):
            if counts[k] > n_major:
                n_major = counts[k]

        stop = (
            n_major == cnt
            or cnt < min_samples_split
            or cnt < 2 * min_samples_leaf
            or (max_depth >= 0 and depth >= max_depth)
        )

        best_f = np.int64(-1)
        best_i = np.int64(-1)
        best_thr = 0.0
        best_nl = np.int64(0)
        best_score = -1.0

        if not stop:
            _sample_features(n_feat, n_pick, perm, chosen, state)
            ssq_parent = np.int64(0)
            for k in range(n_classes):
                ssq_parent += counts[k] * counts[k]

            for j in range(n_pick):
                f = chosen[j]
                row = XT[f]
                if split_mode == SPLIT_EXACT:
                    for k in range(n_classes):
                        lcounts[k] = 0
                    ssq_l = np.int64(0)
                    ssq_r = ssq_parent
                    for i in range(lo, lo + min_samples_leaf - 1):
                        c = y[order[f, i]]
                        q = lcounts[c]
                        ssq_l += 2 * q + 1
                        ssq_r -= 2 * (counts[c] - q) - 1
                        lcounts[c] = q + 1
                    vcur = row[order[f, lo + min_samples_leaf - 1]]
                    for i in range(lo + min_samples_leaf - 1, hi - min_samples_leaf):
                        c = y[order[f, i]]
                        q = lcounts[c]
                        ssq_l += 2 * q + 1
                        ssq_r -= 2 * (counts[c] - q) - 1
                        lcounts[c] = q + 1
                        vnext = row[order[f, i + 1]]
                        if vnext != vcur:
                            nl = i - lo + 1
                            nr = cnt - nl
                            score = ssq_l / np.float64(nl) + ssq_r / np.float64(nr)
                            if score > best_score:
                                best_score = score
                                best_f = f
                                best_i = i
                                best_nl = nl
                            vcur = vnext
                else:
                    vmin = row[rows[lo]]
                    vmax = vmin
                    for i in range(lo + 1, hi):
                        v = row[rows[i]]
                        if v < vmin:
                            vmin = v
                        elif v > vmax:
                            vmax = v
                    if vmin == vmax:
                        continue
                    t = vmin + prng_uniform(state) * (vmax - vmin)
                    if t >= vmax:
                        t = vmin
                    for k in range(n_classes):
                        lcounts[k] = 0
                    nl = np.int64(0)
                    for i in range(lo, hi):
                        r = rows[i]
                        if row[r] <= t:
                            lcounts[y[r]] += 1
                            nl += 1
                    nr = cnt - nl
                    if nl < min_samples_leaf or nr < min_samples_leaf:
                        continue
                    ssq_l = np.int64(0)
                    ssq_r = np.int64(0)
                    for k in range(n_classes):
                        ssq_l += lcounts[k] * lcounts[k]
                        rc = counts[k] - lcounts[k]
                        ssq_r += rc * rc
                    score = ssq_l / np.float64(nl) + ssq_r / np.float64(nr)
                    if score > best_score:
                        best_score = score
                        best_f = f
                        best_thr = t
                        best_nl = nl

        if best_f < 0:
            inv = 1.0 / np.float64(cnt)
            for k in range(n_classes):
                probs[node, k] = counts[k] * inv
            continue

        if split_mode == SPLIT_EXACT:
            va = XT[best_f, order[best_f, best_i]]
            vb = XT[best_f, order[best_f, best_i + 1]]
            best_thr = _midpoint(va, vb)

        feat[node] = best_f
        thr[node] = best_thr
        lchild = n_nodes
        rchild = n_nodes + 1
        n_nodes += 2
        left[node] = lchild
        right[node] = rchild

        rowb = XT[best_f]
        if split_mode == SPLIT_EXACT:
            for i in range(lo, hi):
                r = order[0, i]
                go_left[r] = np.uint8(1) if rowb[r] <= best_thr else np.uint8(0)
            for f in range(n_feat):
                a = lo
                b = 0
                for i in range(lo, hi):
                    r = order[f, i]
                    if go_left[r]:
                        order[f, a] = r
                        a += 1
                    else:
                        tmp_i[b] = r
                        b += 1
                for i in range(b):
                    order[f, a + i] = tmp_i[i]
        else:
            a = lo
            b = 0
            for i in range(lo, hi):
                r = rows[i]
                if rowb[r] <= best_thr:
                    rows[a] = r
                    a += 1
                else:
                    tmp_i[b] = r
                    b += 1
            for i in range(b):
                rows[a + i] = tmp_i[i]

        mid = lo + best_nl
        stack_node[sp] = rchild
        stack_lo[sp] = mid
        stack_hi[sp] = hi
        stack_depth[sp] = depth + 1
        sp += 1
        stack_node[sp] = lchild
        stack_lo[sp] = lo
        stack_hi[sp] = mid
        stack_depth[sp] = depth + 1
        sp += 1

    return (feat[:n_nodes].copy(), thr[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), probs[:n_nodes].copy())


# ---------------------------------------------------------------------------
# regression / gradient tree growth (second-order gain with L2 leaf penalty)
# ---------------------------------------------------------------------------

@maybe_jit
def grow_tree_reg(XT, g, h, lam, min_child_weight, order, rows, split_mode,
                  max_depth, min_samples_split, min_samples_leaf, max_feat,
                  state):
    """Grow one regression tree on gradient/hessian pairs.

    Split gain is 0.5 * [GL^2/(HL+lam) + GR^2/(HR+lam) - G^2/(H+lam)]; leaf
    value is -G/(H+lam).  Plain CART variance splitting is the special case
    g = -y, h = 1, lam = 0 (leaf = node mean).  Candidates leaving a side
    with hessian sum below min_child_weight are rejected; splits are only
    taken at strictly positive gain.  Modes and the order/rows contract
    match grow_tree_cls.
    """
    n_feat = XT.shape[0]
    m = order.shape[1] if split_mode == SPLIT_EXACT else rows.shape[0]
    cap = _node_cap(m, max_depth)
    feat = np.full(cap, -1, np.int64)
    thr = np.zeros(cap, np.float64)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    value = np.zeros(cap, np.float64)

    stack_node = np.empty(cap, np.int64)
    stack_lo = np.empty(cap, np.int64)
    stack_hi = np.empty(cap, np.int64)
    stack_depth = np.empty(cap, np.int64)

    go_left = np.zeros(m, np.uint8)
    tmp_i = np.empty(m, np.int32)
    perm = np.arange(n_feat)
    chosen = np.empty(n_feat, np.int64)

    n_pick = max_feat if max_feat < n_feat else n_feat
    n_nodes = 1
    stack_node[0] = 0
    stack_lo[0] = 0
    stack_hi[0] = m
    stack_depth[0] = 0
    sp = 1

    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        lo = stack_lo[sp]
        hi = stack_hi[sp]
        depth = stack_depth[sp]
        cnt = hi - lo

        G = 0.0
        H = 0.0
        gmin = np.inf
        gmax = -np.inf
        if split_mode == SPLIT_EXACT:
            for i in range(lo, hi):
                r = order[0, i]
                gr = g[r]
                G += gr
                H += h[r]
                if gr < gmin:
                    gmin = gr
                if gr > gmax:
                    gmax = gr
        else:
            for i in range(lo, hi):
                r = rows[i]
                gr = g[r]
                G += gr
                H += h[r]
                if gr < gmin:
                    gmin = gr
                if gr > gmax:
                    gmax = gr

        stop = (
            gmin == gmax
            or cnt < min_samples_split
            or cnt < 2 * min_samples_leaf
            or (max_depth >= 0 and depth >= max_depth)
        )

        best_f = np.int64(-1)
        best_i = np.int64(-1)
        best_thr = 0.0
        best_nl = np.int64(0)
        best_score = -np.inf
        parent_score = G * G / (H + lam) if H + lam > 0.0 else 0.0

        if not stop:
            _sample_features(n_feat, n_pick, perm, chosen, state)
            for j in range(n_pick):
                f = chosen[j]
                row = XT[f]
                if split_mode == SPLIT_EXACT:
                    GL = 0.0
                    HL = 0.0
                    for i in range(lo, lo + min_samples_leaf - 1):
                        r = order[f, i]
                        GL += g[r]
                        HL += h[r]
                    vcur = row[order[f, lo + min_samples_leaf - 1]]
                    for i in range(lo + min_samples_leaf - 1, hi - min_samples_leaf):
                        r = order[f, i]
                        GL += g[r]
                        HL += h[r]
                        vnext = row[order[f, i + 1]]
                        if vnext != vcur:
                            HR = H - HL
                            if HL >= min_child_weight and HR >= min_child_weight:
                                GR = G - GL
                                sl = GL * GL / (HL + lam) if HL + lam > 0.0 else 0.0
                                sr = GR * GR / (HR + lam) if HR + lam > 0.0 else 0.0
                                score = sl + sr
                                if score > best_score:
                                    best_score = score
                                    best_f = f
                                    best_i = i
                                    best_nl = i - lo + 1
                            vcur = vnext
                else:
                    vmin = row[rows[lo]]
                    vmax = vmin
                    for i in range(lo + 1, hi):
                        v = row[rows[i]]
                        if v < vmin:
                            vmin = v
                        elif v > vmax:
                            vmax = v
                    if vmin == vmax:
                        continue
                    t = vmin + prng_uniform(state) * (vmax - vmin)
                    if t >= vmax:
                        t = vmin
                    GL = 0.0
                    HL = 0.0
                    nl = np.int64(0)
                    for i in range(lo, hi):
                        r = rows[i]
                        if row[r] <= t:
                            GL += g[r]
                            HL += h[r]
                            nl += 1
                    nr = cnt - nl
                    if nl < min_samples_leaf or nr < min_samples_leaf:
                        continue
                    HR = H - HL
                    if HL < min_child_weight or HR < min_child_weight:
                        continue
                    GR = G - GL
                    sl = GL * GL / (HL + lam) if HL + lam > 0.0 else 0.0
                    sr = GR * GR / (HR + lam) if HR + lam > 0.0 else 0.0
                    score = sl + sr
                    if score > best_score:
                        best_score = score
                        best_f = f
                        best_thr = t
                        best_nl = nl

        if best_f < 0 or best_score <= parent_score:
            value[node] = -G / (H + lam) if H + lam > 0.0 else 0.0
            continue

        if split_mode == SPLIT_EXACT:
            va = XT[best_f, order[best_f, best_i]]
            vb = XT[best_f, order[best_f, best_i + 1]]
            best_thr = _midpoint(va, vb)

        feat[node] = best_f
        thr[node] = best_thr
        lchild = n_nodes
        rchild = n_nodes + 1
        n_nodes += 2
        left[node] = lchild
        right[node] = rchild

        rowb = XT[best_f]
        if split_mode == SPLIT_EXACT:
            for i in range(lo, hi):
                r = order[0, i]
                go_left[r] = np.uint8(1) if rowb[r] <= best_thr else np.uint8(0)
            for f in range(n_feat):
                a = lo
                b = 0
                for i in range(lo, hi):
                    r = order[f, i]
                    if go_left[r]:
                        order[f, a] = r
                        a += 1
                    else:
                        tmp_i[b] = r
                        b += 1
                for i in range(b):
                    order[f, a + i] = tmp_i[i]
        else:
            a = lo
            b = 0
            for i in range(lo, hi):
                r = rows[i]
                if rowb[r] <= best_thr:
                    rows[a] = r
                    a += 1
                else:
                    tmp_i[b] = r
                    b += 1
            for i in range(b):
                rows[a + i] = tmp_i[i]

        mid = lo + best_nl
        stack_node[sp] = rchild
        stack_lo[sp] = mid
        stack_hi[sp] = hi
        stack_depth[sp] = depth + 1
        sp += 1
        stack_node[sp] = lchild
        stack_lo[sp] = lo
        stack_hi[sp] = mid
        stack_depth[sp] = depth + 1
        sp += 1

    return (feat[:n_nodes].copy(), thr[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), value[:n_nodes].copy())


# ---------------------------------------------------------------------------
# traversal (row-major X)
# ---------------------------------------------------------------------------

@maybe_jit
def tree_apply(X, feat, thr, left, right):
    """Leaf index reached by every row."""
    n = X.shape[0]
    out = np.empty(n, np.int64)
    for i in range(n):
        node = np.int64(0)
        while feat[node] >= 0:
            if X[i, feat[node]] <= thr[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
    return out


@maybe_jit
def tree_add_values(X, feat, thr, left, right, value, out):
    n = X.shape[0]
    for i in range(n):
        node = np.int64(0)
        while feat[node] >= 0:
            if X[i, feat[node]] <= thr[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] += value[node]


@maybe_jit
def tree_add_probs(X, feat, thr, left, right, probs, out):
    n = X.shape[0]
    n_classes = probs.shape[1]
    for i in range(n):
        node = np.int64(0)
        while feat[node] >= 0:
            if X[i, feat[node]] <= thr[node]:
                node = left[node]
            else:
                node = right[node]
        for k in range(n_classes):
            out[i, k] += probs[node, k]


# ---------------------------------------------------------------------------
# k-nearest-neighbour search
# ---------------------------------------------------------------------------

@maybe_jit
def knn_neighbors(Q, T, k):
    """k nearest training rows per query (euclidean, stable tie order).

    Returns (indices, distances), both (n_queries, k); equal distances keep
    the lower training-row index first.
    """
    nq = Q.shape[0]
    nt = T.shape[0]
    n_feat = Q.shape[1]
    idx = np.empty((nq, k), np.int64)
    dist = np.empty((nq, k), np.float64)
    d = np.empty(nt, np.float64)
    for i in range(nq):
        for j in range(nt):
            s = 0.0
            for f in range(n_feat):
                diff = Q[i, f] - T[j, f]
                s += diff * diff
            d[j] = s
        o = np.argsort(d, kind="mergesort")
        for j in range(k):
            idx[i, j] = o[j]
            dist[i, j] = np.sqrt(d[o[j]])
    return idx, dist
