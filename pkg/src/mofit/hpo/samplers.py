"""The four search strategies: grid, random, genetic and TPE."""

from __future__ import annotations

import itertools
import json
import math

import numpy as np

from .. import kernels as K
from .space import KIND_CATEGORICAL, KIND_GRID, ParamSpec, SearchSpace
from .study import (DIRECTION_MAXIMIZE, STATUS_COMPLETE, STATUS_FAILED, Study,
                    Trial)

GA_TOURNAMENT = 3
GA_ELITE = 1
GA_MUTATION = 0.2

TPE_STARTUP = 10
TPE_GAMMA = 0.25
TPE_CANDIDATES = 24


def _canon(params: dict) -> str:
    return json.dumps(params, sort_keys=True, default=float)


class _Runner:
    """Records trials in order; memoizes the objective per unique params."""

    def __init__(self, study: Study, objective):
        self.study = study
        self.objective = objective
        self._cache: dict[str, tuple[str, float | None, str | None]] = {}

    def evaluate(self, params: dict) -> Trial:
        key = _canon(params)
        if key in self._cache:
            status, value, error = self._cache[key]
        else:
            try:
                value = float(self.objective(dict(params)))
                status, error = STATUS_COMPLETE, None
            except Exception as exc:  # noqa: BLE001 - failed trials are recorded
                status, value, error = STATUS_FAILED, None, f"{type(exc).__name__}: {exc}"
            self._cache[key] = (status, value, error)
        trial = Trial(id=len(self.study.trials), params=dict(params),
                      objective=value, status=status, error=error)
        self.study.trials.append(trial)
        return trial


def run_grid(space: SearchSpace, objective, direction: str) -> Study:
    """Evaluate the full Cartesian product once, in spec order."""
    for spec in space:
        if spec.kind not in (KIND_GRID, KIND_CATEGORICAL):
            raise ValueError(
                f"grid search needs explicit values for {spec.name!r} "
                f"(kind {spec.kind!r})"
            )
    budget = 1
    for spec in space:
        budget *= len(spec.values)
    study = Study(direction=direction, sampler="grid", seed=0, budget=budget)
    runner = _Runner(study, objective)
    for combo in itertools.product(*(spec.values for spec in space)):
        runner.evaluate({spec.name: v for spec, v in zip(space, combo)})
    return study


def run_random(space: SearchSpace, objective, n_trials: int, seed: int,
               direction: str) -> Study:
    """n_trials i.i.d. uniform samples (log-uniform on log-scale params)."""
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    study = Study(direction=direction, sampler="random", seed=seed, budget=n_trials)
    runner = _Runner(study, objective)
    state = K.new_state(seed, 0)
    for _ in range(n_trials):
        runner.evaluate(space.sample(state))
    return study


def run_genetic(space: SearchSpace, objective, population: int, generations: int,
                seed: int, direction: str, tournament: int = GA_TOURNAMENT,
                elite: int = GA_ELITE, p_mutation: float = GA_MUTATION) -> Study:
    """Tournament selection + uniform crossover + per-gene mutation.

    The top `elite` chromosomes carry over unchanged (and are re-recorded as
    trials), so the per-generation best is monotone in the direction.
    """
    if population < 2:
        raise ValueError("population must be >= 2")
    if generations < 1:
        raise ValueError("generations must be >= 1")
    study = Study(direction=direction, sampler="genetic", seed=seed,
                  budget=population * generations)
    runner = _Runner(study, objective)
    state = K.new_state(seed, 0)
    maximize = direction == DIRECTION_MAXIMIZE
    worst = -math.inf if maximize else math.inf

    pop = [space.sample(state) for _ in range(population)]
    for gen in range(generations):
        fitness = []
        for member in pop:
            trial = runner.evaluate(member)
            fitness.append(trial.objective if trial.status == STATUS_COMPLETE else worst)
        if gen == generations - 1:
            break
        key = (lambda i: (-fitness[i], i)) if maximize else (lambda i: (fitness[i], i))
        ranked = sorted(range(population), key=key)

        def pick_parent():
            best = int(K.prng_below(state, population))
            for _ in range(tournament - 1):
                ch = int(K.prng_below(state, population))
                better = fitness[ch] > fitness[best] if maximize else fitness[ch] < fitness[best]
                if better or (fitness[ch] == fitness[best] and ch < best):
                    best = ch
            return pop[best]

        next_pop = [dict(pop[i]) for i in ranked[:elite]]
        while len(next_pop) < population:
            p1 = pick_parent()
            p2 = pick_parent()
            child = {}
            for spec in space:
                child[spec.name] = (p1 if K.prng_uniform(state) < 0.5 else p2)[spec.name]
            for spec in space:
                if K.prng_uniform(state) < p_mutation:
                    child[spec.name] = spec.sample(state)
            next_pop.append(child)
        pop = next_pop
    return study


def _gaussian(state: np.ndarray) -> float:
    # Box-Muller on splitmix uniforms keeps the whole study seed-reproducible
    u1 = float(K.prng_uniform(state))
    u2 = float(K.prng_uniform(state))
    u1 = max(u1, 1e-300)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def _bandwidths(sorted_vals: list[float], lo: float, hi: float) -> list[float]:
    n = len(sorted_vals)
    min_bw = (hi - lo) / min(100, max(n, 1))
    min_bw = max(min_bw, 1e-12)
    out = []
    for i in range(n):
        left = sorted_vals[i] - sorted_vals[i - 1] if i > 0 else 0.0
        right = sorted_vals[i + 1] - sorted_vals[i] if i < n - 1 else 0.0
        out.append(max(left, right, min_bw))
    return out


def _mixture_logpdf(x: float, vals: list[float], bws: list[float]) -> float:
    if not vals:
        return 0.0
    acc = 0.0
    for v, bw in zip(vals, bws):
        z = (x - v) / bw
        acc += math.exp(-0.5 * z * z) / (bw * math.sqrt(2.0 * math.pi))
    return math.log(max(acc / len(vals), 1e-300))


class _NumericDensity:
    def __init__(self, spec: ParamSpec, observed: list[float]):
        lo, hi = spec.transformed_bounds
        self.vals = sorted(spec.transform(v) for v in observed)
        self.bws = _bandwidths(self.vals, lo, hi)
        self.spec = spec

    def draw(self, state: np.ndarray):
        i = int(K.prng_below(state, len(self.vals)))
        t = self.vals[i] + self.bws[i] * _gaussian(state)
        return self.spec.inverse(t)

    def logpdf(self, value) -> float:
        return _mixture_logpdf(self.spec.transform(value), self.vals, self.bws)


class _CategoricalDensity:
    def __init__(self, spec: ParamSpec, observed: list):
        k = len(spec.values)
        counts = {v: 1.0 for v in spec.values}  # add-one smoothing
        for v in observed:
            counts[v] += 1.0
        total = len(observed) + k
        self.probs = {v: counts[v] / total for v in spec.values}
        self.spec = spec

    def draw(self, state: np.ndarray):
        u = float(K.prng_uniform(state))
        acc = 0.0
        for v in self.spec.values:
            acc += self.probs[v]
            if u < acc:
                return v
        return self.spec.values[-1]

    def logpdf(self, value) -> float:
        return math.log(self.probs[value])


def run_tpe(space: SearchSpace, objective, n_trials: int, seed: int,
            direction: str, n_startup: int = TPE_STARTUP,
            gamma: float = TPE_GAMMA, n_candidates: int = TPE_CANDIDATES) -> Study:
    """Tree-structured Parzen estimator sampling.

    The first n_startup trials are random.  Afterwards the complete history
    splits into good (best ceil(gamma*n)) and bad sets; numeric parameters
    get Parzen densities over each set, categoricals get smoothed count
    ratios, candidates are drawn from the good density and the one with the
    highest good/bad likelihood ratio is evaluated.
    """
    if n_startup < 1:
        raise ValueError("n_startup must be >= 1")
    if n_trials <= n_startup:
        # degenerate budget: behaves exactly like random search
        study = run_random(space, objective, n_trials, seed, direction)
        study.sampler = "tpe"
        return study
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must be in (0, 1)")
    study = Study(direction=direction, sampler="tpe", seed=seed, budget=n_trials)
    runner = _Runner(study, objective)
    state = K.new_state(seed, 0)
    maximize = direction == DIRECTION_MAXIMIZE

    for _ in range(n_startup):
        runner.evaluate(space.sample(state))

    while len(study.trials) < n_trials:
        done = study.complete_trials
        if not done:
            runner.evaluate(space.sample(state))
            continue
        ordered = sorted(done, key=lambda t: (-t.objective if maximize else t.objective, t.id))
        n_good = max(1, math.ceil(gamma * len(ordered)))
        good = ordered[:n_good]
        bad = ordered[n_good:]
        if not bad:
            runner.evaluate(space.sample(state))
            continue

        densities = {}
        for spec in space:
            good_vals = [t.params[spec.name] for t in good]
            bad_vals = [t.params[spec.name] for t in bad]
            if spec.is_numeric:
                densities[spec.name] = (_NumericDensity(spec, good_vals),
                                        _NumericDensity(spec, bad_vals))
            else:
                densities[spec.name] = (_CategoricalDensity(spec, good_vals),
                                        _CategoricalDensity(spec, bad_vals))

        best_params = None
        best_score = -math.inf
        for _ in range(n_candidates):
            cand = {}
            score = 0.0
            for spec in space:
                l_dens, g_dens = densities[spec.name]
                value = l_dens.draw(state)
                cand[spec.name] = value
                score += l_dens.logpdf(value) - g_dens.logpdf(value)
            if score > best_score:
                best_score = score
                best_params = cand
        runner.evaluate(best_params)
    return study
