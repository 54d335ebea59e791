"""Benchmark runner: tasks x algorithms x samplers over a worker pool."""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .. import algorithms
from ..algorithms import ALGORITHM_LABELS
from ..dataset import (load_csv_file, prepare_bodyfat,
                       prepare_obesity_classification, prepare_weight_regression,
                       split)
from ..dataset.types import SOURCE_BODYFAT, SOURCE_OBESITY, SplitPair
from ..hpo import (direction_for, make_cv_objective, run_genetic, run_grid,
                   run_random, run_tpe)
from ..hpo.study import Study
from ..metrics import classification_report, regression_report
from .config import (SAMPLER_GENETIC, SAMPLER_GRID, SAMPLER_LABELS,
                     SAMPLER_RANDOM, SAMPLER_TPE, TASK_BODYFAT, TASK_OBESITY,
                     TASK_WEIGHT, BenchmarkConfig, grid_space, search_space)

TABLE_TITLES = {
    TASK_OBESITY: "Accuracy of predicted obesity level",
    TASK_WEIGHT: "Metrics of predicted body weight",
    TASK_BODYFAT: "Metrics of predicted body-fat percentage",
}


def derive_seed(master: int, *parts) -> int:
    text = "|".join([str(master), *map(str, parts)])
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "little") & 0x7FFFFFFFFFFFFFFF


def load_task_split(config: BenchmarkConfig, task_id: str) -> SplitPair:
    """Prepare and split one task's dataset; pure function of the config."""
    if task_id == TASK_OBESITY:
        table = load_csv_file(config.csv_path(SOURCE_OBESITY), SOURCE_OBESITY)
        ds = prepare_obesity_classification(table)
        stratified = True
    elif task_id == TASK_WEIGHT:
        table = load_csv_file(config.csv_path(SOURCE_OBESITY), SOURCE_OBESITY)
        ds = prepare_weight_regression(table)
        stratified = False
    elif task_id == TASK_BODYFAT:
        table = load_csv_file(config.csv_path(SOURCE_BODYFAT), SOURCE_BODYFAT)
        ds = prepare_bodyfat(table)
        stratified = False
    else:
        raise ValueError(f"unknown task {task_id!r}")
    seed = derive_seed(config.master_seed, task_id, "split")
    return split(ds, config.split_ratio, seed=seed, stratified=stratified)


@dataclass
class CellResult:
    task: str
    algorithm: str
    sampler: str
    status: str = "complete"
    error: str | None = None
    best_params: dict = field(default_factory=dict)
    cv_objective: float | None = None
    n_trials: int = 0
    metrics: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {
            "task": self.task, "algorithm": self.algorithm, "sampler": self.sampler,
            "status": self.status, "error": self.error,
            "best_params": self.best_params, "cv_objective": self.cv_objective,
            "n_trials": self.n_trials, "metrics": self.metrics,
        }


@dataclass
class ResultTable:
    task: str
    kind: str  # classification | regression
    cells: dict[tuple[str, str], CellResult]
    metadata: dict

    def cell(self, algorithm: str, sampler: str) -> CellResult:
        return self.cells[(algorithm, sampler)]

    def all_complete(self) -> bool:
        return all(c.status == "complete" for c in self.cells.values())

    def to_doc(self) -> dict:
        algos = sorted({a for a, _ in self.cells})
        return {
            "format": "mofit-table",
            "version": 1,
            "task": self.task,
            "kind": self.kind,
            "cells": {
                a: {s: self.cells[(a, s)].to_doc()
                    for _a, s in sorted(self.cells) if _a == a}
                for a in algos
            },
            "metadata": self.metadata,
        }

    @staticmethod
    def from_doc(doc: dict) -> "ResultTable":
        cells = {}
        for a, by_sampler in doc["cells"].items():
            for s, c in by_sampler.items():
                cells[(a, s)] = CellResult(
                    task=c["task"], algorithm=c["algorithm"], sampler=c["sampler"],
                    status=c["status"], error=c.get("error"),
                    best_params=c.get("best_params", {}),
                    cv_objective=c.get("cv_objective"),
                    n_trials=c.get("n_trials", 0), metrics=c.get("metrics", {}))
        return ResultTable(task=doc["task"], kind=doc["kind"], cells=cells,
                           metadata=doc.get("metadata", {}))

    def render_text(self, samplers: tuple[str, ...], algorithms: tuple[str, ...]) -> str:
        lines = [f"{TABLE_TITLES.get(self.task, self.task)} ({self.task})"]
        headers = [SAMPLER_LABELS.get(s, s) for s in samplers]
        if self.kind == "classification":
            lines.append("  ".join(["{:<14}".format("Algorithm")] +
                                   [f"{h:>9}" for h in headers]))
            for a in algorithms:
                row = [f"{ALGORITHM_LABELS.get(a, a):<14}"]
                for s in samplers:
                    c = self.cells.get((a, s))
                    row.append(f"{c.metrics.get('accuracy', float('nan')):>9.2f}"
                               if c and c.status == "complete" else f"{'failed':>9}")
                lines.append("  ".join(row))
        else:
            lines.append("  ".join(["{:<14}".format("Model"), f"{'Metric':<6}"] +
                                   [f"{h:>9}" for h in headers]))
            for a in algorithms:
                for metric in ("rmse", "mae", "mape"):
                    row = ["{:<14}".format(ALGORITHM_LABELS.get(a, a) if metric == "rmse" else ""),
                           f"{metric.upper():<6}"]
                    for s in samplers:
                        c = self.cells.get((a, s))
                        if c and c.status == "complete":
                            value = c.metrics.get(metric, float("nan"))
                            row.append(f"{value:>9.3f}")
                        else:
                            row.append(f"{'failed':>9}")
                    lines.append("  ".join(row))
        return "\n".join(lines) + "\n"


def tune_cell(task_id: str, algorithm_id: str, sampler_id: str,
              train, config: BenchmarkConfig) -> Study:
    """HPO stage: consumes the training split only."""
    fold_seed = derive_seed(config.master_seed, task_id, "cv")
    objective = make_cv_objective(algorithm_id, train, k_folds=config.cv_folds,
                                  seed=fold_seed)
    direction = direction_for(train)
    sampler_seed = derive_seed(config.master_seed, task_id, algorithm_id, sampler_id)
    if sampler_id == SAMPLER_GRID:
        return run_grid(grid_space(algorithm_id), objective, direction)
    if sampler_id == SAMPLER_RANDOM:
        return run_random(search_space(algorithm_id), objective,
                          config.n_trials, sampler_seed, direction)
    if sampler_id == SAMPLER_GENETIC:
        population = min(config.ga_population, config.n_trials)
        return run_genetic(search_space(algorithm_id), objective, population,
                           max(1, config.n_trials // population),
                           sampler_seed, direction)
    if sampler_id == SAMPLER_TPE:
        return run_tpe(search_space(algorithm_id), objective,
                       config.n_trials, sampler_seed, direction)
    raise ValueError(f"unknown sampler {sampler_id!r}")


def evaluate_cell(task_id: str, algorithm_id: str, train, test,
                  best_params: dict, config: BenchmarkConfig) -> dict:
    """Refit the winning params on the full training split; score on test."""
    refit_seed = derive_seed(config.master_seed, task_id, algorithm_id, "refit")
    model = algorithms.fit(algorithm_id, train, best_params, seed=refit_seed)
    pred = model.predict_batch(test.X)
    if train.target_kind.is_classification:
        return classification_report(test.y, pred).as_dict()
    return regression_report(test.y, pred).as_dict()


def run_cell(task_id: str, algorithm_id: str, sampler_id: str,
             pair: SplitPair, config: BenchmarkConfig) -> tuple[CellResult, Study | None]:
    try:
        study = tune_cell(task_id, algorithm_id, sampler_id, pair.train, config)
        best = study.best_trial
        metrics = evaluate_cell(task_id, algorithm_id, pair.train, pair.test,
                                best.params, config)
        result = CellResult(task=task_id, algorithm=algorithm_id, sampler=sampler_id,
                            best_params=best.params, cv_objective=best.objective,
                            n_trials=len(study.trials), metrics=metrics)
        return result, study
    except Exception as exc:  # noqa: BLE001 - a failed cell must not kill the run
        result = CellResult(task=task_id, algorithm=algorithm_id, sampler=sampler_id,
                            status="failed", error=f"{type(exc).__name__}: {exc}")
        return result, None


_worker_splits: dict[tuple, SplitPair] = {}


def _run_cell_job(config_doc: dict, task_id: str, algorithm_id: str,
                  sampler_id: str) -> tuple[str, str, str, dict, dict | None, float]:
    config = BenchmarkConfig.from_doc(config_doc)
    key = (config.obesity_csv, config.bodyfat_csv, config.master_seed,
           config.split_ratio, task_id)
    if key not in _worker_splits:
        _worker_splits[key] = load_task_split(config, task_id)
    pair = _worker_splits[key]
    start = time.perf_counter()
    result, study = run_cell(task_id, algorithm_id, sampler_id, pair, config)
    elapsed = time.perf_counter() - start
    return (task_id, algorithm_id, sampler_id, result.to_doc(),
            study.to_doc() if study is not None else None, elapsed)


def run_benchmark(config: BenchmarkConfig,
                  write_outputs: bool = True) -> list[ResultTable]:
    """Full sweep; cells run as independent jobs on a process pool."""
    jobs = [(t, a, s) for t in config.tasks for a in config.algorithms
            for s in config.samplers]
    n_workers = config.workers or multiprocessing.cpu_count()
    results: dict[tuple, dict] = {}
    studies: dict[tuple, dict | None] = {}
    timings: dict[str, float] = {}
    config_doc = config.to_doc()
    wall_start = time.perf_counter()
    if n_workers > 1 and len(jobs) > 1:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=n_workers, mp_context=ctx) as pool:
            futures = [pool.submit(_run_cell_job, config_doc, *job) for job in jobs]
            for fut in futures:
                task_id, algo, sampler, res_doc, study_doc, elapsed = fut.result()
                results[(task_id, algo, sampler)] = res_doc
                studies[(task_id, algo, sampler)] = study_doc
                timings[f"{task_id}/{algo}/{sampler}"] = elapsed
    else:
        for job in jobs:
            task_id, algo, sampler, res_doc, study_doc, elapsed = _run_cell_job(config_doc, *job)
            results[(task_id, algo, sampler)] = res_doc
            studies[(task_id, algo, sampler)] = study_doc
            timings[f"{task_id}/{algo}/{sampler}"] = elapsed
    wall = time.perf_counter() - wall_start

    tables: list[ResultTable] = []
    for task_id in config.tasks:
        kind = "classification" if task_id == TASK_OBESITY else "regression"
        cells = {}
        for a in config.algorithms:
            for s in config.samplers:
                cells[(a, s)] = CellResult(**{
                    k: v for k, v in results[(task_id, a, s)].items()
                })
        metadata = {
            "master_seed": config.master_seed,
            "n_trials": config.n_trials,
            "ga_population": config.ga_population,
            "cv_folds": config.cv_folds,
            "split_ratio": config.split_ratio,
        }
        tables.append(ResultTable(task=task_id, kind=kind, cells=cells,
                                  metadata=metadata))

    if write_outputs:
        out = Path(config.output_dir)
        (out / "tables").mkdir(parents=True, exist_ok=True)
        (out / "studies").mkdir(parents=True, exist_ok=True)
        config.save(out / "config.json")
        for table in tables:
            doc = json.dumps(table.to_doc(), indent=1, sort_keys=True)
            (out / "tables" / f"{table.task}.json").write_text(doc)
            text = table.render_text(config.samplers, config.algorithms)
            (out / "tables" / f"{table.task}.txt").write_text(text)
        for (task_id, a, s), study_doc in studies.items():
            if study_doc is not None:
                path = out / "studies" / f"{task_id}__{a}__{s}.json"
                path.write_text(json.dumps(study_doc, indent=1))
        # wall-clock facts live apart from the deterministic artifacts
        log = {"wall_seconds": wall, "workers": n_workers, "cells": timings,
               "finished_unix": time.time()}
        (out / "run_log.json").write_text(json.dumps(log, indent=1))
    return tables
