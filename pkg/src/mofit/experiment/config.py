"""Benchmark configuration: tasks, budgets, seeds and search spaces.

The search spaces and budget parity rules live here, versioned with the
package, so a config file plus the package version pins a full run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..algorithms import (ALGO_DECISION_TREE, ALGO_EXTRA_TREES, ALGO_GBM,
                          ALGO_KNN, ALGO_RANDOM_FOREST, ALGORITHM_IDS)
from ..hpo.space import (SearchSpace, categorical_spec, continuous_spec,
                         grid_spec, integer_spec, space_of)

TASK_OBESITY = "obesity_level"
TASK_WEIGHT = "body_weight"
TASK_BODYFAT = "body_fat"
TASK_IDS = (TASK_OBESITY, TASK_WEIGHT, TASK_BODYFAT)

SAMPLER_RANDOM = "random"
SAMPLER_GRID = "grid"
SAMPLER_GENETIC = "genetic"
SAMPLER_TPE = "tpe"
SAMPLER_IDS = (SAMPLER_RANDOM, SAMPLER_GRID, SAMPLER_GENETIC, SAMPLER_TPE)

SAMPLER_LABELS = {
    SAMPLER_RANDOM: "RSearch",
    SAMPLER_GRID: "GSearch",
    SAMPLER_GENETIC: "Genetic",
    SAMPLER_TPE: "Optuna",
}

SPACES_VERSION = 1


def search_space(algorithm_id: str) -> SearchSpace:
    """Sampling space for the random, genetic and TPE strategies."""
    if algorithm_id in (ALGO_RANDOM_FOREST, ALGO_EXTRA_TREES):
        return space_of(
            integer_spec("n_trees", 50, 400),
            integer_spec("max_depth", 4, 24),
            integer_spec("min_samples_split", 2, 10),
            categorical_spec("max_features", ("sqrt", "all")),
        )
    if algorithm_id == ALGO_DECISION_TREE:
        return space_of(
            integer_spec("max_depth", 2, 24),
            integer_spec("min_samples_split", 2, 16),
            integer_spec("min_samples_leaf", 1, 8),
        )
    if algorithm_id == ALGO_KNN:
        return space_of(
            integer_spec("k", 1, 30),
            categorical_spec("weighting", ("uniform", "inverse-distance")),
        )
    if algorithm_id == ALGO_GBM:
        return space_of(
            integer_spec("n_rounds", 50, 400),
            continuous_spec("learning_rate", 0.01, 0.3, log_scale=True),
            integer_spec("max_depth", 2, 8),
            continuous_spec("lam", 0.0, 5.0),
            continuous_spec("subsample", 0.6, 1.0),
        )
    raise ValueError(f"unknown algorithm {algorithm_id!r}")


def grid_space(algorithm_id: str) -> SearchSpace:
    """Explicit grids sized so the Cartesian product lands near 50 points."""
    if algorithm_id in (ALGO_RANDOM_FOREST, ALGO_EXTRA_TREES):
        return space_of(
            grid_spec("n_trees", (50, 150, 300)),
            grid_spec("max_depth", (4, 8, 16, 24)),
            grid_spec("min_samples_split", (2, 8)),
            grid_spec("max_features", ("sqrt", "all")),
        )  # 48 points
    if algorithm_id == ALGO_DECISION_TREE:
        return space_of(
            grid_spec("max_depth", (2, 4, 8, 12, 16, 24)),
            grid_spec("min_samples_split", (2, 4, 8, 16)),
            grid_spec("min_samples_leaf", (1, 4)),
        )  # 48 points
    if algorithm_id == ALGO_KNN:
        return space_of(
            grid_spec("k", tuple(range(1, 26))),
            grid_spec("weighting", ("uniform", "inverse-distance")),
        )  # 50 points
    if algorithm_id == ALGO_GBM:
        return space_of(
            grid_spec("n_rounds", (50, 100, 200)),
            grid_spec("learning_rate", (0.03, 0.1, 0.3)),
            grid_spec("max_depth", (2, 4, 6)),
            grid_spec("lam", (0.0, 2.0)),
            grid_spec("subsample", (1.0,)),
        )  # 54 points
    raise ValueError(f"unknown algorithm {algorithm_id!r}")


@dataclass(frozen=True)
class BenchmarkConfig:
    obesity_csv: str
    bodyfat_csv: str
    output_dir: str = "bench_out"
    master_seed: int = 917
    n_trials: int = 50          # random / TPE budget per cell
    ga_population: int = 10     # genetic budget = population x generations
    cv_folds: int = 3
    split_ratio: float = 0.8
    workers: int = 0            # 0 = one per CPU
    tasks: tuple[str, ...] = TASK_IDS
    algorithms: tuple[str, ...] = ALGORITHM_IDS
    samplers: tuple[str, ...] = SAMPLER_IDS

    def __post_init__(self):
        if self.n_trials < 1 or self.ga_population < 2 or self.cv_folds < 2:
            raise ValueError("budgets must be positive (>=2 for population/folds)")
        for t in self.tasks:
            if t not in TASK_IDS:
                raise ValueError(f"unknown task {t!r}")
        for a in self.algorithms:
            if a not in ALGORITHM_IDS:
                raise ValueError(f"unknown algorithm {a!r}")
        for s in self.samplers:
            if s not in SAMPLER_IDS:
                raise ValueError(f"unknown sampler {s!r}")

    @property
    def ga_generations(self) -> int:
        return max(1, self.n_trials // self.ga_population)

    def csv_path(self, source_id: str) -> Path:
        return Path(self.obesity_csv if source_id == "obesity" else self.bodyfat_csv)

    def to_doc(self) -> dict:
        return {
            "obesity_csv": self.obesity_csv,
            "bodyfat_csv": self.bodyfat_csv,
            "output_dir": self.output_dir,
            "master_seed": self.master_seed,
            "n_trials": self.n_trials,
            "ga_population": self.ga_population,
            "cv_folds": self.cv_folds,
            "split_ratio": self.split_ratio,
            "workers": self.workers,
            "tasks": list(self.tasks),
            "algorithms": list(self.algorithms),
            "samplers": list(self.samplers),
            "spaces_version": SPACES_VERSION,
        }

    @staticmethod
    def from_doc(doc: dict) -> "BenchmarkConfig":
        doc = dict(doc)
        doc.pop("spaces_version", None)
        for key in ("tasks", "algorithms", "samplers"):
            if key in doc:
                doc[key] = tuple(doc[key])
        return BenchmarkConfig(**doc)

    @staticmethod
    def load(path: str | Path) -> "BenchmarkConfig":
        return BenchmarkConfig.from_doc(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_doc(), indent=1))

    def override(self, **kwargs) -> "BenchmarkConfig":
        return replace(self, **kwargs)
