"""Benchmark orchestration and deployment bundle export."""

from .bundle import DEFAULT_SELECTIONS, export_models, load_bundle_manifest
from .config import (SAMPLER_IDS, TASK_BODYFAT, TASK_IDS, TASK_OBESITY,
                     TASK_WEIGHT, BenchmarkConfig, grid_space, search_space)
from .runner import (CellResult, ResultTable, derive_seed, load_task_split,
                     run_benchmark, run_cell, tune_cell)

__all__ = [
    "BenchmarkConfig", "search_space", "grid_space",
    "TASK_IDS", "TASK_OBESITY", "TASK_WEIGHT", "TASK_BODYFAT", "SAMPLER_IDS",
    "run_benchmark", "run_cell", "tune_cell", "load_task_split",
    "CellResult", "ResultTable", "derive_seed",
    "export_models", "load_bundle_manifest", "DEFAULT_SELECTIONS",
]
