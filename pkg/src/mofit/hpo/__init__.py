"""Hyperparameter optimization: search spaces, samplers, studies."""

from .objective import DEFAULT_FOLDS, cv_objective, direction_for, make_cv_objective
from .samplers import run_genetic, run_grid, run_random, run_tpe
from .space import (KIND_CATEGORICAL, KIND_CONTINUOUS, KIND_GRID, KIND_INTEGER,
                    ParamSpec, SearchSpace, categorical_spec, continuous_spec,
                    grid_spec, integer_spec, space_of)
from .study import (DIRECTION_MAXIMIZE, DIRECTION_MINIMIZE, STATUS_COMPLETE,
                    STATUS_FAILED, Study, Trial, history)

__all__ = [
    "ParamSpec", "SearchSpace", "space_of",
    "integer_spec", "continuous_spec", "categorical_spec", "grid_spec",
    "KIND_INTEGER", "KIND_CONTINUOUS", "KIND_CATEGORICAL", "KIND_GRID",
    "Study", "Trial", "history",
    "DIRECTION_MAXIMIZE", "DIRECTION_MINIMIZE", "STATUS_COMPLETE", "STATUS_FAILED",
    "run_grid", "run_random", "run_genetic", "run_tpe",
    "cv_objective", "make_cv_objective", "direction_for", "DEFAULT_FOLDS",
]
