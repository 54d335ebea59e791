"""Declarative hyperparameter search spaces."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels as K

KIND_INTEGER = "integer"
KIND_CONTINUOUS = "continuous"
KIND_CATEGORICAL = "categorical"
KIND_GRID = "grid"


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str
    lo: float | None = None
    hi: float | None = None
    log_scale: bool = False
    values: tuple = ()

    def __post_init__(self):
        if self.kind in (KIND_INTEGER, KIND_CONTINUOUS):
            if self.lo is None or self.hi is None or not self.lo < self.hi:
                raise ValueError(f"{self.name}: need lo < hi")
            if self.log_scale and self.lo <= 0:
                raise ValueError(f"{self.name}: log scale requires lo > 0")
        elif self.kind in (KIND_CATEGORICAL, KIND_GRID):
            if not self.values:
                raise ValueError(f"{self.name}: value list must be nonempty")
        else:
            raise ValueError(f"{self.name}: unknown kind {self.kind!r}")

    @property
    def is_numeric(self) -> bool:
        return self.kind in (KIND_INTEGER, KIND_CONTINUOUS)

    def sample(self, state: np.ndarray):
        if self.kind == KIND_INTEGER:
            span = int(self.hi) - int(self.lo) + 1
            return int(self.lo) + int(K.prng_below(state, span))
        if self.kind == KIND_CONTINUOUS:
            u = float(K.prng_uniform(state))
            if self.log_scale:
                return float(math.exp(math.log(self.lo) + u * (math.log(self.hi) - math.log(self.lo))))
            return float(self.lo + u * (self.hi - self.lo))
        return self.values[int(K.prng_below(state, len(self.values)))]

    def contains(self, value) -> bool:
        if self.kind == KIND_INTEGER:
            return isinstance(value, (int, np.integer)) and self.lo <= value <= self.hi
        if self.kind == KIND_CONTINUOUS:
            return isinstance(value, (int, float, np.floating)) and self.lo <= value <= self.hi
        return value in self.values

    def clip(self, value):
        """Snap a numeric proposal back into bounds (used by model-based samplers)."""
        if self.kind == KIND_INTEGER:
            return int(min(max(round(value), self.lo), self.hi))
        if self.kind == KIND_CONTINUOUS:
            return float(min(max(value, self.lo), self.hi))
        return value

    def transform(self, value) -> float:
        """Numeric value on the axis densities are estimated on."""
        return math.log(value) if self.log_scale else float(value)

    def inverse(self, t: float):
        value = math.exp(t) if self.log_scale else t
        return self.clip(value)

    @property
    def transformed_bounds(self) -> tuple[float, float]:
        if self.log_scale:
            return math.log(self.lo), math.log(self.hi)
        return float(self.lo), float(self.hi)


def integer_spec(name: str, lo: int, hi: int) -> ParamSpec:
    return ParamSpec(name=name, kind=KIND_INTEGER, lo=lo, hi=hi)


def continuous_spec(name: str, lo: float, hi: float, log_scale: bool = False) -> ParamSpec:
    return ParamSpec(name=name, kind=KIND_CONTINUOUS, lo=lo, hi=hi, log_scale=log_scale)


def categorical_spec(name: str, values) -> ParamSpec:
    return ParamSpec(name=name, kind=KIND_CATEGORICAL, values=tuple(values))


def grid_spec(name: str, values) -> ParamSpec:
    return ParamSpec(name=name, kind=KIND_GRID, values=tuple(values))


@dataclass(frozen=True)
class SearchSpace:
    specs: tuple[ParamSpec, ...]

    def __post_init__(self):
        names = [s.name for s in self.specs]
        if len(set(names)) != len(names):
            raise ValueError("duplicate parameter names")

    def __iter__(self):
        return iter(self.specs)

    def __len__(self):
        return len(self.specs)

    def spec(self, name: str) -> ParamSpec:
        for s in self.specs:
            if s.name == name:
                return s
        raise KeyError(name)

    def sample(self, state: np.ndarray) -> dict:
        return {s.name: s.sample(state) for s in self.specs}

    def contains(self, params: dict) -> bool:
        if set(params) != {s.name for s in self.specs}:
            return False
        return all(s.contains(params[s.name]) for s in self.specs)


def space_of(*specs: ParamSpec) -> SearchSpace:
    return SearchSpace(specs=tuple(specs))
