"""Benchmark objectives.

Both functions take a 1-D real vector and return a float; lower is better and
the global minimum is 0 at the origin.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, InvalidInputError

RASTRIGIN_BOUNDS = (-5.12, 5.12)


def _as_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidInputError(f"expected a non-empty 1-D vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("vector has non-finite components")
    return x


def evaluate_rastrigin(x) -> float:
    x = _as_vector(x)
    return float(np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0))


def evaluate_sphere(x) -> float:
    x = _as_vector(x)
    return float(np.dot(x, x))


OBJECTIVES: dict[str, Callable] = {
    "rastrigin": evaluate_rastrigin,
    "sphere": evaluate_sphere,
}


@dataclass(frozen=True)
class ObjectiveSpec:
    name: str
    dimensions: int
    lower_bound: float = RASTRIGIN_BOUNDS[0]
    upper_bound: float = RASTRIGIN_BOUNDS[1]
    optimum_value: float = 0.0

    def __post_init__(self):
        if self.name not in OBJECTIVES:
            raise ConfigError(f"unknown objective {self.name!r}; choose from {sorted(OBJECTIVES)}")
        if int(self.dimensions) != self.dimensions or self.dimensions < 1:
            raise ConfigError(f"dimensions must be a positive integer, got {self.dimensions!r}")
        if not self.lower_bound < self.upper_bound:
            raise ConfigError(
                f"lower_bound ({self.lower_bound}) must be below upper_bound ({self.upper_bound})"
            )

    @property
    def function(self) -> Callable:
        return OBJECTIVES[self.name]

    def __call__(self, x) -> float:
        return self.function(x)
