"""Classical test objectives for validating the optimizer.

Three shapes cover the cases that matter for a sanity check: one convex
bowl (sphere), one highly multimodal surface (rastrigin), and one curved
narrow valley (rosenbrock). The registry is a plain dict so more functions
can be added without touching the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True, eq=False)
class BenchmarkFunction:
    name: str
    dimension: int
    evaluate: Callable[[np.ndarray], float]
    known_minimum: float
    default_bounds: tuple[float, float]
    argmin: np.ndarray


def sphere(x) -> float:
    """Sum of squared components; minimum 0 at the origin."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(x * x))


def rastrigin(x) -> float:
    """10*d + sum(x_i^2 - 10*cos(2*pi*x_i)); minimum 0 at the origin."""
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def rosenbrock(x) -> float:
    """Sum of 100*(x_{i+1} - x_i^2)^2 + (1 - x_i)^2; minimum 0 at all ones."""
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("rosenbrock needs at least 2 dimensions")
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


_REGISTRY: dict[str, tuple[Callable[[np.ndarray], float], tuple[float, float], float, int]] = {
    # name: (function, default bounds, argmin fill value, minimum dimension)
    "sphere": (sphere, (-100.0, 100.0), 0.0, 1),
    "rastrigin": (rastrigin, (-5.12, 5.12), 0.0, 1),
    "rosenbrock": (rosenbrock, (-5.0, 10.0), 1.0, 2),
}


def benchmark_names() -> list[str]:
    return sorted(_REGISTRY)


def get_benchmark(name: str, dimension: int) -> BenchmarkFunction:
    """Instantiate a registered benchmark at the requested dimension."""
    if name not in _REGISTRY:
        raise ValueError(f"unknown benchmark {name!r}; known: {', '.join(benchmark_names())}")
    func, bounds, argmin_fill, min_dim = _REGISTRY[name]
    if dimension < min_dim:
        raise ValueError(f"{name} needs dimension >= {min_dim}")
    return BenchmarkFunction(
        name=name,
        dimension=dimension,
        evaluate=func,
        known_minimum=0.0,
        default_bounds=bounds,
        argmin=np.full(dimension, argmin_fill),
    )
