"""Fitness Dependent Optimizer (FDO) for box-constrained minimization.

FDO keeps a population of scouts, each holding one candidate solution. Every
iteration each scout proposes a displacement ("pace"): its magnitude scales
with the fitness weight, the ratio of the global best objective value to the
scout's own value, and its direction is randomized per dimension. A proposal
is accepted only when it strictly improves the scout; otherwise the
displacement behind the scout's last accepted move is retried, and failing
that the scout keeps its current state. The global best is replaced only by
a strictly better solution, so the recorded convergence curve never
increases.

The objective is treated as a black box ``vector -> float``. Within one
iteration evaluations are independent of each other (the global best used
for pace computation is the snapshot taken at the start of the iteration,
and every scout consumes exactly ``dimension`` random draws), so a pure
objective may be evaluated concurrently without changing results as long as
draws are generated in ascending scout order and accept/reject outcomes are
merged the same way. The implementation here runs the equivalent sequential
schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

Objective = Callable[[np.ndarray], float]

#: Seed used whenever the caller does not supply one, so quickstart runs are
#: reproducible by default.
DEFAULT_SEED = 42


class EvaluationError(RuntimeError):
    """Raised when the objective returns a non-finite value.

    Non-finite objective values are treated as bugs in the fitness function
    rather than as infinitely bad solutions, so they surface immediately.
    The offending position (and, when raised from :func:`optimize`, the
    iteration index) is attached for diagnosis.
    """

    def __init__(self, message: str, position: np.ndarray | None = None,
                 iteration: int | None = None):
        super().__init__(message)
        self.position = position
        self.iteration = iteration


@dataclass(eq=False)
class ScoutBee:
    """One search agent: a position, its cached objective value, and the
    displacement behind its last accepted move (zero until the first one)."""

    position: np.ndarray
    fitness: float
    last_pace: np.ndarray


@dataclass(frozen=True)
class FdoConfig:
    """Optimizer settings.

    Args:
        bounds: One ``(lower, upper)`` pair per dimension. ``lower == upper``
            pins that coordinate; ``lower > upper`` is rejected.
        population: Number of scouts. Fewer than five noticeably hurts
            search quality; one is the hard minimum.
        max_iterations: Iteration budget. Zero is allowed and returns the
            best of the initial population.
        weight_factor: Trades convergence pressure against coverage, in
            [0, 1]. Zero (the default) gives the most stable search.
        seed: Seed for the random stream when none is passed explicitly.
    """

    bounds: tuple[tuple[float, float], ...]
    population: int = 30
    max_iterations: int = 100
    weight_factor: float = 0.0
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        if len(bounds) == 0:
            raise ValueError("bounds must cover at least one dimension")
        for i, (lo, hi) in enumerate(bounds):
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise ValueError(f"bounds for dimension {i} must be finite")
            if lo > hi:
                raise ValueError(f"bounds for dimension {i} are reversed: ({lo}, {hi})")
        if self.population < 1:
            raise ValueError("population must be at least 1")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if not 0.0 <= self.weight_factor <= 1.0:
            raise ValueError("weight_factor must lie in [0, 1]")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    def bound_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        arr = np.asarray(self.bounds, dtype=float)
        return arr[:, 0], arr[:, 1]


@dataclass(frozen=True)
class ConvergenceCurve:
    """Global-best objective value after each iteration, oldest first."""

    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def is_non_increasing(self) -> bool:
        return all(b <= a for a, b in zip(self.values, self.values[1:]))


@dataclass(eq=False)
class OptimizationResult:
    best_position: np.ndarray
    best_fitness: float
    curve: ConvergenceCurve
    iterations_run: int
    evaluations: int


def uniform_bounds(lower: float, upper: float, dimension: int) -> tuple[tuple[float, float], ...]:
    """Repeat one (lower, upper) pair across ``dimension`` dimensions."""
    if dimension < 1:
        raise ValueError("dimension must be at least 1")
    return tuple((float(lower), float(upper)) for _ in range(dimension))


def clamp_to_bounds(position: np.ndarray,
                    bounds: Sequence[tuple[float, float]]) -> np.ndarray:
    """Project every component of ``position`` into its [lower, upper] range."""
    position = np.asarray(position, dtype=float)
    arr = np.asarray(bounds, dtype=float)
    if position.shape != (arr.shape[0],):
        raise ValueError(
            f"position has {position.shape[0]} components but bounds cover {arr.shape[0]}")
    return np.clip(position, arr[:, 0], arr[:, 1])


def fitness_weight(current_fitness: float, global_best_fitness: float,
                   wf: float) -> float | None:
    """Fitness weight fw = |global best / current| - wf.

    Returns ``None`` when the current fitness is exactly zero: the ratio is
    undefined there and the caller must fall back to the random-pace rule.
    """
    if current_fitness == 0.0:
        return None
    return abs(global_best_fitness / current_fitness) - wf


def compute_pace(scout: ScoutBee, global_best: ScoutBee,
                 fw: float | None, rng: np.random.Generator) -> np.ndarray:
    """Displacement for one scout given its fitness weight.

    Draws one fresh r in [-1, 1] per dimension. For fw outside the open
    interval (0, 1), or the ``None`` sentinel, the pace is the scout's own
    position scaled componentwise by r. Otherwise each component moves
    toward the global best (r < 0) or away from it (r >= 0) by fw times the
    distance along that axis.
    """
    if scout.position.shape != global_best.position.shape:
        raise ValueError("scout and global best have different dimensions")
    r = rng.uniform(-1.0, 1.0, scout.position.shape[0])
    if fw is None or not 0.0 < fw < 1.0:
        return scout.position * r
    diff = (scout.position - global_best.position) * fw
    return np.where(r < 0.0, -diff, diff)


def _evaluate(objective: Objective, position: np.ndarray) -> float:
    value = float(objective(position))
    if not np.isfinite(value):
        raise EvaluationError(
            f"objective returned non-finite value {value!r}",
            position=position.copy())
    return value


def _snapshot(scout: ScoutBee) -> ScoutBee:
    return ScoutBee(scout.position.copy(), scout.fitness, scout.last_pace.copy())


def initialize_swarm(config: FdoConfig, objective: Objective,
                     rng: np.random.Generator) -> tuple[list[ScoutBee], ScoutBee]:
    """Sample the initial population uniformly inside the box.

    Every scout's fitness is evaluated and its stored pace starts at zero.
    Returns the swarm together with a snapshot of the best scout.
    """
    lower, upper = config.bound_arrays()
    swarm: list[ScoutBee] = []
    for _ in range(config.population):
        position = rng.uniform(lower, upper)
        value = _evaluate(objective, position)
        swarm.append(ScoutBee(position, value, np.zeros(config.dimension)))
    best = swarm[0]
    for scout in swarm[1:]:
        if scout.fitness < best.fitness:
            best = scout
    return swarm, _snapshot(best)


def step(swarm: list[ScoutBee], global_best: ScoutBee, objective: Objective,
         config: FdoConfig, rng: np.random.Generator) -> tuple[list[ScoutBee], ScoutBee, float]:
    """Advance every scout by one move attempt and refresh the global best.

    Per scout: propose position + pace and accept it only on strict
    improvement, storing the pace for reuse; on rejection retry the stored
    pace; on a second rejection the scout keeps its state. Pace computation
    uses the global best as of the start of the iteration; the global best
    itself is refreshed only after all scouts have moved, and ties keep the
    incumbent.
    """
    lower, upper = config.bound_arrays()
    wf = config.weight_factor
    for scout in swarm:
        fw = fitness_weight(scout.fitness, global_best.fitness, wf)
        pace = compute_pace(scout, global_best, fw, rng)
        candidate = np.clip(scout.position + pace, lower, upper)
        value = _evaluate(objective, candidate)
        if value < scout.fitness:
            scout.position = candidate
            scout.fitness = value
            scout.last_pace = pace
            continue
        retry = np.clip(scout.position + scout.last_pace, lower, upper)
        value = _evaluate(objective, retry)
        if value < scout.fitness:
            # The pace in use is the stored one, so it stays stored.
            scout.position = retry
            scout.fitness = value
    best = global_best
    for scout in swarm:
        if scout.fitness < best.fitness:
            best = scout
    if best is not global_best:
        best = _snapshot(best)
    return swarm, best, best.fitness


def optimize(objective: Objective, config: FdoConfig,
             rng: np.random.Generator | None = None) -> OptimizationResult:
    """Run FDO for ``config.max_iterations`` iterations.

    The curve records the global-best value after each iteration, so its
    length equals the number of iterations run. Evaluation errors raised
    mid-run carry the iteration index. When ``rng`` is omitted a fresh
    generator is seeded from ``config.seed``; identical config and seed give
    identical results.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    calls = 0

    def counted(x: np.ndarray) -> float:
        nonlocal calls
        calls += 1
        return objective(x)

    swarm, best = initialize_swarm(config, counted, rng)
    values: list[float] = []
    for iteration in range(config.max_iterations):
        try:
            swarm, best, _ = step(swarm, best, counted, config, rng)
        except EvaluationError as err:
            err.iteration = iteration
            raise
        values.append(best.fitness)
    return OptimizationResult(
        best_position=best.position.copy(),
        best_fitness=best.fitness,
        curve=ConvergenceCurve(tuple(values)),
        iterations_run=len(values),
        evaluations=calls,
    )
