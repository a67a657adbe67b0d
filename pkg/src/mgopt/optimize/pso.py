#!/usr/bin/env python3
"""
.. module optimize.pso
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Global-best particle swarm baseline for the same mixed problem. Particles move continuously
    inside the box and integer coordinates are rounded half-up when a particle is evaluated.
"""

import dataclasses
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import OptimizeResult

from mgopt.exceptions import InvalidParameterError
from mgopt.optimize.common import (
    LossFunction,
    as_bounds,
    as_mask,
    integer_bounds,
    call_loss,
    evaluation_point,
    project,
    scenario_seeds,
)
from mgopt.tools import named_generator
from mgopt.type_aliases import BoolVector, Matrix, Vector

# ===================== What can be exported? =====================
__all__ = ["PsoConfig", "GenerationRecord", "run_pso"]

logger = logging.getLogger(__name__)

INITIAL_SPREADS = ("point", "uniform")


@dataclasses.dataclass(eq=False)
class PsoConfig:
    """
    :param x0: Starting point, shared with the other optimizer.
    :param bounds: ``(p, 2)`` array of ``[min, max]`` rows.
    :param discrete_mask: ``True`` for integer-valued coordinates.
    :param c1: Cognitive coefficient.
    :param c2: Social coefficient.
    :param w: Inertia weight.
    :param population: Particles per generation, each costing one loss evaluation.
    :param v0_range: Interval of the uniform initial velocities.
    :param max_evaluations: Evaluation budget, the initial generation included.
    :param replicates_per_eval: Scenarios averaged inside one loss evaluation.
    :param seed: Seed of the swarm and of every scenario seed the run hands to the loss.
    :param initial_spread: ``"point"`` starts every particle at *x0*; ``"uniform"`` keeps particle 0 at
        *x0* and spreads the rest uniformly over the box.
    :param log_every: Log progress every this many generations.
    """

    x0: Vector
    bounds: Matrix
    discrete_mask: Optional[BoolVector] = None
    c1: float = 2.3
    c2: float = 2.3
    w: float = 1.0
    population: int = 20
    v0_range: Tuple[float, float] = (-1.0, 1.0)
    max_evaluations: int = 1000
    replicates_per_eval: int = 1
    seed: int = 0
    initial_spread: str = "point"
    log_every: int = 10

    def __post_init__(self):
        self.x0 = np.array(self.x0, dtype=float)
        if self.x0.ndim != 1 or self.x0.size == 0:
            raise InvalidParameterError("x0", "must be a nonempty vector")
        self.bounds = as_bounds(self.bounds, self.x0.size)
        self.discrete_mask = as_mask(self.discrete_mask, self.x0.size)
        self.bounds = integer_bounds(self.bounds, self.discrete_mask)
        for name in ("c1", "c2", "w"):
            if not getattr(self, name) >= 0:
                raise InvalidParameterError(name, "must be >= 0, got {0}".format(getattr(self, name)))
        if not self.population >= 2:
            raise InvalidParameterError(
                "population", "must be >= 2, got {0}".format(self.population)
            )
        low, high = self.v0_range
        if not low <= high:
            raise InvalidParameterError("v0_range", "need low <= high, got {0}".format(self.v0_range))
        self.v0_range = (float(low), float(high))
        if not self.max_evaluations >= 0:
            raise InvalidParameterError(
                "max_evaluations", "must be >= 0, got {0}".format(self.max_evaluations)
            )
        if not self.replicates_per_eval >= 1:
            raise InvalidParameterError(
                "replicates_per_eval", "must be >= 1, got {0}".format(self.replicates_per_eval)
            )
        if self.initial_spread not in INITIAL_SPREADS:
            raise InvalidParameterError(
                "initial_spread",
                "must be one of {0}, got {1!r}".format(INITIAL_SPREADS, self.initial_spread),
            )

    @property
    def dimension(self) -> int:
        return self.x0.size

    @property
    def evaluation_budget(self) -> int:
        return self.max_evaluations


@dataclasses.dataclass(frozen=True, eq=False)
class GenerationRecord:
    generation: int
    evaluations: int
    best_position: Vector
    best_measured: float
    best_tracked: float


def run_pso(config: PsoConfig, loss_fn: LossFunction) -> OptimizeResult:
    """
    Global-best particle swarm:

    .. math::

        v \\leftarrow w v + c_1 r_1 (p_{best} - x) + c_2 r_2 (g_{best} - x), \\quad x \\leftarrow \\Pi(x + v),

    with velocities clamped to the box width. All particles of a generation are measured on the same
    scenarios. Generations continue while a whole one fits in the remaining evaluation budget.

    The convergence curve follows the global best re-evaluated under the tracking scenarios
    (``evaluation_seeds``), which is not charged to the budget; its first row, at 0 evaluations, is the
    loss at *x0*.

    :raises OptimizerAbort: when a loss evaluation fails, with the generation index and particle.
    """
    mask, bounds = config.discrete_mask, config.bounds
    lo, hi = bounds[:, 0], bounds[:, 1]
    m, p = config.population, config.dimension
    rng = named_generator(config.seed, "swarm")
    evaluation_seeds = scenario_seeds(config.seed, config.replicates_per_eval, "tracking")
    tracked: Dict[Tuple[float, ...], float] = {}

    def track(position: Vector, k: int) -> float:
        point = evaluation_point(position, mask, bounds)
        key = tuple(point)
        if key not in tracked:
            tracked[key] = call_loss(loss_fn, point, evaluation_seeds, k, position)
        return tracked[key]

    x0 = project(config.x0, bounds)
    initial = track(x0, 0)
    curve = [(0, initial)]
    history: List[GenerationRecord] = []
    best_tracked = initial
    nfev = 0

    def measure(positions: Matrix, generation: int) -> Vector:
        seeds = scenario_seeds(config.seed, config.replicates_per_eval, "generation", generation)
        return np.array(
            [
                call_loss(loss_fn, evaluation_point(x, mask, bounds), seeds, generation, x)
                for x in positions
            ]
        )

    if config.max_evaluations < m:
        x = evaluation_point(x0, mask, bounds)
        return OptimizeResult(
            x=x,
            fun=initial,
            nit=0,
            nfev=0,
            initial_fun=initial,
            history=history,
            curve=np.array(curve, dtype=float),
            evaluation_seeds=evaluation_seeds,
            success=True,
            message="Budget smaller than one generation.",
        )

    positions = np.tile(x0, (m, 1))
    if config.initial_spread == "uniform":
        positions[1:] = lo + (hi - lo) * rng.random((m - 1, p))
    v_max = hi - lo
    velocities = np.clip(rng.uniform(*config.v0_range, size=(m, p)), -v_max, v_max)

    values = measure(positions, 0)
    nfev += m
    pbest, pbest_values = positions.copy(), values.copy()
    g = int(np.argmin(pbest_values))
    gbest, gbest_value = pbest[g].copy(), pbest_values[g]

    generation = 0
    while True:
        best_tracked = min(best_tracked, track(gbest, generation))
        curve.append((nfev, best_tracked))
        history.append(GenerationRecord(generation, nfev, gbest.copy(), gbest_value, best_tracked))
        if config.log_every and (generation + 1) % config.log_every == 0:
            logger.info(
                "PSO generation %d (%d evaluations): best loss = %.6g",
                generation + 1,
                nfev,
                best_tracked,
            )
        if nfev + m > config.max_evaluations:
            break

        generation += 1
        r1, r2 = rng.random((m, p)), rng.random((m, p))
        velocities = (
            config.w * velocities
            + config.c1 * r1 * (pbest - positions)
            + config.c2 * r2 * (gbest - positions)
        )
        velocities = np.clip(velocities, -v_max, v_max)
        positions = project(positions + velocities, bounds)

        values = measure(positions, generation)
        nfev += m
        improved = values < pbest_values
        pbest[improved], pbest_values[improved] = positions[improved], values[improved]
        g = int(np.argmin(pbest_values))
        if pbest_values[g] < gbest_value:
            gbest, gbest_value = pbest[g].copy(), pbest_values[g]

    x = evaluation_point(gbest, mask, bounds)
    return OptimizeResult(
        x=x,
        fun=track(gbest, generation),
        nit=generation + 1,
        nfev=nfev,
        initial_fun=initial,
        history=history,
        curve=np.array(curve, dtype=float),
        evaluation_seeds=evaluation_seeds,
        success=True,
        message="Evaluation budget exhausted.",
    )
