#!/usr/bin/env python3
"""
.. module optimize.mspsa
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Mixed discrete-continuous simultaneous perturbation stochastic approximation with box
    projection. Integer coordinates are measured on the two integers around a lattice midpoint, the
    working iterate stays continuous, and integers are rounded half-up only when a point is reported.
"""

import dataclasses
import logging
import warnings
from typing import List, NamedTuple, Optional, Sequence

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
    lattice_midpoint,
    perturbation_magnitudes,
    project,
    scenario_seeds,
)
from mgopt.tools import SeedLike, as_generator, named_generator
from mgopt.type_aliases import BoolVector, Matrix, Vector

# ===================== What can be exported? =====================
__all__ = [
    "GainSchedule",
    "MspsaConfig",
    "IterateRecord",
    "GradientEstimate",
    "perturbation",
    "gradient_estimate",
    "run_mspsa",
]

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class GainSchedule:
    """
    Step and perturbation gains :math:`a_k = a / (k + 1 + A)^\\alpha` and :math:`c_k = c / (k + 1)^\\gamma`.
    Values outside the usual range :math:`0 < \\gamma < \\alpha \\le 1` are accepted with a warning.
    """

    a: float
    c: float
    A: float = 0.0
    alpha: float = 0.602
    gamma: float = 0.101

    def __post_init__(self):
        if not self.a >= 0:
            raise InvalidParameterError("a", "must be >= 0, got {0}".format(self.a))
        if not self.c > 0:
            raise InvalidParameterError("c", "must be > 0, got {0}".format(self.c))
        if not self.A >= 0:
            raise InvalidParameterError("A", "must be >= 0, got {0}".format(self.A))
        if self.a == 0:
            warnings.warn("Gain a = 0: the iterate will never move!", stacklevel=3)
        if not 0 < self.gamma < self.alpha <= 1:
            warnings.warn(
                "Gain exponents alpha = {0}, gamma = {1} are outside 0 < gamma < alpha <= 1; "
                "convergence is not guaranteed.".format(self.alpha, self.gamma),
                stacklevel=3,
            )

    def a_k(self, k: int) -> float:
        return self.a / (k + 1 + self.A) ** self.alpha

    def c_k(self, k: int) -> float:
        return self.c / (k + 1) ** self.gamma


@dataclasses.dataclass(eq=False)
class MspsaConfig:
    """
    :param gains: The gain schedule.
    :param x0: Starting point; projected into the box before the first iteration.
    :param bounds: ``(p, 2)`` array of ``[min, max]`` rows.
    :param discrete_mask: ``True`` for integer-valued coordinates; all continuous when omitted.
    :param max_iterations: Iteration budget; each iteration costs two loss evaluations.
    :param replicates_per_eval: Scenarios averaged inside one loss evaluation.
    :param seed: Seed of the perturbations and of every scenario seed the run hands to the loss.
    :param common_random_numbers: Measure both sides of a perturbation on the same scenarios.
    :param stall_tolerance: Relative improvement of the best loss below which a window counts as stalled.
    :param stall_window: Iterations per stall window; ``None`` disables early termination.
    :param max_difference: Clip :math:`|y^+ - y^-|` to this value before forming the gradient.
    :param track_loss: Evaluate the loss at every new iterate for the convergence curve. These evaluations
        are not counted against the budget.
    :param log_every: Log progress every this many iterations.
    """

    gains: GainSchedule
    x0: Vector
    bounds: Matrix
    discrete_mask: Optional[BoolVector] = None
    max_iterations: int = 500
    replicates_per_eval: int = 1
    seed: int = 0
    common_random_numbers: bool = True
    stall_tolerance: float = 1e-6
    stall_window: Optional[int] = 50
    max_difference: Optional[float] = None
    track_loss: bool = True
    log_every: int = 50

    def __post_init__(self):
        self.x0 = np.array(self.x0, dtype=float)
        if self.x0.ndim != 1 or self.x0.size == 0:
            raise InvalidParameterError("x0", "must be a nonempty vector")
        self.bounds = as_bounds(self.bounds, self.x0.size)
        self.discrete_mask = as_mask(self.discrete_mask, self.x0.size)
        self.bounds = integer_bounds(self.bounds, self.discrete_mask)
        if not self.max_iterations >= 0:
            raise InvalidParameterError(
                "max_iterations", "must be >= 0, got {0}".format(self.max_iterations)
            )
        if not self.replicates_per_eval >= 1:
            raise InvalidParameterError(
                "replicates_per_eval", "must be >= 1, got {0}".format(self.replicates_per_eval)
            )
        if not self.stall_tolerance >= 0:
            raise InvalidParameterError(
                "stall_tolerance", "must be >= 0, got {0}".format(self.stall_tolerance)
            )
        if self.stall_window is not None and not self.stall_window >= 1:
            raise InvalidParameterError(
                "stall_window", "must be >= 1 or None, got {0}".format(self.stall_window)
            )
        if self.max_difference is not None and not self.max_difference > 0:
            raise InvalidParameterError(
                "max_difference", "must be > 0 or None, got {0}".format(self.max_difference)
            )

    @property
    def dimension(self) -> int:
        return self.x0.size

    @property
    def evaluation_budget(self) -> int:
        return 2 * self.max_iterations


@dataclasses.dataclass(frozen=True, eq=False)
class IterateRecord:
    """
    One iteration: the working iterate it started from, the perturbation, both measurements, the gradient
    estimate and (when tracked) the loss at the next iterate.
    """

    k: int
    theta: Vector
    delta: Vector
    loss_plus: float
    loss_minus: float
    gradient_estimate: Vector
    loss_current: Optional[float] = None


class GradientEstimate(NamedTuple):
    gradient: Vector
    loss_plus: float
    loss_minus: float


def perturbation(dimension: int, seed: SeedLike) -> Vector:
    """
    Independent symmetric Bernoulli :math:`\\pm 1` entries.

    :param dimension: Number of coordinates.
    :param seed: A ``numpy.random.Generator`` (advanced in place) or an integer seed.
    """
    if not dimension >= 1:
        raise InvalidParameterError("dimension", "must be >= 1, got {0}".format(dimension))
    return as_generator(seed).integers(0, 2, size=int(dimension)) * 2.0 - 1.0


def gradient_estimate(
    theta,
    delta,
    c_vector,
    loss_fn: LossFunction,
    seeds_plus: Sequence[int] = (),
    seeds_minus: Optional[Sequence[int]] = None,
    discrete_mask: Optional[BoolVector] = None,
    bounds: Optional[Matrix] = None,
    max_difference: Optional[float] = None,
    k: int = 0,
) -> GradientEstimate:
    """
    Two-measurement simultaneous perturbation gradient estimate,
    :math:`\\hat g_i = (y^+ - y^-) / (2 C_i \\Delta_i)`.

    Measurements are taken at the lattice midpoint of *theta* (identity for continuous coordinates)
    plus and minus :math:`C \\odot \\Delta`, projected into *bounds* when given. Coordinates with a zero
    magnitude in *c_vector* get a zero estimate.

    :param theta: The working iterate.
    :param delta: The :math:`\\pm 1` perturbation.
    :param c_vector: Per-coordinate perturbation magnitudes, nonnegative.
    :param loss_fn: ``loss_fn(point, seeds)``.
    :param seeds_plus: Scenario seeds of the ``+`` measurement.
    :param seeds_minus: Scenario seeds of the ``-`` measurement; the ``+`` seeds when omitted.
    :param discrete_mask: Integer coordinates.
    :param bounds: Box to project the measurement points into.
    :param max_difference: Clip :math:`|y^+ - y^-|` to this value.
    :param k: Iteration index, for diagnostics.
    """
    theta = np.asarray(theta, dtype=float)
    delta = np.asarray(delta, dtype=float)
    c_vector = np.broadcast_to(np.asarray(c_vector, dtype=float), theta.shape)
    if np.any(c_vector < 0):
        raise InvalidParameterError("c_vector", "perturbation magnitudes must be >= 0")

    centre = theta.copy()
    if discrete_mask is not None and bounds is not None:
        centre = lattice_midpoint(theta, np.asarray(discrete_mask, dtype=bool), bounds)
    plus = centre + c_vector * delta
    minus = centre - c_vector * delta
    if bounds is not None:
        plus, minus = project(plus, bounds), project(minus, bounds)

    y_plus = call_loss(loss_fn, plus, seeds_plus, k, theta)
    y_minus = call_loss(
        loss_fn, minus, seeds_plus if seeds_minus is None else seeds_minus, k, theta
    )
    difference = y_plus - y_minus
    if max_difference is not None and abs(difference) > max_difference:
        logger.debug("Iteration %d: clipping |y+ - y-| = %.6g", k, abs(difference))
        difference = np.copysign(max_difference, difference)

    gradient = np.zeros_like(theta)
    moving = c_vector > 0
    gradient[moving] = difference / (2.0 * c_vector[moving] * delta[moving])
    return GradientEstimate(gradient, y_plus, y_minus)


def _stalled(monitor: List[float], window: Optional[int], tolerance: float) -> bool:
    if window is None or len(monitor) <= window:
        return False
    old, new = monitor[-window - 1], monitor[-1]
    return old - new <= tolerance * max(abs(old), np.finfo(float).tiny)


def run_mspsa(config: MspsaConfig, loss_fn: LossFunction) -> OptimizeResult:
    """
    Minimize *loss_fn* over the box of *config*:
    :math:`\\hat\\theta_{k+1} = \\Pi(\\hat\\theta_k - a_k \\hat g_k)`, stopping at the iteration budget or
    when the best tracked loss stalls.

    The returned ``OptimizeResult`` holds

    * ``x``: the final iterate with integer coordinates rounded half-up,
    * ``fun``: the loss at ``x`` under ``evaluation_seeds``,
    * ``theta``: the final continuous working iterate,
    * ``history``: one ``IterateRecord`` per iteration,
    * ``curve``: ``(evaluations, best loss so far)`` rows starting at 0 evaluations,
    * ``nit``, ``nfev``, ``initial_fun``, ``message``.

    :raises OptimizerAbort: when a loss evaluation fails, with the iteration index and iterate.
    """
    mask, bounds = config.discrete_mask, config.bounds
    gains = config.gains
    n_scenarios = config.replicates_per_eval
    rng = named_generator(config.seed, "perturbation")
    evaluation_seeds = scenario_seeds(config.seed, n_scenarios, "tracking")

    theta = project(config.x0, bounds)
    initial = call_loss(
        loss_fn, evaluation_point(theta, mask, bounds), evaluation_seeds, 0, theta
    )
    best = initial
    curve = [(0, initial)]
    monitor = [initial]
    history: List[IterateRecord] = []
    nfev = 0
    message = "Maximum number of iterations reached."

    for k in range(config.max_iterations):
        a_k, c_k = gains.a_k(k), gains.c_k(k)
        delta = perturbation(config.dimension, rng)
        magnitudes = perturbation_magnitudes(c_k, mask, bounds)
        seeds_plus = scenario_seeds(config.seed, n_scenarios, "iteration", k, 0)
        seeds_minus = (
            seeds_plus
            if config.common_random_numbers
            else scenario_seeds(config.seed, n_scenarios, "iteration", k, 1)
        )
        estimate = gradient_estimate(
            theta,
            delta,
            magnitudes,
            loss_fn,
            seeds_plus,
            seeds_minus,
            mask,
            bounds,
            config.max_difference,
            k,
        )
        nfev += 2

        new_theta = project(theta - a_k * estimate.gradient, bounds)
        current = None
        if config.track_loss:
            current = call_loss(
                loss_fn,
                evaluation_point(new_theta, mask, bounds),
                evaluation_seeds,
                k + 1,
                new_theta,
            )
            best = min(best, current)
        else:
            best = min(best, 0.5 * (estimate.loss_plus + estimate.loss_minus))
        curve.append((nfev, best))
        monitor.append(best)

        history.append(
            IterateRecord(
                k=k,
                theta=theta,
                delta=delta,
                loss_plus=estimate.loss_plus,
                loss_minus=estimate.loss_minus,
                gradient_estimate=estimate.gradient,
                loss_current=current,
            )
        )
        theta = new_theta

        if config.log_every and (k + 1) % config.log_every == 0:
            logger.info(
                "MSPSA iteration %d/%d: a_k = %.4g, c_k = %.4g, best loss = %.6g",
                k + 1,
                config.max_iterations,
                a_k,
                c_k,
                best,
            )
        if _stalled(monitor, config.stall_window, config.stall_tolerance):
            message = "Best loss improved by less than {0:g} over {1} iterations.".format(
                config.stall_tolerance, config.stall_window
            )
            logger.debug("MSPSA stalled at iteration %d", k + 1)
            break

    x = evaluation_point(theta, mask, bounds)
    if history and history[-1].loss_current is not None:
        fun = history[-1].loss_current
    else:
        fun = call_loss(loss_fn, x, evaluation_seeds, len(history), theta)

    return OptimizeResult(
        x=x,
        fun=fun,
        theta=theta,
        nit=len(history),
        nfev=nfev,
        initial_fun=initial,
        history=history,
        curve=np.array(curve, dtype=float),
        evaluation_seeds=evaluation_seeds,
        success=True,
        message=message,
    )
