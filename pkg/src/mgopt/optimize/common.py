#!/usr/bin/env python3
"""
.. module optimize.common
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Pieces shared by the optimizers: the loss-function protocol, box projection, the lattice
    midpoint used for integer coordinates, scenario seeds and failure handling around loss calls.
"""

from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from mgopt.exceptions import InvalidParameterError, OptimizerAbort
from mgopt.tools import derive_seed, round_half_up
from mgopt.type_aliases import BoolVector, Matrix, Vector

# ===================== What can be exported? =====================
__all__ = [
    "LossFunction",
    "as_bounds",
    "as_mask",
    "integer_bounds",
    "project",
    "lattice_midpoint",
    "perturbation_magnitudes",
    "evaluation_point",
    "scenario_seeds",
    "call_loss",
]

# ``loss_fn(theta, seeds)``: the loss at *theta* averaged over the scenarios keyed by *seeds*.
LossFunction = Callable[[Vector, Tuple[int, ...]], float]


def as_bounds(bounds, dimension: Optional[int] = None) -> Matrix:
    """
    Check and normalize box bounds to a ``(p, 2)`` float array of ``[min, max]`` rows.
    """
    bounds = np.array(bounds, dtype=float)
    if bounds.ndim != 2 or bounds.shape[1] != 2 or bounds.shape[0] == 0:
        raise InvalidParameterError(
            "bounds", "expected a nonempty (p, 2) array, got shape {0}".format(bounds.shape)
        )
    if dimension is not None and bounds.shape[0] != dimension:
        raise InvalidParameterError(
            "bounds", "expected {0} rows, got {1}".format(dimension, bounds.shape[0])
        )
    if np.any(~np.isfinite(bounds)) or np.any(bounds[:, 0] > bounds[:, 1]):
        raise InvalidParameterError("bounds", "every row must be finite with min <= max")
    return bounds


def as_mask(discrete_mask, dimension: int) -> BoolVector:
    if discrete_mask is None:
        return np.zeros(dimension, dtype=bool)
    mask = np.array(discrete_mask, dtype=bool)
    if mask.shape != (dimension,):
        raise InvalidParameterError(
            "discrete_mask", "expected {0} entries, got shape {1}".format(dimension, mask.shape)
        )
    return mask


def integer_bounds(bounds: Matrix, discrete_mask: BoolVector) -> Matrix:
    """
    Tighten the rows of integer coordinates to the integers they contain, so that rounding a projected
    point never leaves the box.
    """
    bounds = np.array(bounds, dtype=float)
    lo, hi = np.ceil(bounds[discrete_mask, 0]), np.floor(bounds[discrete_mask, 1])
    if np.any(lo > hi):
        raise InvalidParameterError("bounds", "an integer coordinate has no integer inside its bounds")
    bounds[discrete_mask, 0], bounds[discrete_mask, 1] = lo, hi
    return bounds


def project(theta, bounds) -> Vector:
    """
    Nearest point of the box, i.e. a per-coordinate clip.

    :param theta: A point.
    :param bounds: ``(p, 2)`` array of ``[min, max]`` rows.
    """
    bounds = np.asarray(bounds, dtype=float)
    return np.clip(np.asarray(theta, dtype=float), bounds[:, 0], bounds[:, 1])


def lattice_midpoint(theta, discrete_mask: BoolVector, bounds: Matrix) -> Vector:
    """
    Map integer coordinates to :math:`\\lfloor \\theta_i \\rfloor + 1/2`, kept at least half a unit inside
    the box, so that a perturbation of one half lands on two adjacent integers.
    Continuous coordinates pass through.
    """
    point = np.array(theta, dtype=float)
    lo, hi = bounds[:, 0], bounds[:, 1]
    wide = discrete_mask & (hi - lo >= 1)
    mid = np.clip(np.floor(point) + 0.5, lo + 0.5, hi - 0.5)
    point[wide] = mid[wide]
    narrow = discrete_mask & ~wide
    point[narrow] = round_half_up(np.clip(point[narrow], lo[narrow], hi[narrow]))
    return point


def perturbation_magnitudes(c_k: float, discrete_mask: BoolVector, bounds: Matrix) -> Vector:
    """
    Half a unit on integer coordinates, *c_k* on continuous ones, and zero on any coordinate whose box
    is too narrow to move in.
    """
    width = bounds[:, 1] - bounds[:, 0]
    magnitudes = np.where(discrete_mask, 0.5, float(c_k))
    magnitudes[discrete_mask & (width < 1)] = 0.0
    magnitudes[width == 0] = 0.0
    return magnitudes


def evaluation_point(theta, discrete_mask: BoolVector, bounds: Matrix) -> Vector:
    """The point a working iterate stands for: projected, with integer coordinates rounded half-up."""
    point = project(theta, bounds)
    point[discrete_mask] = round_half_up(point[discrete_mask])
    return project(point, bounds)


def scenario_seeds(seed: int, n: int, *keys) -> Tuple[int, ...]:
    return tuple(derive_seed(seed, *keys, r) for r in range(n))


def call_loss(loss_fn: LossFunction, point: Vector, seeds: Sequence[int], k: int, theta) -> float:
    """
    Evaluate *loss_fn*, turning any failure into an ``OptimizerAbort`` that records where it happened.
    """
    try:
        value = float(loss_fn(point, tuple(seeds)))
    except OptimizerAbort:
        raise
    except Exception as error:
        raise OptimizerAbort(k, theta, error) from error
    if np.isnan(value):
        raise OptimizerAbort(k, theta, ValueError("loss evaluated to NaN at {0}".format(point)))
    return value
