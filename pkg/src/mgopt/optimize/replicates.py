#!/usr/bin/env python3
"""
.. module optimize.replicates
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Run each optimizer several times from derived seeds and average their best-so-far loss
    curves on a common grid of function-evaluation counts.
"""

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Mapping, Optional, Union

import numpy as np
import pandas as pd
from scipy.optimize import OptimizeResult

from mgopt.exceptions import InvalidParameterError
from mgopt.optimize.common import LossFunction
from mgopt.optimize.mspsa import MspsaConfig, run_mspsa
from mgopt.optimize.pso import PsoConfig, run_pso
from mgopt.tools import derive_seed
from mgopt.type_aliases import Vector

# ===================== What can be exported? =====================
__all__ = ["Comparison", "run_optimizer", "curve_on_grid", "compare_replicated"]

logger = logging.getLogger(__name__)

OptimizerConfig = Union[MspsaConfig, PsoConfig]


def run_optimizer(config: OptimizerConfig, loss_fn: LossFunction) -> OptimizeResult:
    if isinstance(config, MspsaConfig):
        return run_mspsa(config, loss_fn)
    if isinstance(config, PsoConfig):
        return run_pso(config, loss_fn)
    raise TypeError("Unknown optimizer configuration {0!r}!".format(type(config).__name__))


def curve_on_grid(curve, grid) -> Vector:
    """
    Step-interpolate a ``(evaluations, best loss)`` curve: each grid count takes the value of the last
    curve row at or before it. Counts past the end of a run keep its final value.
    """
    curve = np.asarray(curve, dtype=float)
    index = np.searchsorted(curve[:, 0], np.asarray(grid, dtype=float), side="right") - 1
    return curve[np.clip(index, 0, None), 1]


@dataclasses.dataclass(eq=False)
class Comparison:
    """
    :param curves: Columns ``evals, loss_mean, loss_std, optimizer``; one row per optimizer and grid count.
    :param finals: Columns ``optimizer, replicate, seed, initial_loss, final_loss, best_loss, evaluations``
        plus the final point. ``final_loss`` is the loss at that point under the tracking scenarios;
        ``best_loss`` is the lowest tracked loss seen during the run, which ends the convergence curve.
    :param results: The raw ``OptimizeResult`` objects per optimizer, in replicate order.
    """

    curves: pd.DataFrame
    finals: pd.DataFrame
    results: Dict[str, List[OptimizeResult]]

    @property
    def initial_loss(self) -> float:
        return float(self.finals["initial_loss"].mean())

    def summary(self) -> pd.DataFrame:
        """Mean and standard deviation of the final loss, and the mean reduction from the start, per optimizer."""
        grouped = self.finals.groupby("optimizer", sort=False)
        table = pd.DataFrame(
            {
                "initial_loss_mean": grouped["initial_loss"].mean(),
                "final_loss_mean": grouped["final_loss"].mean(),
                "final_loss_std": grouped["final_loss"].std(ddof=0),
            }
        )
        table["reduction_percent"] = 100.0 * (
            1.0 - table["final_loss_mean"] / table["initial_loss_mean"]
        )
        return table


def compare_replicated(
    configs: Mapping[str, OptimizerConfig],
    loss_fn: LossFunction,
    n_replicates: int,
    seed: int = 0,
    stride: int = 20,
    budget: Optional[int] = None,
    jobs: int = 1,
) -> Comparison:
    """
    Run every optimizer *n_replicates* times and average the best-so-far curves against the number of
    function evaluations (never iterations).

    Replicate ``r`` of every optimizer uses the seed ``derive_seed(seed, "replicate", r)``, so for a given
    replicate all optimizers share their tracking scenarios and start from the same loss.

    :param configs: Optimizer configurations keyed by the label written to the ``optimizer`` column.
    :param loss_fn: ``loss_fn(point, seeds)``; must be picklable when *jobs* > 1.
    :param n_replicates: Runs per optimizer.
    :param seed: Master seed.
    :param stride: Spacing of the evaluation grid ``stride, 2 stride, ..., budget``.
    :param budget: Largest evaluation count on the grid; the largest budget among *configs* by default.
    :param jobs: Worker processes; runs are executed in-process when 1.
    """
    if not n_replicates >= 1:
        raise InvalidParameterError("n_replicates", "must be >= 1, got {0}".format(n_replicates))
    if not stride >= 1:
        raise InvalidParameterError("stride", "must be >= 1, got {0}".format(stride))
    if budget is None:
        budget = max(config.evaluation_budget for config in configs.values())
    grid = np.arange(stride, budget + 1, stride)

    tasks = []
    for name, config in configs.items():
        for r in range(n_replicates):
            replicate_seed = derive_seed(seed, "replicate", r)
            tasks.append((name, r, replicate_seed, dataclasses.replace(config, seed=replicate_seed)))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(run_optimizer, task[3], loss_fn) for task in tasks]
            outcomes = [future.result() for future in futures]
    else:
        outcomes = []
        for name, r, _, config in tasks:
            logger.info("Running %s replicate %d/%d", name, r + 1, n_replicates)
            outcomes.append(run_optimizer(config, loss_fn))

    results: Dict[str, List[OptimizeResult]] = {name: [] for name in configs}
    rows, curve_frames = [], []
    for (name, r, replicate_seed, _), result in zip(tasks, outcomes):
        results[name].append(result)
        rows.append(
            {
                "optimizer": name,
                "replicate": r,
                "seed": replicate_seed,
                "initial_loss": result.initial_fun,
                "final_loss": float(result.fun),
                "best_loss": float(result.curve[-1, 1]),
                "evaluations": int(result.nfev),
                **{"x{0}".format(i): value for i, value in enumerate(result.x)},
            }
        )
    for name, runs in results.items():
        sampled = np.array([curve_on_grid(run.curve, grid) for run in runs])
        curve_frames.append(
            pd.DataFrame(
                {
                    "evals": grid,
                    "loss_mean": sampled.mean(axis=0),
                    "loss_std": sampled.std(axis=0),
                    "optimizer": name,
                }
            )
        )
    return Comparison(
        curves=pd.concat(curve_frames, ignore_index=True),
        finals=pd.DataFrame(rows),
        results=results,
    )
