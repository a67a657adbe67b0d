#!/usr/bin/env python3
"""
.. module calculator
   :platform: Unix, Windows, Mac, Linux
   :synopsis: ``MicrogridCalculator`` ties a validated run configuration to the simulation chain: it loads
    the typical year once, draws seeded scenarios, dispatches designs through them, costs the traces and
    exposes the resulting penalized loss to the optimizers in their own coordinates.
"""

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from lazy_property import LazyProperty

from mgopt.basic_io.read_input import read_bundled_typical_year, read_typical_year
from mgopt.dispatch import DesignVector, DispatchTrace, simulate_year
from mgopt.economics import CostBreakdown, evaluate_loss
from mgopt.exceptions import InvalidParameterError
from mgopt.optimize.mspsa import MspsaConfig
from mgopt.optimize.pso import PsoConfig
from mgopt.scenario import ScenarioBundle, TypicalYear, build_scenario
from mgopt.settings import RunConfig
from mgopt.tools import derive_seed
from mgopt.type_aliases import Vector

# ===================== What can be exported? =====================
__all__ = ["MicrogridCalculator"]

logger = logging.getLogger(__name__)


class MicrogridCalculator:
    """
    :param run_config: A validated run configuration.
    :param typical_year: Use this base year instead of the one the configuration names.
    """

    def __init__(self, run_config: RunConfig, typical_year: Optional[TypicalYear] = None):
        self.run_config = run_config
        if typical_year is not None:
            self.__dict__["typical_year"] = typical_year

    @LazyProperty
    def typical_year(self) -> TypicalYear:
        path = self.run_config.typical_year
        if path is None:
            logger.debug("Using the bundled synthetic typical year")
            return read_bundled_typical_year()
        return read_typical_year(path)

    @property
    def seed(self) -> int:
        return self.run_config.seed

    def scenario_seeds(self, n_scenarios: int, seed: Optional[int] = None) -> Tuple[int, ...]:
        seed = self.seed if seed is None else seed
        return tuple(derive_seed(seed, "scenario", i) for i in range(n_scenarios))

    def scenario(self, seed: int) -> ScenarioBundle:
        config = self.run_config
        return build_scenario(self.typical_year, config.stochastic, config.reliability, seed)

    def check_design(self, design: DesignVector):
        values, bounds = design.to_array(), self.run_config.bounds
        # Absorbs the round trip through optimizer coordinates.
        slack = 1e-9 * np.maximum(np.abs(bounds).max(axis=1), 1.0)
        outside = (values < bounds[:, 0] - slack) | (values > bounds[:, 1] + slack)
        if np.any(outside):
            i = int(np.argmax(outside))
            raise InvalidParameterError(
                DesignVector.FIELDS[i], "{0} is outside [{1}, {2}]".format(values[i], *bounds[i])
            )

    def simulate(self, design: DesignVector, seed: int) -> DispatchTrace:
        return simulate_year(design, self.scenario(seed), self.run_config.specs)

    def simulate_many(
        self, design: DesignVector, seeds: Sequence[int], jobs: int = 1
    ) -> List[DispatchTrace]:
        if jobs > 1 and len(seeds) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                return list(executor.map(self.simulate, [design] * len(seeds), seeds))
        return [self.simulate(design, seed) for seed in seeds]

    def evaluate(
        self,
        design: DesignVector,
        n_scenarios: Optional[int] = None,
        seed: Optional[int] = None,
        jobs: int = 1,
    ) -> Tuple[CostBreakdown, List[DispatchTrace]]:
        """
        Monte Carlo evaluation of *design* over *n_scenarios* scenarios derived from *seed*.

        :return: The cost breakdown and the dispatch trace of every scenario.
        """
        self.check_design(design)
        n_scenarios = n_scenarios or self.run_config.evaluation_scenarios
        traces = self.simulate_many(design, self.scenario_seeds(n_scenarios, seed), jobs)
        return evaluate_loss(design, traces, self.run_config.costs), traces

    def to_design(self, theta) -> DesignVector:
        """Optimizer coordinates to a design: thresholds rescaled, capacities rounded half-up."""
        values = np.asarray(theta, dtype=float) * self.run_config.scale
        return DesignVector.from_array(values).rounded()

    def from_design(self, design: DesignVector) -> Vector:
        return design.to_array() / self.run_config.scale

    def loss(self, theta, seeds: Sequence[int]) -> float:
        """
        Penalized loss at optimizer point *theta*, averaging operations over the scenarios of *seeds*.
        """
        design = self.to_design(theta)
        traces = [self.simulate(design, seed) for seed in seeds]
        return evaluate_loss(design, traces, self.run_config.costs).loss

    __call__ = loss

    def optimizer_config(
        self, kind: Optional[str] = None, seed: Optional[int] = None
    ) -> Union[MspsaConfig, PsoConfig]:
        """
        The run's optimizer template, ``"mspsa"`` or ``"pso"`` (the configured one by default), seeded with
        *seed* or the run seed.
        """
        kind = kind or self.run_config.optimizer
        try:
            template = {"mspsa": self.run_config.mspsa, "pso": self.run_config.pso}[kind]
        except KeyError:
            raise InvalidParameterError("optimizer", "unknown optimizer {0!r}".format(kind))
        return dataclasses.replace(template, seed=self.seed if seed is None else int(seed))
