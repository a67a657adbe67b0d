#!/usr/bin/env python3
"""
.. module optimize
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Box-constrained mixed discrete-continuous optimizers driven by a noisy loss:
    simultaneous perturbation stochastic approximation (``mspsa``), a particle-swarm baseline (``pso``)
    and replicated comparison of the two at equal evaluation budgets (``replicates``).
"""

from .common import LossFunction, project
from .mspsa import (
    GainSchedule,
    IterateRecord,
    MspsaConfig,
    gradient_estimate,
    perturbation,
    run_mspsa,
)
from .pso import PsoConfig, run_pso
from .replicates import Comparison, compare_replicated, run_optimizer

__all__ = [
    "LossFunction",
    "project",
    "GainSchedule",
    "IterateRecord",
    "MspsaConfig",
    "gradient_estimate",
    "perturbation",
    "run_mspsa",
    "PsoConfig",
    "run_pso",
    "Comparison",
    "compare_replicated",
    "run_optimizer",
]
