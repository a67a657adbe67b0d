#!/usr/bin/env python3
"""
.. module cli.optimizer
   :platform: Unix, Windows, Mac, Linux
   :synopsis: ``mgopt optimize``: run the configured optimizer from the initial design, then export the
    final design, the iterate trace, the convergence curve and a Monte Carlo evaluation of the result.
"""

import logging

from mgopt.basic_io.out import (
    make_design_info,
    save_curve,
    save_design,
    save_generations,
    save_iterates,
    save_record,
    save_to_output,
)
from mgopt.calculator import MicrogridCalculator
from mgopt.dispatch import DesignVector
from mgopt.optimize import MspsaConfig, run_optimizer
from mgopt.settings import OPTIMIZERS

from .handler import RunCommandHandler

logger = logging.getLogger(__name__)


def reduction_percent(initial: float, final: float) -> float:
    if initial == 0:
        return 0.0
    return 100.0 * (1.0 - final / initial)


class MicrogridOptimizer(RunCommandHandler):
    def init_parser(self, parser):
        super().init_parser(parser)
        parser.add_argument(
            "--optimizer",
            choices=OPTIMIZERS,
            default=None,
            help="Optimizer to run instead of the configured one.",
        )

    def execute(self, namespace, run_config, out):
        calc = MicrogridCalculator(run_config)
        kind = namespace.optimizer or run_config.optimizer
        config = calc.optimizer_config(kind)
        save_to_output(out / "output.txt", make_design_info(calc.to_design(config.x0), "Initial design"))

        result = run_optimizer(config, calc)
        design = calc.to_design(result.x)
        reduction = reduction_percent(result.initial_fun, result.fun)
        logger.info("%s finished: loss %.6g -> %.6g (%.1f%%)", kind, result.initial_fun, result.fun, reduction)

        save_design(
            design,
            out / "design.json",
            optimizer=kind,
            seed=run_config.seed,
            initial_loss=result.initial_fun,
            final_loss=result.fun,
            reduction_percent=reduction,
            iterations=result.nit,
            evaluations=result.nfev,
        )
        if isinstance(config, MspsaConfig):
            save_iterates(result.history, DesignVector.FIELDS, out / "iterates.csv")
        else:
            save_generations(result.history, DesignVector.FIELDS, out / "generations.csv")
        save_curve(result.curve, out / "curve.csv")

        breakdown, _ = calc.evaluate(design, namespace.scenarios, jobs=namespace.jobs)
        save_record(
            {"seed": run_config.seed, "design": design.to_dict(), **breakdown.to_dict()},
            out / "breakdown.json",
        )

        save_to_output(out / "output.txt", make_design_info(design, "Final design"))
        save_to_output(
            out / "output.txt",
            "{0}: loss {1:.6g} -> {2:.6g}, a {3:.1f}% reduction after {4} evaluations".format(
                kind, result.initial_fun, result.fun, reduction, result.nfev
            ),
        )
