#!/usr/bin/env python3
"""
.. module cli.comparer
   :platform: Unix, Windows, Mac, Linux
   :synopsis: ``mgopt compare``: replicated MSPSA and PSO runs at a matched evaluation budget, their mean
    and spread of best-so-far loss, and the with/without-incentives planning table.
"""

import dataclasses
import logging
import textwrap

import pandas as pd

from mgopt.basic_io.out import save_table, save_to_output
from mgopt.calculator import MicrogridCalculator
from mgopt.optimize import compare_replicated, run_optimizer
from mgopt.tools import derive_seed

from .handler import RunCommandHandler, positive_int

logger = logging.getLogger(__name__)


class MicrogridComparer(RunCommandHandler):
    takes_replicates = True

    def init_parser(self, parser):
        super().init_parser(parser)
        parser.add_argument(
            "--budget",
            type=positive_int,
            default=None,
            help="Loss evaluations per run, shared by both optimizers.",
        )
        parser.add_argument(
            "--stride", type=positive_int, default=None, help="Spacing of the curve grid in evaluations."
        )
        parser.add_argument(
            "--no-table",
            action="store_true",
            help="Skip the with/without-incentives planning table.",
        )

    def execute(self, namespace, run_config, out):
        calc = MicrogridCalculator(run_config)
        budget = namespace.budget or run_config.compare_budget
        stride = namespace.stride or run_config.compare_stride
        n_replicates = namespace.replicates or run_config.compare_replicates
        configs = {
            "mspsa": dataclasses.replace(calc.optimizer_config("mspsa"), max_iterations=budget // 2),
            "pso": dataclasses.replace(calc.optimizer_config("pso"), max_evaluations=budget),
        }

        comparison = compare_replicated(
            configs,
            calc,
            n_replicates,
            seed=run_config.seed,
            stride=stride,
            budget=budget,
            jobs=namespace.jobs,
        )
        save_table(comparison.curves, out / "curves.csv")
        save_table(comparison.finals, out / "finals.csv")

        summary = comparison.summary()
        text = textwrap.dedent(
            """\
            Replicates per optimizer: {0}
            Evaluation budget: {1}
            Shared initial loss: {2:.6g}

            {3}
            """
        ).format(n_replicates, budget, comparison.initial_loss, summary.to_string(float_format="{0:.6g}".format))
        with open(out / "summary.txt", "w") as f:
            f.write(text)
        save_to_output(out / "output.txt", text)

        if namespace.no_table or not run_config.incentive_table:
            return
        if namespace.no_incentives:
            logger.warning("Thresholds are clamped to zero, so the incentive table is skipped")
            return
        table = self.incentive_table(calc, comparison.results["mspsa"][0], budget, namespace)
        save_table(table, out / "incentive_table.csv")
        save_to_output(out / "output.txt", table.to_string(index=False))

    @staticmethod
    def incentive_table(calc: MicrogridCalculator, with_result, budget: int, namespace) -> pd.DataFrame:
        """
        Re-plan with both thresholds pinned to zero from the first replicate's seed, then evaluate the two
        final designs over the same Monte Carlo scenarios.
        """
        run_config = calc.run_config
        free = MicrogridCalculator(run_config.without_incentives(), typical_year=calc.typical_year)
        config = dataclasses.replace(
            free.optimizer_config("mspsa"),
            seed=derive_seed(run_config.seed, "replicate", 0),
            max_iterations=budget // 2,
        )
        logger.info("Optimizing without incentives")
        without_result = run_optimizer(config, free)

        rows = []
        for case, result, owner in (
            ("with_incentives", with_result, calc),
            ("without_incentives", without_result, free),
        ):
            design = owner.to_design(result.x)
            breakdown, _ = calc.evaluate(design, namespace.scenarios, jobs=namespace.jobs)
            rows.append(
                {
                    "case": case,
                    **design.to_dict(),
                    "r_rp": breakdown.r_rp,
                    "r_er": breakdown.r_er,
                    "hll": breakdown.hll,
                    "npc": breakdown.npc,
                    "loss": breakdown.loss,
                }
            )
        return pd.DataFrame(rows)
