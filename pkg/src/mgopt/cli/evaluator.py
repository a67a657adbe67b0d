#!/usr/bin/env python3
"""
.. module cli.evaluator
   :platform: Unix, Windows, Mac, Linux
   :synopsis: ``mgopt evaluate``: Monte Carlo cost breakdown of one design.
"""

from mgopt.basic_io.out import make_design_info, save_record, save_to_output
from mgopt.calculator import MicrogridCalculator

from .handler import RunCommandHandler


class MicrogridEvaluator(RunCommandHandler):
    takes_design = True

    def execute(self, namespace, run_config, out):
        calc = MicrogridCalculator(run_config)
        design = self.design(namespace, run_config)
        n_scenarios = namespace.scenarios or run_config.evaluation_scenarios
        save_to_output(out / "output.txt", make_design_info(design))

        breakdown, _ = calc.evaluate(design, n_scenarios, jobs=namespace.jobs)
        save_record(
            {"seed": run_config.seed, "design": design.to_dict(), **breakdown.to_dict()},
            out / "breakdown.json",
        )
        save_to_output(
            out / "output.txt",
            "NPC = {0:.6g} USD/yr, penalized loss = {1:.6g} over {2} scenarios".format(
                breakdown.npc, breakdown.loss, n_scenarios
            ),
        )
