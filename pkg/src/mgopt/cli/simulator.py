#!/usr/bin/env python3
"""
.. module cli.simulator
   :platform: Unix, Windows, Mac, Linux
   :synopsis: ``mgopt simulate``: dispatch one design through seeded scenarios and export every hourly
    trace with a summary of its realized rates.
"""

from mgopt.basic_io.out import make_design_info, save_record, save_to_output, save_trace
from mgopt.calculator import MicrogridCalculator
from mgopt.dispatch import emissions_reduction, renewable_penetration

from .handler import RunCommandHandler


class MicrogridSimulator(RunCommandHandler):
    takes_design = True

    def execute(self, namespace, run_config, out):
        calc = MicrogridCalculator(run_config)
        design = self.design(namespace, run_config)
        n_scenarios = namespace.scenarios or 1
        save_to_output(out / "output.txt", make_design_info(design))

        breakdown, traces = calc.evaluate(design, n_scenarios, jobs=namespace.jobs)
        per_scenario = []
        for i, (seed, trace) in enumerate(zip(calc.scenario_seeds(n_scenarios), traces)):
            save_trace(trace, out / "trace_{0}.csv".format(i))
            per_scenario.append(
                {
                    "scenario": i,
                    "seed": seed,
                    "r_rp": renewable_penetration(trace),
                    "r_er": emissions_reduction(trace),
                    "hll": trace.hll,
                    "unserved_kwh": trace.unserved_kwh,
                    "curtailed_kwh": trace.curtailed_kwh,
                }
            )

        save_record(
            {
                "seed": run_config.seed,
                "n_scenarios": n_scenarios,
                "design": design.to_dict(),
                "r_rp_mean": breakdown.r_rp,
                "r_er_mean": breakdown.r_er,
                "hll_mean": breakdown.hll,
                "unserved_kwh_mean": breakdown.unserved_kwh,
                "scenarios": per_scenario,
            },
            out / "summary.json",
        )
        save_to_output(
            out / "output.txt",
            "Mean over {0} scenario(s): R_rp = {1:.4f}, R_er = {2:.4f}, HLL = {3:.2f} h".format(
                n_scenarios, breakdown.r_rp, breakdown.r_er, breakdown.hll
            ),
        )
