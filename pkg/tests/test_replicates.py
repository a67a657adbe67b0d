#!/usr/bin/env python3
# Created at Oct 19, 2026

import dataclasses
import unittest

import numpy as np
import pandas as pd

from mgopt.exceptions import InvalidParameterError
from mgopt.optimize import GainSchedule, MspsaConfig, PsoConfig, compare_replicated, run_optimizer
from mgopt.optimize.replicates import curve_on_grid
from mgopt.tools import derive_seed


class NoisyQuadratic:
    """Picklable quadratic whose noise is a function of the scenario seeds only."""

    target = np.array([3.0, -2.0, 0.5])

    def __call__(self, theta, seeds):
        noise = np.random.default_rng(list(seeds)).normal(scale=0.1, size=len(seeds)).mean()
        return float(np.sum((np.asarray(theta) - self.target) ** 2) + noise)


def make_configs():
    bounds = [[-10, 10], [-10, 10], [-5, 5]]
    mask = [True, True, False]
    x0 = [8, 6, -4]
    return {
        "mspsa": MspsaConfig(
            gains=GainSchedule(a=0.1, c=0.5, A=5),
            x0=x0,
            bounds=bounds,
            discrete_mask=mask,
            max_iterations=50,
            replicates_per_eval=2,
            stall_window=None,
            log_every=0,
        ),
        "pso": PsoConfig(
            x0=x0,
            bounds=bounds,
            discrete_mask=mask,
            population=10,
            max_evaluations=100,
            replicates_per_eval=2,
            log_every=0,
        ),
    }


class TestCurveOnGrid(unittest.TestCase):
    def test_step_interpolation(self):
        curve = [[0, 5.0], [2, 4.0], [4, 1.0]]
        np.testing.assert_array_equal(curve_on_grid(curve, [1, 2, 3, 4, 5, 9]), [5, 4, 4, 1, 1, 1])

    def test_before_first_row(self):
        np.testing.assert_array_equal(curve_on_grid([[2, 3.0], [4, 1.0]], [0, 1]), [3, 3])


class TestCompareReplicated(unittest.TestCase):
    def setUp(self):
        self.configs = make_configs()
        self.loss = NoisyQuadratic()

    def test_grid_layout(self):
        comparison = compare_replicated(self.configs, self.loss, n_replicates=2, seed=3, stride=10)
        self.assertEqual(len(comparison.curves), 20)
        self.assertEqual(list(comparison.curves.columns), ["evals", "loss_mean", "loss_std", "optimizer"])
        for _, frame in comparison.curves.groupby("optimizer"):
            np.testing.assert_array_equal(frame["evals"], np.arange(10, 101, 10))
            self.assertTrue(np.all(np.diff(frame["loss_mean"]) <= 0))
        self.assertEqual(len(comparison.finals), 4)

    def test_single_replicate_matches_single_run(self):
        comparison = compare_replicated(self.configs, self.loss, n_replicates=1, seed=3, stride=10)
        grid = np.arange(10, 101, 10)
        for name, config in self.configs.items():
            seeded = dataclasses.replace(config, seed=derive_seed(3, "replicate", 0))
            expected = curve_on_grid(run_optimizer(seeded, self.loss).curve, grid)
            frame = comparison.curves[comparison.curves["optimizer"] == name]
            np.testing.assert_allclose(frame["loss_mean"], expected)
            np.testing.assert_array_equal(frame["loss_std"], 0.0)

    def test_same_seed_same_frames(self):
        a = compare_replicated(self.configs, self.loss, n_replicates=2, seed=5, stride=20)
        b = compare_replicated(self.configs, self.loss, n_replicates=2, seed=5, stride=20)
        pd.testing.assert_frame_equal(a.curves, b.curves)
        pd.testing.assert_frame_equal(a.finals, b.finals)

    def test_worker_processes_agree(self):
        a = compare_replicated(self.configs, self.loss, n_replicates=2, seed=5, stride=20)
        b = compare_replicated(self.configs, self.loss, n_replicates=2, seed=5, stride=20, jobs=2)
        pd.testing.assert_frame_equal(a.curves, b.curves)

    def test_replicates_share_initial_loss(self):
        comparison = compare_replicated(self.configs, self.loss, n_replicates=3, seed=1, stride=10)
        initial = comparison.finals.pivot(index="replicate", columns="optimizer", values="initial_loss")
        np.testing.assert_allclose(initial["mspsa"], initial["pso"])
        # replicates see different tracking scenarios
        self.assertEqual(initial["mspsa"].nunique(), 3)

    def test_final_loss_is_loss_at_reported_point(self):
        comparison = compare_replicated(self.configs, self.loss, n_replicates=2, seed=4, stride=10)
        columns = ["x0", "x1", "x2"]
        for name, results in comparison.results.items():
            finals = comparison.finals[comparison.finals["optimizer"] == name]
            for (_, row), result in zip(finals.iterrows(), results):
                np.testing.assert_array_equal(row[columns].to_numpy(dtype=float), result.x)
                self.assertEqual(row["final_loss"], self.loss(result.x, result.evaluation_seeds))
                self.assertEqual(row["best_loss"], result.curve[-1, 1])
                self.assertLessEqual(row["best_loss"], row["initial_loss"])

    def test_summary(self):
        comparison = compare_replicated(self.configs, self.loss, n_replicates=2, seed=1, stride=10)
        summary = comparison.summary()
        for name, row in summary.iterrows():
            finals = comparison.finals[comparison.finals["optimizer"] == name]
            expected = 100 * (1 - finals["final_loss"].mean() / finals["initial_loss"].mean())
            self.assertAlmostEqual(row["reduction_percent"], expected)
            self.assertGreater(row["reduction_percent"], 0)

    def test_explicit_budget(self):
        comparison = compare_replicated(
            self.configs, self.loss, n_replicates=1, stride=25, budget=200
        )
        frame = comparison.curves[comparison.curves["optimizer"] == "pso"]
        np.testing.assert_array_equal(frame["evals"], [25, 50, 75, 100, 125, 150, 175, 200])
        # past the end of a run the final value is carried
        self.assertEqual(frame["loss_mean"].iloc[-1], frame["loss_mean"].iloc[3])

    def test_invalid_arguments(self):
        with self.assertRaises(InvalidParameterError):
            compare_replicated(self.configs, self.loss, n_replicates=0)
        with self.assertRaises(InvalidParameterError):
            compare_replicated(self.configs, self.loss, n_replicates=1, stride=0)

    def test_unknown_config(self):
        with self.assertRaises(TypeError):
            run_optimizer(object(), self.loss)


if __name__ == "__main__":
    unittest.main()
