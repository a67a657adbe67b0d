#!/usr/bin/env python3
# Created at Oct 19, 2026

import unittest

import numpy as np

from mgopt.exceptions import InvalidParameterError, OptimizerAbort
from mgopt.optimize import (
    GainSchedule,
    MspsaConfig,
    gradient_estimate,
    perturbation,
    project,
    run_mspsa,
)
from mgopt.optimize.common import evaluation_point, lattice_midpoint

TARGETS = np.array([3.0, 7.0, -2.0, 5.0, 0.25, -0.5])
MIXED = np.array([True, True, True, True, False, False])


def mixed_quadratic(theta, seeds):
    return float(np.sum((np.asarray(theta) - TARGETS) ** 2))


def sphere(theta, seeds):
    return float(np.dot(theta, theta))


class TestPerturbation(unittest.TestCase):
    def test_support_and_moments(self):
        rng = np.random.default_rng(0)
        draws = np.array([perturbation(6, rng) for _ in range(100_000)])
        self.assertTrue(np.all(np.abs(draws) == 1))
        self.assertTrue(np.all(np.abs(draws.mean(axis=0)) < 0.02))
        correlation = np.corrcoef(draws.T)
        off_diagonal = correlation[~np.eye(6, dtype=bool)]
        self.assertLess(np.abs(off_diagonal).max(), 0.02)

    def test_invalid_dimension(self):
        with self.assertRaises(InvalidParameterError):
            perturbation(0, 1)


class TestProject(unittest.TestCase):
    def test_clip(self):
        bounds = np.array([[0, 10], [0, 1]])
        np.testing.assert_array_equal(project([-5, 0.5], bounds), [0, 0.5])
        np.testing.assert_array_equal(project([3, 0.2], bounds), [3, 0.2])
        np.testing.assert_array_equal(project([11, 2], bounds), [10, 1])


class TestLattice(unittest.TestCase):
    def test_midpoint(self):
        bounds = np.array([[0, 10], [0, 10], [0, 1]])
        mask = np.array([True, True, False])
        np.testing.assert_array_equal(
            lattice_midpoint([2.3, 10.0, 0.3], mask, bounds), [2.5, 9.5, 0.3]
        )

    def test_evaluation_point_rounds_half_up(self):
        bounds = np.array([[0, 10], [0, 1]])
        mask = np.array([True, False])
        np.testing.assert_array_equal(evaluation_point([2.5, 0.3], mask, bounds), [3, 0.3])
        np.testing.assert_array_equal(evaluation_point([2.49, 1.3], mask, bounds), [2, 1.0])


class TestGradientEstimate(unittest.TestCase):
    def test_constant_loss(self):
        estimate = gradient_estimate(
            np.ones(4), perturbation(4, 1), 0.1, lambda theta, seeds: 3.0
        )
        np.testing.assert_array_equal(estimate.gradient, 0)

    def test_linear_one_dimension_is_exact(self):
        for delta in (-1.0, 1.0):
            for c in (0.01, 0.7, 5.0):
                estimate = gradient_estimate(
                    [2.0], [delta], c, lambda theta, seeds: float(np.sum(theta))
                )
                self.assertAlmostEqual(estimate.gradient[0], 1.0, places=12)

    def test_linear_many_dimensions(self):
        rng = np.random.default_rng(4)
        total = np.zeros(5)
        for _ in range(20_000):
            delta = perturbation(5, rng)
            estimate = gradient_estimate(
                np.zeros(5), delta, 0.3, lambda theta, seeds: float(np.sum(theta))
            )
            np.testing.assert_allclose(estimate.gradient, delta.sum() / delta, atol=1e-12)
            total += estimate.gradient
        np.testing.assert_allclose(total / 20_000, 1.0, atol=0.05)

    def test_unbiased_on_quadratic(self):
        theta = np.array([3, -1, 2, -2, 0.5, 0.5])
        rng = np.random.default_rng(10)
        total = np.zeros(6)
        n = 10_000
        for _ in range(n):
            total += gradient_estimate(theta, perturbation(6, rng), 0.1, sphere).gradient
        error = np.linalg.norm(total / n - 2 * theta)
        self.assertLess(error, 0.05 * np.linalg.norm(2 * theta))

    def test_unbiased_on_two_dimensional_quadratic(self):
        theta = np.array([3.0, -1.0])
        rng = np.random.default_rng(12)
        total = np.zeros(2)
        n = 10_000
        for _ in range(n):
            total += gradient_estimate(theta, perturbation(2, rng), 0.05, sphere).gradient
        error = np.linalg.norm(total / n - [6, -2])
        self.assertLess(error, 0.05 * np.linalg.norm([6, -2]))

    def test_discrete_measurements_land_on_adjacent_integers(self):
        points = []

        def recorder(theta, seeds):
            points.append(np.array(theta))
            return 0.0

        bounds = np.array([[0, 10], [0, 1]])
        gradient_estimate(
            [2.3, 0.5], [1, -1], [0.5, 0.1], recorder, discrete_mask=[True, False], bounds=bounds
        )
        np.testing.assert_allclose(points[0], [3, 0.4])
        np.testing.assert_allclose(points[1], [2, 0.6])

    def test_measurements_are_projected(self):
        points = []

        def recorder(theta, seeds):
            points.append(np.array(theta))
            return 0.0

        gradient_estimate([0.0], [1], 0.5, recorder, bounds=np.array([[0, 1]]))
        self.assertTrue(all(0 <= p[0] <= 1 for p in points))

    def test_difference_clipping(self):
        estimate = gradient_estimate(
            [0.0], [1.0], 1.0, lambda theta, seeds: 100.0 * theta[0], max_difference=10.0
        )
        self.assertAlmostEqual(estimate.gradient[0], 5.0)
        self.assertAlmostEqual(estimate.loss_plus - estimate.loss_minus, 200.0)

    def test_zero_magnitude_coordinate(self):
        estimate = gradient_estimate([1.0, 1.0], [1, 1], [0.1, 0.0], sphere)
        self.assertEqual(estimate.gradient[1], 0.0)

    def test_seeds_passed_through(self):
        seen = []

        def recorder(theta, seeds):
            seen.append(seeds)
            return 0.0

        gradient_estimate([0.0], [1], 0.1, recorder, seeds_plus=(1, 2), seeds_minus=(3, 4))
        self.assertEqual(seen, [(1, 2), (3, 4)])


class TestGainSchedule(unittest.TestCase):
    def test_published_gains(self):
        gains = GainSchedule(a=0.25, c=0.7, A=500, alpha=0.602, gamma=0.101)
        self.assertAlmostEqual(gains.a_k(0), 0.25 / 501**0.602)
        self.assertAlmostEqual(gains.a_k(0), 0.00592, delta=1e-5)
        self.assertEqual(gains.c_k(0), 0.7)

    def test_invalid(self):
        with self.assertRaises(InvalidParameterError):
            GainSchedule(a=-1, c=1)
        with self.assertRaises(InvalidParameterError):
            GainSchedule(a=1, c=0)

    def test_unusual_exponents_warn(self):
        with self.assertWarns(UserWarning):
            GainSchedule(a=1, c=1, alpha=0.5, gamma=0.6)


class TestRunMspsa(unittest.TestCase):
    def setUp(self):
        self.bounds = np.tile([-20.0, 20.0], (6, 1))

    def config(self, **kwargs) -> MspsaConfig:
        options = dict(
            gains=GainSchedule(a=0.1, c=4.0, A=100),
            x0=[4, 6, -1, 4, 0, 0],
            bounds=self.bounds,
            discrete_mask=MIXED,
            max_iterations=2000,
            stall_window=None,
            track_loss=False,
            log_every=0,
        )
        options.update(kwargs)
        return MspsaConfig(**options)

    def test_mixed_quadratic_convergence(self):
        successes = 0
        for seed in range(20):
            result = run_mspsa(self.config(seed=seed), mixed_quadratic)
            integers_exact = np.array_equal(result.x[:4], TARGETS[:4])
            continuous_close = np.all(np.abs(result.x[4:] - TARGETS[4:]) <= 0.05)
            successes += bool(integers_exact and continuous_close)
        self.assertGreaterEqual(successes, 19)

    def test_result_layout(self):
        result = run_mspsa(self.config(max_iterations=50, track_loss=True), mixed_quadratic)
        self.assertEqual(result.nit, 50)
        self.assertEqual(result.nfev, 100)
        self.assertEqual(len(result.history), 50)
        self.assertEqual(result.curve.shape, (51, 2))
        np.testing.assert_array_equal(result.curve[:, 0], np.arange(0, 101, 2))
        self.assertEqual(result.curve[0, 1], mixed_quadratic(evaluation_point([4, 6, -1, 4, 0, 0], MIXED, self.bounds), ()))
        self.assertTrue(np.all(np.diff(result.curve[:, 1]) <= 0))
        self.assertTrue(np.all(result.x[:4] == np.round(result.x[:4])))
        self.assertEqual(result.fun, mixed_quadratic(result.x, result.evaluation_seeds))

    def test_iterates_stay_in_bounds(self):
        bounds = np.array([[0, 3], [0, 3], [0, 3], [0, 3], [0, 0.1], [-0.1, 0.1]])
        result = run_mspsa(
            self.config(bounds=bounds, x0=[1, 1, 1, 1, 0, 0], max_iterations=200), mixed_quadratic
        )
        for record in result.history:
            self.assertTrue(np.all(record.theta >= bounds[:, 0]))
            self.assertTrue(np.all(record.theta <= bounds[:, 1]))
        self.assertEqual(result.x[1], 3)
        self.assertEqual(result.x[2], 0)

    def test_zero_budget_returns_rounded_start(self):
        result = run_mspsa(self.config(x0=[3.5, 1.2, 0, 0, 0.3, 0], max_iterations=0), mixed_quadratic)
        np.testing.assert_array_equal(result.x, [4, 1, 0, 0, 0.3, 0])
        self.assertEqual(result.nfev, 0)
        self.assertEqual(result.fun, result.initial_fun)
        self.assertEqual(result.fun, mixed_quadratic(result.x, ()))

    def test_zero_gain_keeps_start(self):
        with self.assertWarns(UserWarning):
            gains = GainSchedule(a=0.0, c=1.0)
        result = run_mspsa(
            self.config(gains=gains, x0=[2.5, 3.4, 0, 0, 0.1, 0.2], max_iterations=30), mixed_quadratic
        )
        np.testing.assert_array_equal(result.x, [3, 3, 0, 0, 0.1, 0.2])

    def test_reproducible(self):
        a = run_mspsa(self.config(seed=3, max_iterations=100), mixed_quadratic)
        b = run_mspsa(self.config(seed=3, max_iterations=100), mixed_quadratic)
        np.testing.assert_array_equal(a.curve, b.curve)
        for ra, rb in zip(a.history, b.history):
            np.testing.assert_array_equal(ra.theta, rb.theta)
            np.testing.assert_array_equal(ra.delta, rb.delta)

    def test_common_random_numbers(self):
        calls = []

        def noisy(theta, seeds):
            calls.append(seeds)
            return float(np.dot(theta, theta))

        run_mspsa(self.config(max_iterations=5, replicates_per_eval=2), noisy)
        # initial evaluation, then + and - for each iteration
        pairs = [(calls[1 + 2 * k], calls[2 + 2 * k]) for k in range(5)]
        self.assertTrue(all(plus == minus for plus, minus in pairs))
        self.assertTrue(all(len(plus) == 2 for plus, _ in pairs))
        self.assertEqual(len({plus for plus, _ in pairs}), 5)

        calls.clear()
        run_mspsa(self.config(max_iterations=5, common_random_numbers=False), noisy)
        pairs = [(calls[1 + 2 * k], calls[2 + 2 * k]) for k in range(5)]
        self.assertTrue(all(plus != minus for plus, minus in pairs))

    def test_stall_termination(self):
        result = run_mspsa(
            self.config(stall_window=10, max_iterations=500), lambda theta, seeds: 1.0
        )
        self.assertEqual(result.nit, 10)
        self.assertIn("improved by less than", result.message)

    def test_monotone_decay_on_two_dimensional_quadratic(self):
        for seed in range(10):
            config = MspsaConfig(
                gains=GainSchedule(a=0.5, c=0.1, A=10),
                x0=[5.0, -3.0],
                bounds=[[-10, 10], [-10, 10]],
                max_iterations=100,
                stall_window=None,
                seed=seed,
                log_every=0,
            )
            result = run_mspsa(config, sphere)
            tracked = [record.loss_current for record in result.history]
            self.assertTrue(np.all(np.diff(tracked) <= 1e-12))
            self.assertLess(result.fun, result.initial_fun)

    def test_abort_carries_iteration(self):
        def failing(theta, seeds):
            if len(failing.calls) >= 7:
                raise RuntimeError("simulation failed")
            failing.calls.append(theta)
            return 1.0

        failing.calls = []
        with self.assertRaises(OptimizerAbort) as context:
            run_mspsa(self.config(max_iterations=20, track_loss=True), failing)
        # 1 initial + 3 per iteration: the eighth call is the + measurement of iteration 2
        self.assertEqual(context.exception.k, 2)
        self.assertIsInstance(context.exception.cause, RuntimeError)

    def test_nan_aborts(self):
        with self.assertRaises(OptimizerAbort):
            run_mspsa(self.config(max_iterations=5), lambda theta, seeds: float("nan"))

    def test_fractional_integer_bounds_tightened(self):
        config = self.config(
            x0=[10.5], bounds=[[0.5, 10.5]], discrete_mask=[True], max_iterations=0
        )
        np.testing.assert_array_equal(config.bounds, [[1, 10]])
        result = run_mspsa(config, lambda theta, seeds: float(theta[0]))
        np.testing.assert_array_equal(result.x, [10])
        # continuous coordinates keep their bounds
        config = self.config(
            x0=[0.2], bounds=[[0.1, 0.9]], discrete_mask=[False], max_iterations=0
        )
        np.testing.assert_array_equal(config.bounds, [[0.1, 0.9]])

    def test_integer_coordinate_without_integers(self):
        with self.assertRaises(InvalidParameterError):
            self.config(x0=[0.5], bounds=[[0.2, 0.8]], discrete_mask=[True])

    def test_invalid_config(self):
        with self.assertRaises(InvalidParameterError):
            self.config(bounds=[[1, 0]] * 6)
        with self.assertRaises(InvalidParameterError):
            self.config(max_iterations=-1)
        with self.assertRaises(InvalidParameterError):
            self.config(discrete_mask=[True, False])


if __name__ == "__main__":
    unittest.main()
