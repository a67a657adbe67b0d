#!/usr/bin/env python3
# Created at Oct 19, 2026

import unittest

import numpy as np

from mgopt.components import (
    BatterySpec,
    PvSpec,
    TurbineSpec,
    WindSpec,
    battery_step,
    max_charge_power,
    max_discharge_power,
    pv_power,
    turbine_emissions,
    turbine_fuel,
    wind_power,
)
from mgopt.exceptions import (
    InvalidParameterError,
    SimultaneousChargeDischargeError,
    StateOfChargeBoundError,
)


def pv_oracle(rated, g_stc, k_c, t_stc, g, t):
    return max(0.0, rated * g / g_stc * (1 + k_c * (t - t_stc)))


def wind_oracle(rated, v_ci, v_r, v_co, v):
    if v <= v_ci or v > v_co:
        return 0.0
    if v <= v_r:
        return rated * (v - v_ci) / (v_r - v_ci)
    return rated


class TestPvPower(unittest.TestCase):
    def test_stc_gives_rated_output(self):
        self.assertAlmostEqual(pv_power(PvSpec(rated_kw=100), 1.0, 25.0), 100.0)

    def test_zero_irradiance(self):
        self.assertEqual(pv_power(PvSpec(rated_kw=100), 0.0, 40.0), 0.0)

    def test_hot_cell_derates(self):
        # 100 * 0.8 * (1 - 0.004 * 20) = 73.6
        self.assertAlmostEqual(pv_power(PvSpec(rated_kw=100), 0.8, 45.0), 73.6)

    def test_randomized_against_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            spec = PvSpec(
                rated_kw=rng.uniform(0, 5000),
                g_stc=rng.uniform(0.5, 1.5),
                temp_coeff=rng.uniform(-0.01, 0.0),
                t_stc=rng.uniform(15, 35),
            )
            g, t = rng.uniform(0, 1.3), rng.uniform(-30, 150)
            expected = pv_oracle(spec.rated_kw, spec.g_stc, spec.temp_coeff, spec.t_stc, g, t)
            self.assertLessEqual(abs(pv_power(spec, g, t) - expected), 1e-9 * max(1.0, expected))

    def test_series_input(self):
        g = np.array([0.0, 0.5, 1.0])
        np.testing.assert_allclose(pv_power(PvSpec(rated_kw=10), g, 25.0), [0.0, 5.0, 10.0])

    def test_negative_irradiance_rejected(self):
        with self.assertRaises(InvalidParameterError):
            pv_power(PvSpec(), -0.1, 25.0)

    def test_invalid_spec(self):
        with self.assertRaises(InvalidParameterError):
            PvSpec(rated_kw=-1)
        with self.assertRaises(InvalidParameterError):
            PvSpec(g_stc=0)


class TestWindPower(unittest.TestCase):
    def setUp(self):
        self.spec = WindSpec(rated_kw=100, v_cut_in=3, v_rated=12, v_cut_out=25)

    def test_curve_regions(self):
        self.assertEqual(wind_power(self.spec, 2.0), 0.0)
        self.assertEqual(wind_power(self.spec, 3.0), 0.0)
        self.assertAlmostEqual(wind_power(self.spec, 7.5), 50.0)
        self.assertEqual(wind_power(self.spec, 12.0), 100.0)
        self.assertEqual(wind_power(self.spec, 25.0), 100.0)
        self.assertEqual(wind_power(self.spec, 25.01), 0.0)

    def test_randomized_against_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            v_ci = rng.uniform(0, 5)
            v_r = v_ci + rng.uniform(1, 10)
            v_co = v_r + rng.uniform(0, 15)
            spec = WindSpec(rng.uniform(0, 3000), v_ci, v_r, v_co)
            v = rng.uniform(0, 35)
            expected = wind_oracle(spec.rated_kw, v_ci, v_r, v_co, v)
            self.assertLessEqual(abs(wind_power(spec, v) - expected), 1e-9 * max(1.0, expected))

    def test_bad_speeds(self):
        with self.assertRaises(InvalidParameterError):
            WindSpec(v_cut_in=12, v_rated=12)
        with self.assertRaises(InvalidParameterError):
            wind_power(self.spec, np.array([1.0, -1.0]))


class TestBatteryStep(unittest.TestCase):
    def setUp(self):
        self.spec = BatterySpec(
            capacity_kwh=100,
            eta_carryover=1.0,
            eta_charge=0.9,
            eta_discharge=0.9,
            soc_min=0.2,
            soc_max=1.0,
            soc_init=0.5,
        )

    def test_defaults_half_capacity_power(self):
        spec = BatterySpec(capacity_kwh=200)
        self.assertEqual(spec.p_charge_max, 100)
        self.assertEqual(spec.p_discharge_max, 100)

    def test_charge(self):
        # 0.5 + 10 * 0.9 / 100
        self.assertAlmostEqual(battery_step(self.spec, 0.5, 10, 0), 0.59)

    def test_discharge(self):
        # 0.5 - 18 / (100 * 0.9)
        self.assertAlmostEqual(battery_step(self.spec, 0.5, 0, 18), 0.3)

    def test_idle_with_carryover_losses(self):
        spec = BatterySpec(capacity_kwh=100, eta_carryover=0.99, soc_min=0.2)
        self.assertAlmostEqual(battery_step(spec, 0.5, 0, 0), 0.495)

    def test_randomized_against_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            spec = BatterySpec(
                capacity_kwh=rng.uniform(10, 5000),
                eta_carryover=1.0,
                eta_charge=rng.uniform(0.7, 1.0),
                eta_discharge=rng.uniform(0.7, 1.0),
                soc_min=0.1,
                soc_max=0.95,
                soc_init=0.5,
            )
            soc = rng.uniform(0.1, 0.95)
            if rng.random() < 0.5:
                p = rng.uniform(0, 1) * max_charge_power(spec, soc)
                expected = soc + p * spec.eta_charge / spec.capacity_kwh
                result = battery_step(spec, soc, p, 0.0)
            else:
                p = rng.uniform(0, 1) * max_discharge_power(spec, soc)
                expected = soc - p / (spec.capacity_kwh * spec.eta_discharge)
                result = battery_step(spec, soc, 0.0, p)
            self.assertLessEqual(abs(result - expected), 1e-9 * abs(expected))

    def test_round_trip_recovers_efficiency_share(self):
        # charging E kWh and then discharging back to the start returns eta_ch * eta_dch * E
        rng = np.random.default_rng(5)
        for _ in range(50):
            spec = BatterySpec(
                capacity_kwh=rng.uniform(10, 5000),
                eta_carryover=1.0,
                eta_charge=rng.uniform(0.7, 1.0),
                eta_discharge=rng.uniform(0.7, 1.0),
                soc_min=0.1,
                soc_max=0.95,
                soc_init=0.5,
            )
            start = rng.uniform(0.1, 0.5)
            energy = rng.uniform(0, 1) * max_charge_power(spec, start)
            charged = battery_step(spec, start, energy, 0.0)
            recovered = spec.eta_charge * spec.eta_discharge * energy
            self.assertAlmostEqual(battery_step(spec, charged, 0.0, recovered), start, delta=1e-12)

    def test_headroom_reaches_the_bounds(self):
        p = max_charge_power(self.spec, 0.95)
        self.assertAlmostEqual(battery_step(self.spec, 0.95, p, 0), 1.0)
        p = max_discharge_power(self.spec, 0.3)
        self.assertAlmostEqual(battery_step(self.spec, 0.3, 0, p), 0.2)

    def test_headroom_limited_by_power_rating(self):
        self.assertEqual(max_charge_power(self.spec, 0.2), self.spec.p_charge_max)
        self.assertEqual(max_discharge_power(self.spec, 1.0), self.spec.p_discharge_max)

    def test_full_battery_cannot_charge(self):
        self.assertEqual(max_charge_power(self.spec, 1.0), 0.0)
        self.assertEqual(max_discharge_power(self.spec, 0.2), 0.0)

    def test_simultaneous_rejected(self):
        with self.assertRaises(SimultaneousChargeDischargeError):
            battery_step(self.spec, 0.5, 1, 1)

    def test_overcharge_rejected(self):
        with self.assertRaises(StateOfChargeBoundError):
            battery_step(self.spec, 0.99, 5, 0)

    def test_overdischarge_rejected(self):
        with self.assertRaises(StateOfChargeBoundError):
            battery_step(self.spec, 0.21, 0, 5)

    def test_power_limit_rejected(self):
        with self.assertRaises(InvalidParameterError):
            battery_step(self.spec, 0.5, 51, 0)
        with self.assertRaises(InvalidParameterError):
            battery_step(self.spec, 0.5, -1, 0)

    def test_zero_capacity(self):
        spec = BatterySpec(capacity_kwh=0)
        self.assertEqual(max_charge_power(spec, 0.5), 0.0)
        self.assertEqual(battery_step(spec, 0.5, 0, 0), 0.5)
        with self.assertRaises(InvalidParameterError):
            battery_step(spec, 0.5, 1, 0)

    def test_invalid_spec(self):
        with self.assertRaises(InvalidParameterError):
            BatterySpec(eta_charge=0)
        with self.assertRaises(InvalidParameterError):
            BatterySpec(soc_min=0.6, soc_init=0.5)

    def test_scaled_keeps_power_ratio(self):
        spec = BatterySpec(capacity_kwh=1, p_charge_max=0.25, p_discharge_max=0.5).scaled(400)
        self.assertEqual(spec.capacity_kwh, 400)
        self.assertAlmostEqual(spec.p_charge_max, 100)
        self.assertAlmostEqual(spec.p_discharge_max, 200)


class TestTurbine(unittest.TestCase):
    def test_proportional(self):
        spec = TurbineSpec(rated_kw=100, emissions_factor=0.7, fuel_rate=0.25)
        self.assertAlmostEqual(float(turbine_emissions(spec, 200)), 140.0)
        self.assertAlmostEqual(float(turbine_fuel(spec, 200)), 50.0)


if __name__ == "__main__":
    unittest.main()
