#!/usr/bin/env python3
# Created at Oct 19, 2026

import unittest

import numpy as np

from mgopt.components import BatterySpec
from mgopt.dispatch import (
    ComponentSpecs,
    DesignVector,
    emissions_reduction,
    renewable_penetration,
    simulate_year,
)
from mgopt.exceptions import InvalidParameterError
from mgopt.scenario import ScenarioBundle


def bundle(load, irradiance=None, wind=None, availability=None) -> ScenarioBundle:
    load = np.asarray(load, dtype=float)
    n = load.size
    return ScenarioBundle(
        irradiance=np.zeros(n) if irradiance is None else irradiance,
        temperature=np.full(n, 25.0),
        wind_speed=np.zeros(n) if wind is None else wind,
        load=load,
        availability=availability or {},
    )


class TestDesignVector(unittest.TestCase):
    def test_rounding_only_touches_capacities(self):
        d = DesignVector(1.5, 2.4, 2.5, 0.49, 0.123, 0.5).rounded()
        np.testing.assert_array_equal(d.to_array(), [2, 2, 3, 0, 0.123, 0.5])

    def test_to_dict_integers(self):
        d = DesignVector(1686, 1077, 1783, 1756, 0.25, 0.5).to_dict()
        self.assertIsInstance(d["pv_kw"], int)
        self.assertEqual(d["t_er"], 0.5)

    def test_from_array_shape(self):
        with self.assertRaises(InvalidParameterError):
            DesignVector.from_array([1, 2, 3])


class TestSimulateYear(unittest.TestCase):
    def setUp(self):
        self.specs = ComponentSpecs()

    def test_turbine_short_of_load(self):
        trace = simulate_year(DesignVector(mt_kw=80), bundle([100.0]), self.specs)
        self.assertAlmostEqual(trace.mt_gen[0], 80)
        self.assertAlmostEqual(trace.unserved[0], 20)
        self.assertEqual(trace.hll, 1)

    def test_surplus_with_full_battery_is_curtailed(self):
        specs = ComponentSpecs(battery=BatterySpec(soc_init=1.0, soc_max=1.0))
        trace = simulate_year(
            DesignVector(pv_kw=100, bss_kwh=100), bundle([50.0], irradiance=np.array([0.7])), specs
        )
        self.assertAlmostEqual(trace.pv_used[0], 50)
        self.assertAlmostEqual(trace.curtailed[0], 20)
        self.assertAlmostEqual(trace.soc[0], 1.0)
        self.assertEqual(trace.batt_charge[0], 0)

    def test_surplus_charges_then_battery_serves_night(self):
        irradiance = np.array([1.0, 0.0])
        trace = simulate_year(
            DesignVector(pv_kw=100, bss_kwh=100), bundle([40.0, 30.0], irradiance), self.specs
        )
        self.assertAlmostEqual(trace.batt_charge[0], 50)  # power limit 0.5 kW/kWh
        self.assertAlmostEqual(trace.curtailed[0], 10)
        self.assertAlmostEqual(trace.batt_discharge[1], 30)
        self.assertEqual(trace.hll, 0)
        self.assertEqual(renewable_penetration(trace), 1.0)

    def test_zero_capacity_design(self):
        load = np.full(24, 10.0)
        load[:4] = 0.0
        trace = simulate_year(DesignVector(), bundle(load), self.specs)
        self.assertEqual(trace.hll, 20)
        self.assertEqual(renewable_penetration(trace), 1.0)
        self.assertEqual(emissions_reduction(trace), 1.0)

    def test_all_turbine_design(self):
        load = 1000 + 500 * np.sin(np.arange(48) / 3)
        trace = simulate_year(DesignVector(mt_kw=2000), bundle(load), self.specs)
        self.assertEqual(trace.hll, 0)
        self.assertEqual(renewable_penetration(trace), 0.0)
        self.assertAlmostEqual(emissions_reduction(trace), 0.0)
        self.assertAlmostEqual(trace.emissions_kg, 0.8 * load.sum())
        self.assertAlmostEqual(trace.fuel_units, 0.3 * load.sum())

    def test_zero_load(self):
        trace = simulate_year(
            DesignVector(100, 100, 100, 100), bundle(np.zeros(24), np.full(24, 0.5)), self.specs
        )
        self.assertEqual(trace.unserved_kwh, 0)
        self.assertEqual(trace.hll, 0)
        self.assertEqual(trace.mt_kwh, 0)
        self.assertEqual(emissions_reduction(trace), 1.0)

    def test_outage_masks_output(self):
        up = np.array([True, False, True])
        trace = simulate_year(
            DesignVector(pv_kw=100, mt_kw=100),
            bundle([50.0, 50.0, 50.0], np.full(3, 1.0), availability={"pv": up, "mt": ~up}),
            self.specs,
        )
        np.testing.assert_allclose(trace.pv_gen, [100, 0, 100])
        np.testing.assert_allclose(trace.mt_gen, [0, 50, 0])

    def test_failed_battery_is_idle(self):
        down = np.zeros(2, dtype=bool)
        trace = simulate_year(
            DesignVector(pv_kw=100, bss_kwh=100),
            bundle([10.0, 10.0], np.array([1.0, 0.0]), availability={"bss": down}),
            self.specs,
        )
        np.testing.assert_array_equal(trace.batt_charge, 0)
        np.testing.assert_array_equal(trace.batt_discharge, 0)
        np.testing.assert_allclose(trace.soc, 0.5)

    def test_turbine_charging(self):
        specs = ComponentSpecs(
            battery=BatterySpec(soc_init=0.1, soc_min=0.1), turbine_charging=True
        )
        trace = simulate_year(DesignVector(bss_kwh=100, mt_kw=200), bundle([50.0, 50.0]), specs)
        self.assertAlmostEqual(trace.mt_to_battery[0], 50)
        self.assertAlmostEqual(trace.soc[0], 0.1 + 50 * 0.95 / 100)
        self.assertGreater(trace.batt_discharge[1], 0)
        self.assertLess(trace.batt_discharge_renewable[1], trace.batt_discharge[1])
        self.assertAlmostEqual(trace.mt_kwh, trace.mt_gen.sum() + 50)

        specs = ComponentSpecs(battery=BatterySpec(soc_init=0.1, soc_min=0.1))
        trace = simulate_year(DesignVector(bss_kwh=100, mt_kw=200), bundle([50.0, 50.0]), specs)
        np.testing.assert_array_equal(trace.mt_to_battery, 0)

    def test_unserved_nonincreasing_in_turbine_capacity(self):
        rng = np.random.default_rng(99)
        n = 168
        for _ in range(20):
            pv_kw, wt_kw, bss_kwh = rng.uniform(0, 3000, 3)
            scenario = bundle(
                rng.uniform(0, 2500, n),
                np.clip(rng.normal(0.4, 0.4, n), 0, None),
                rng.weibull(2.0, n) * 6.8,
                {name: rng.random(n) > 0.1 for name in ("pv", "wt", "bss", "mt")},
            )
            unserved = [
                simulate_year(DesignVector(pv_kw, wt_kw, bss_kwh, mt_kw), scenario, self.specs).unserved_kwh
                for mt_kw in np.linspace(0, 3000, 7)
            ]
            self.assertTrue(np.all(np.diff(unserved) <= 1e-9), unserved)

    def test_negative_capacity(self):
        with self.assertRaises(InvalidParameterError):
            simulate_year(DesignVector(pv_kw=-1), bundle([1.0]), self.specs)

    def test_energy_balance_and_soc_bounds(self):
        rng = np.random.default_rng(1234)
        n = 240
        for i in range(1000):
            design = DesignVector(*rng.uniform(0, 3000, 4), 0.0, 0.0)
            availability = {
                name: rng.random(n) > 0.1 for name in ("pv", "wt", "bss", "mt")
            }
            scenario = bundle(
                rng.uniform(0, 2500, n),
                np.clip(rng.normal(0.4, 0.4, n), 0, None),
                rng.weibull(2.0, n) * 6.8,
                availability,
            )
            specs = ComponentSpecs(turbine_charging=bool(i % 2))
            trace = simulate_year(design, scenario, specs)
            served = trace.pv_used + trace.wt_used + trace.batt_discharge + trace.mt_gen
            np.testing.assert_allclose(
                served + trace.unserved, trace.load, rtol=1e-6, atol=1e-9
            )
            renewable_to_battery = trace.batt_charge - trace.mt_to_battery
            np.testing.assert_allclose(
                trace.pv_used + trace.wt_used + renewable_to_battery + trace.curtailed,
                trace.pv_gen + trace.wt_gen,
                rtol=1e-6,
                atol=1e-9,
            )
            self.assertTrue(np.all(trace.soc >= specs.battery.soc_min - 1e-9))
            self.assertTrue(np.all(trace.soc <= specs.battery.soc_max + 1e-9))
            self.assertTrue(np.all((trace.batt_charge == 0) | (trace.batt_discharge == 0)))
            self.assertTrue(0.0 <= renewable_penetration(trace) <= 1.0)
            self.assertTrue(0.0 <= emissions_reduction(trace) <= 1.0)


if __name__ == "__main__":
    unittest.main()
