#!/usr/bin/env python3
"""
.. module dispatch
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Hour-by-hour simulation of one year of islanded operation with a fixed greedy merit order.
    Renewables serve the load first and their surplus charges the battery, the rest being curtailed.
    A deficit is met by the battery, then by the microturbine, and whatever remains is unserved.
"""

import dataclasses
from typing import ClassVar, Dict, Optional, Tuple

import numpy as np
from lazy_property import LazyProperty
from numba import jit

from mgopt.components import (
    BatterySpec,
    PvSpec,
    TurbineSpec,
    WindSpec,
    _charge_headroom,
    _discharge_headroom,
    _soc_update,
    pv_power,
    wind_power,
)
from mgopt.exceptions import InvalidParameterError, ScenarioLengthError
from mgopt.scenario import ScenarioBundle
from mgopt.tools import round_half_up
from mgopt.type_aliases import BoolVector, Vector

# ===================== What can be exported? =====================
__all__ = [
    "DesignVector",
    "ComponentSpecs",
    "DispatchTrace",
    "simulate_year",
    "renewable_penetration",
    "emissions_reduction",
]

UNSERVED_TOLERANCE = 1e-9


@dataclasses.dataclass(frozen=True)
class DesignVector:
    """
    The decision vector: four capacities and two incentive thresholds.
    Capacities are integers once finalized; the optimizers may hold fractional working values.

    :param pv_kw: PV capacity in kW.
    :param wt_kw: Wind capacity in kW.
    :param bss_kwh: Battery capacity in kWh.
    :param mt_kw: Microturbine capacity in kW.
    :param t_rp: Renewable-penetration threshold, a fraction.
    :param t_er: Emissions-reduction threshold, a fraction.
    """

    pv_kw: float = 0.0
    wt_kw: float = 0.0
    bss_kwh: float = 0.0
    mt_kw: float = 0.0
    t_rp: float = 0.0
    t_er: float = 0.0

    FIELDS: ClassVar[Tuple[str, ...]] = ("pv_kw", "wt_kw", "bss_kwh", "mt_kw", "t_rp", "t_er")
    DISCRETE_MASK: ClassVar[BoolVector] = np.array([True, True, True, True, False, False])

    def to_array(self) -> Vector:
        return np.array([getattr(self, f) for f in self.FIELDS], dtype=float)

    @classmethod
    def from_array(cls, values) -> "DesignVector":
        values = np.asarray(values, dtype=float)
        if values.shape != (len(cls.FIELDS),):
            raise InvalidParameterError(
                "design", "expected {0} values, got shape {1}".format(len(cls.FIELDS), values.shape)
            )
        return cls(*map(float, values))

    def rounded(self) -> "DesignVector":
        """Capacities rounded half-up to integers, thresholds untouched."""
        values = self.to_array()
        values[self.DISCRETE_MASK] = round_half_up(values[self.DISCRETE_MASK])
        return self.from_array(values)

    def without_incentives(self) -> "DesignVector":
        return dataclasses.replace(self, t_rp=0.0, t_er=0.0)

    def to_dict(self) -> Dict[str, float]:
        out = {}
        for name, value, discrete in zip(self.FIELDS, self.to_array(), self.DISCRETE_MASK):
            out[name] = int(value) if discrete and float(value).is_integer() else float(value)
        return out


@dataclasses.dataclass(frozen=True)
class ComponentSpecs:
    """
    Reference specs of the four components. Their own sizes are irrelevant: the design's capacities
    replace them in ``simulate_year``.

    :param turbine_charging: Let the microturbine charge the battery with spare capacity when there is
        no renewable surplus and the battery is not discharging.
    """

    pv: PvSpec = dataclasses.field(default_factory=PvSpec)
    wind: WindSpec = dataclasses.field(default_factory=WindSpec)
    battery: BatterySpec = dataclasses.field(default_factory=BatterySpec)
    turbine: TurbineSpec = dataclasses.field(default_factory=TurbineSpec)
    turbine_charging: bool = False


@dataclasses.dataclass(eq=False)
class DispatchTrace:
    """
    Hourly operational outcome of one simulated year. All hourly energies are kWh (one-hour steps), and
    ``soc`` holds the state of charge at the end of each hour. Annual totals are computed lazily.
    """

    load: Vector
    pv_gen: Vector
    wt_gen: Vector
    pv_used: Vector
    wt_used: Vector
    batt_charge: Vector
    batt_discharge: Vector
    batt_discharge_renewable: Vector
    mt_gen: Vector
    mt_to_battery: Vector
    curtailed: Vector
    unserved: Vector
    soc: Vector
    emissions_factor: float = 0.0
    fuel_rate: float = 0.0

    HOURLY: ClassVar[Tuple[str, ...]] = (
        "load",
        "pv_gen",
        "wt_gen",
        "pv_used",
        "wt_used",
        "batt_charge",
        "batt_discharge",
        "batt_discharge_renewable",
        "mt_gen",
        "mt_to_battery",
        "curtailed",
        "unserved",
        "soc",
    )

    @property
    def n_hours(self) -> int:
        return len(self.load)

    @LazyProperty
    def load_kwh(self) -> float:
        return float(np.sum(self.load))

    @LazyProperty
    def renewable_served_kwh(self) -> float:
        """Load served by PV and wind directly, plus the renewable part of battery discharge."""
        return float(np.sum(self.pv_used + self.wt_used + self.batt_discharge_renewable))

    @LazyProperty
    def total_served_kwh(self) -> float:
        return float(np.sum(self.load - self.unserved))

    @LazyProperty
    def mt_kwh(self) -> float:
        return float(np.sum(self.mt_gen + self.mt_to_battery))

    @LazyProperty
    def unserved_kwh(self) -> float:
        return float(np.sum(self.unserved))

    @LazyProperty
    def curtailed_kwh(self) -> float:
        return float(np.sum(self.curtailed))

    @LazyProperty
    def hll(self) -> int:
        return int(np.count_nonzero(self.unserved > UNSERVED_TOLERANCE))

    @LazyProperty
    def emissions_kg(self) -> float:
        return self.emissions_factor * self.mt_kwh

    @LazyProperty
    def fuel_units(self) -> float:
        return self.fuel_rate * self.mt_kwh

    @LazyProperty
    def baseline_emissions_kg(self) -> float:
        """Emissions had the microturbine served the whole load."""
        return self.emissions_factor * self.load_kwh

    def hourly(self) -> Dict[str, Vector]:
        return {name: getattr(self, name) for name in self.HOURLY}


@jit(nopython=True, cache=True)
def _dispatch_kernel(
    load,
    pv,
    wt,
    batt_up,
    mt_cap,
    capacity,
    eta_co,
    eta_ch,
    eta_dch,
    soc_min,
    soc_max,
    soc_init,
    p_ch_max,
    p_dch_max,
    turbine_charging,
):
    n = load.shape[0]
    pv_used = np.zeros(n)
    wt_used = np.zeros(n)
    charge = np.zeros(n)
    discharge = np.zeros(n)
    discharge_renewable = np.zeros(n)
    mt_gen = np.zeros(n)
    mt_to_battery = np.zeros(n)
    curtailed = np.zeros(n)
    unserved = np.zeros(n)
    soc_out = np.zeros(n)

    soc = soc_init
    renewable_share = 1.0  # of the energy stored in the battery
    for h in range(n):
        renewable = pv[h] + wt[h]
        used = min(renewable, load[h])
        if renewable > 0:
            pv_used[h] = used * pv[h] / renewable
            wt_used[h] = used - pv_used[h]
        surplus = renewable - used
        deficit = load[h] - used

        if batt_up[h]:
            if surplus > 0:
                charge[h] = min(
                    surplus, _charge_headroom(soc, capacity, eta_co, eta_ch, soc_max, p_ch_max)
                )
            elif deficit > 0:
                discharge[h] = min(
                    deficit,
                    _discharge_headroom(soc, capacity, eta_co, eta_dch, soc_min, p_dch_max),
                )
        curtailed[h] = surplus - charge[h]
        deficit -= discharge[h]
        discharge_renewable[h] = discharge[h] * renewable_share

        mt_gen[h] = min(deficit, mt_cap[h])
        deficit -= mt_gen[h]
        unserved[h] = deficit if deficit > 0 else 0.0

        renewable_in = charge[h]
        if (
            turbine_charging
            and batt_up[h]
            and surplus <= 0
            and discharge[h] == 0
            and mt_cap[h] > mt_gen[h]
        ):
            mt_to_battery[h] = min(
                mt_cap[h] - mt_gen[h],
                _charge_headroom(soc, capacity, eta_co, eta_ch, soc_max, p_ch_max),
            )
            charge[h] = mt_to_battery[h]

        if capacity > 0:
            stored = eta_co * soc * capacity
            soc = _soc_update(
                soc, charge[h], discharge[h], capacity, eta_co, eta_ch, eta_dch
            )
            if charge[h] > 0:
                total = stored + charge[h] * eta_ch
                if total > 0:
                    renewable_share = (
                        renewable_share * stored + renewable_in * eta_ch
                    ) / total
        else:
            soc = eta_co * soc
        soc_out[h] = soc

    return (
        pv_used,
        wt_used,
        charge,
        discharge,
        discharge_renewable,
        mt_gen,
        mt_to_battery,
        curtailed,
        unserved,
        soc_out,
    )


def simulate_year(
    design: DesignVector, scenario: ScenarioBundle, specs: ComponentSpecs
) -> DispatchTrace:
    """
    Simulate the microgrid built to *design* through *scenario*.
    Each component's output is zero in the hours it is unavailable; a failed battery can neither charge
    nor discharge, though its stored energy still decays by the carry-over factor.

    :param design: Capacities (fractional values are used as given) and thresholds.
    :param scenario: One stochastic year.
    :param specs: Reference component specs.
    :return: The hourly trace.
    """
    for name in DesignVector.FIELDS[:4]:
        value = getattr(design, name)
        if not value >= 0:
            raise InvalidParameterError(name, "capacity must be >= 0, got {0}".format(value))

    n = scenario.n_hours
    for name in ("irradiance", "temperature", "wind_speed"):
        if len(getattr(scenario, name)) != n:
            raise ScenarioLengthError(
                "Series '{0}' does not match the load length {1}!".format(name, n)
            )

    pv_spec = specs.pv.scaled(design.pv_kw)
    wt_spec = specs.wind.scaled(design.wt_kw)
    battery = specs.battery.scaled(design.bss_kwh)
    turbine = specs.turbine.scaled(design.mt_kw)

    pv = np.where(
        scenario.available("pv"), pv_power(pv_spec, scenario.irradiance, scenario.temperature), 0.0
    )
    wt = np.where(scenario.available("wt"), wind_power(wt_spec, scenario.wind_speed), 0.0)
    mt_cap = np.where(scenario.available("mt"), turbine.rated_kw, 0.0)
    batt_up = np.ascontiguousarray(scenario.available("bss"))

    (
        pv_used,
        wt_used,
        charge,
        discharge,
        discharge_renewable,
        mt_gen,
        mt_to_battery,
        curtailed,
        unserved,
        soc,
    ) = _dispatch_kernel(
        scenario.load,
        np.ascontiguousarray(pv, dtype=float),
        np.ascontiguousarray(wt, dtype=float),
        batt_up,
        np.ascontiguousarray(mt_cap, dtype=float),
        battery.capacity_kwh,
        battery.eta_carryover,
        battery.eta_charge,
        battery.eta_discharge,
        battery.soc_min,
        battery.soc_max,
        battery.soc_init,
        float(battery.p_charge_max),
        float(battery.p_discharge_max),
        specs.turbine_charging,
    )
    return DispatchTrace(
        load=scenario.load,
        pv_gen=pv,
        wt_gen=wt,
        pv_used=pv_used,
        wt_used=wt_used,
        batt_charge=charge,
        batt_discharge=discharge,
        batt_discharge_renewable=discharge_renewable,
        mt_gen=mt_gen,
        mt_to_battery=mt_to_battery,
        curtailed=curtailed,
        unserved=unserved,
        soc=soc,
        emissions_factor=turbine.emissions_factor,
        fuel_rate=turbine.fuel_rate,
    )


def renewable_penetration(trace: DispatchTrace) -> float:
    """
    Share of served energy that came from renewables, counting battery discharge of renewable origin.
    A year in which nothing is served counts as fully renewable.
    """
    if trace.total_served_kwh <= 0:
        return 1.0
    return min(trace.renewable_served_kwh / trace.total_served_kwh, 1.0)


def emissions_reduction(trace: DispatchTrace, specs: Optional[ComponentSpecs] = None) -> float:
    """
    One minus the ratio of actual emissions to the emissions of serving the whole load with the
    microturbine, clamped to :math:`[0, 1]`. Zero load (or a zero emissions factor) gives ``1.0``.
    """
    factor = trace.emissions_factor if specs is None else specs.turbine.emissions_factor
    baseline = factor * trace.load_kwh
    if baseline <= 0:
        return 1.0
    actual = factor * trace.mt_kwh
    return float(np.clip(1.0 - actual / baseline, 0.0, 1.0))
