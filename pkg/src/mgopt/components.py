#!/usr/bin/env python3
"""
.. module components
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Per-hour physical models of the four microgrid components: the PV array, the wind-turbine
    power curve, the battery state-of-charge recursion and the microturbine's fuel and emissions.
    The PV and wind models are ``numba`` ufuncs so they apply to scalars and hourly series alike.
    The battery helpers prefixed with an underscore are jitted scalars shared with the dispatch kernel.
"""

import dataclasses
import math
from typing import Optional

import numpy as np
from numba import float64, jit, vectorize

from mgopt.exceptions import (
    InvalidParameterError,
    SimultaneousChargeDischargeError,
    StateOfChargeBoundError,
)

# ===================== What can be exported? =====================
__all__ = [
    "PvSpec",
    "WindSpec",
    "BatterySpec",
    "TurbineSpec",
    "pv_power",
    "wind_power",
    "battery_step",
    "max_charge_power",
    "max_discharge_power",
    "turbine_emissions",
    "turbine_fuel",
]

SOC_TOLERANCE = 1e-9


@dataclasses.dataclass(frozen=True)
class PvSpec:
    """
    :param rated_kw: Output at standard test conditions, :math:`P_{STC}`, in kW.
    :param g_stc: Reference irradiance in kW/m^2.
    :param temp_coeff: Power temperature coefficient :math:`k_c` per degree Celsius, usually negative.
    :param t_stc: Reference cell temperature in degrees Celsius.
    """

    rated_kw: float = 1.0
    g_stc: float = 1.0
    temp_coeff: float = -0.004
    t_stc: float = 25.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.rated_kw >= 0:
            raise InvalidParameterError("pv.rated_kw", "must be >= 0, got {0}".format(self.rated_kw))
        if not self.g_stc > 0:
            raise InvalidParameterError("pv.g_stc", "must be > 0, got {0}".format(self.g_stc))
        if not math.isfinite(self.temp_coeff):
            raise InvalidParameterError("pv.temp_coeff", "must be finite")

    def scaled(self, rated_kw: float) -> "PvSpec":
        return dataclasses.replace(self, rated_kw=float(rated_kw))


@dataclasses.dataclass(frozen=True)
class WindSpec:
    """
    :param rated_kw: Rated output of the fleet in kW.
    :param v_cut_in: Cut-in speed :math:`v_{ci}` (m/s); no output at or below it.
    :param v_rated: Speed (m/s) at which rated output is reached.
    :param v_cut_out: Cut-out speed :math:`v_{co}` (m/s); no output above it.
    """

    rated_kw: float = 1.0
    v_cut_in: float = 3.0
    v_rated: float = 12.0
    v_cut_out: float = 25.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.rated_kw >= 0:
            raise InvalidParameterError("wt.rated_kw", "must be >= 0, got {0}".format(self.rated_kw))
        if not 0 <= self.v_cut_in < self.v_rated <= self.v_cut_out:
            raise InvalidParameterError(
                "wt.v_cut_in/v_rated/v_cut_out",
                "need 0 <= v_cut_in < v_rated <= v_cut_out, got {0}, {1}, {2}".format(
                    self.v_cut_in, self.v_rated, self.v_cut_out
                ),
            )

    def scaled(self, rated_kw: float) -> "WindSpec":
        return dataclasses.replace(self, rated_kw=float(rated_kw))


@dataclasses.dataclass(frozen=True)
class BatterySpec:
    """
    Battery bank with an hourly time step.
    When either power limit is omitted it defaults to half the energy capacity per hour.

    :param capacity_kwh: Energy capacity :math:`E_{max}` in kWh.
    :param eta_carryover: Fraction of stored energy kept from one hour to the next.
    :param eta_charge: Charging efficiency.
    :param eta_discharge: Discharging efficiency.
    :param soc_min: Lowest allowed state of charge.
    :param soc_max: Highest allowed state of charge.
    :param soc_init: State of charge at hour 0.
    :param p_charge_max: Charging power limit in kW.
    :param p_discharge_max: Discharging power limit in kW, may be ``inf``.
    """

    capacity_kwh: float = 1.0
    eta_carryover: float = 1.0
    eta_charge: float = 0.95
    eta_discharge: float = 0.95
    soc_min: float = 0.1
    soc_max: float = 1.0
    soc_init: float = 0.5
    p_charge_max: Optional[float] = None
    p_discharge_max: Optional[float] = None

    def __post_init__(self):
        if self.p_charge_max is None:
            object.__setattr__(self, "p_charge_max", 0.5 * self.capacity_kwh)
        if self.p_discharge_max is None:
            object.__setattr__(self, "p_discharge_max", 0.5 * self.capacity_kwh)
        self.validate()

    def validate(self):
        if not self.capacity_kwh >= 0:
            raise InvalidParameterError(
                "bss.capacity_kwh", "must be >= 0, got {0}".format(self.capacity_kwh)
            )
        for name in ("eta_charge", "eta_discharge", "eta_carryover"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise InvalidParameterError(
                    "bss." + name, "must be in (0, 1], got {0}".format(value)
                )
        if not 0 <= self.soc_min <= self.soc_init <= self.soc_max <= 1:
            raise InvalidParameterError(
                "bss.soc_min/soc_init/soc_max",
                "need 0 <= soc_min <= soc_init <= soc_max <= 1, got {0}, {1}, {2}".format(
                    self.soc_min, self.soc_init, self.soc_max
                ),
            )
        for name in ("p_charge_max", "p_discharge_max"):
            value = getattr(self, name)
            if not value >= 0:
                raise InvalidParameterError("bss." + name, "must be >= 0, got {0}".format(value))

    def scaled(self, capacity_kwh: float) -> "BatterySpec":
        """
        A bank of *capacity_kwh* with the same chemistry. Power limits keep their ratio to the capacity.
        """
        capacity_kwh = float(capacity_kwh)
        if self.capacity_kwh > 0:
            ratio = capacity_kwh / self.capacity_kwh
            p_ch, p_dch = self.p_charge_max * ratio, self.p_discharge_max * ratio
        else:
            p_ch = p_dch = 0.5 * capacity_kwh
        return dataclasses.replace(
            self, capacity_kwh=capacity_kwh, p_charge_max=p_ch, p_discharge_max=p_dch
        )


@dataclasses.dataclass(frozen=True)
class TurbineSpec:
    """
    Microturbine. Emissions and fuel use are proportional to the energy it generates.

    :param rated_kw: Maximum output in kW.
    :param emissions_factor: kg CO2 per kWh generated.
    :param fuel_rate: Fuel units per kWh generated.
    """

    rated_kw: float = 1.0
    emissions_factor: float = 0.8
    fuel_rate: float = 0.3

    def __post_init__(self):
        self.validate()

    def validate(self):
        for name in ("rated_kw", "emissions_factor", "fuel_rate"):
            value = getattr(self, name)
            if not value >= 0:
                raise InvalidParameterError("mt." + name, "must be >= 0, got {0}".format(value))

    def scaled(self, rated_kw: float) -> "TurbineSpec":
        return dataclasses.replace(self, rated_kw=float(rated_kw))


@vectorize(
    [float64(float64, float64, float64, float64, float64, float64)],
    nopython=True,
    cache=True,
)
def _pv_power(rated_kw, g_stc, temp_coeff, t_stc, irradiance, temperature):
    p = rated_kw * (irradiance / g_stc) * (1 + temp_coeff * (temperature - t_stc))
    if p < 0:
        return 0.0
    return p


@vectorize(
    [float64(float64, float64, float64, float64, float64)], nopython=True, cache=True
)
def _wind_power(rated_kw, v_cut_in, v_rated, v_cut_out, v):
    if v <= v_cut_in or v > v_cut_out:
        return 0.0
    if v <= v_rated:
        return rated_kw * (v - v_cut_in) / (v_rated - v_cut_in)
    return rated_kw


def pv_power(spec: PvSpec, irradiance, temperature):
    """
    PV array output, :math:`P_{STC} (G_c / G_{STC}) [1 + k_c (T_c - T_{STC})]`, floored at 0.

    :param spec: The array.
    :param irradiance: Irradiance in kW/m^2, a scalar or an hourly series.
    :param temperature: Ambient temperature in degrees Celsius, broadcastable against *irradiance*.
    :return: Output in kW, same shape as the broadcast inputs.
    """
    spec.validate()
    if np.any(np.asarray(irradiance) < 0):
        raise InvalidParameterError("irradiance", "must be >= 0 everywhere")
    return _pv_power(
        spec.rated_kw, spec.g_stc, spec.temp_coeff, spec.t_stc, irradiance, temperature
    )


def wind_power(spec: WindSpec, wind_speed):
    """
    Piecewise power curve: zero for :math:`v \\le v_{ci}` and for :math:`v > v_{co}`, a linear ramp on
    :math:`(v_{ci}, v_r]` and rated output on :math:`(v_r, v_{co}]`.
    """
    spec.validate()
    if np.any(np.asarray(wind_speed) < 0):
        raise InvalidParameterError("wind_speed", "must be >= 0 everywhere")
    return _wind_power(
        spec.rated_kw, spec.v_cut_in, spec.v_rated, spec.v_cut_out, wind_speed
    )


@jit(nopython=True, cache=True)
def _soc_update(
    soc_prev, p_charge, p_discharge, capacity, eta_co, eta_ch, eta_dch
):
    soc = eta_co * soc_prev
    if p_charge > 0:
        soc += p_charge * eta_ch / capacity
    if p_discharge > 0:
        soc -= p_discharge / (capacity * eta_dch)
    return soc


@jit(nopython=True, cache=True)
def _charge_headroom(soc_prev, capacity, eta_co, eta_ch, soc_max, p_max):
    if capacity <= 0:
        return 0.0
    p = (soc_max - eta_co * soc_prev) * capacity / eta_ch
    return min(max(p, 0.0), p_max)


@jit(nopython=True, cache=True)
def _discharge_headroom(soc_prev, capacity, eta_co, eta_dch, soc_min, p_max):
    if capacity <= 0:
        return 0.0
    p = (eta_co * soc_prev - soc_min) * capacity * eta_dch
    return min(max(p, 0.0), p_max)


def _lowest_allowed_soc(spec: BatterySpec, soc_prev: float) -> float:
    # With carry-over losses an idle battery may decay below soc_min.
    return min(spec.soc_min, spec.eta_carryover * soc_prev)


def battery_step(
    spec: BatterySpec, soc_prev: float, p_charge: float, p_discharge: float
) -> float:
    """
    Advance the state of charge by one hour:

    .. math::

        S(h) = \\eta_{co} S(h-1) + P_{ch} \\eta_{ch} / E_{max} - P_{dch} / (E_{max} \\eta_{dch}).

    The caller is responsible for choosing powers that keep the result in bounds;
    this function only checks it.

    :param spec: The battery.
    :param soc_prev: State of charge at the previous hour.
    :param p_charge: Charging power in kW, held for one hour.
    :param p_discharge: Discharging power in kW, held for one hour.
    :return: The new state of charge.
    """
    spec.validate()
    if p_charge < 0 or p_discharge < 0:
        raise InvalidParameterError(
            "p_charge/p_discharge",
            "powers must be >= 0, got {0}, {1}".format(p_charge, p_discharge),
        )
    if p_charge > 0 and p_discharge > 0:
        raise SimultaneousChargeDischargeError(
            "Cannot charge ({0} kW) and discharge ({1} kW) in the same hour!".format(
                p_charge, p_discharge
            )
        )
    if p_charge > spec.p_charge_max + SOC_TOLERANCE:
        raise InvalidParameterError(
            "p_charge", "{0} kW exceeds the limit {1} kW".format(p_charge, spec.p_charge_max)
        )
    if p_discharge > spec.p_discharge_max + SOC_TOLERANCE:
        raise InvalidParameterError(
            "p_discharge",
            "{0} kW exceeds the limit {1} kW".format(p_discharge, spec.p_discharge_max),
        )

    lower = spec.soc_min if spec.eta_carryover == 1 else 0.0
    if not lower - SOC_TOLERANCE <= soc_prev <= spec.soc_max + SOC_TOLERANCE:
        raise StateOfChargeBoundError(
            "Previous SOC {0} is outside [{1}, {2}]!".format(soc_prev, lower, spec.soc_max)
        )

    if spec.capacity_kwh == 0:
        if p_charge > 0 or p_discharge > 0:
            raise InvalidParameterError(
                "bss.capacity_kwh", "a zero-capacity battery cannot exchange energy"
            )
        return spec.eta_carryover * soc_prev

    soc = _soc_update(
        soc_prev,
        p_charge,
        p_discharge,
        spec.capacity_kwh,
        spec.eta_carryover,
        spec.eta_charge,
        spec.eta_discharge,
    )
    if not (
        _lowest_allowed_soc(spec, soc_prev) - SOC_TOLERANCE
        <= soc
        <= spec.soc_max + SOC_TOLERANCE
    ):
        raise StateOfChargeBoundError(
            "SOC would become {0}, outside [{1}, {2}]!".format(
                soc, spec.soc_min, spec.soc_max
            )
        )
    return soc


def max_charge_power(spec: BatterySpec, soc_prev: float) -> float:
    """
    The largest charging power such that one ``battery_step`` stays below ``soc_max`` and within the
    charging limit.
    """
    return _charge_headroom(
        soc_prev,
        spec.capacity_kwh,
        spec.eta_carryover,
        spec.eta_charge,
        spec.soc_max,
        spec.p_charge_max,
    )


def max_discharge_power(spec: BatterySpec, soc_prev: float) -> float:
    """
    The largest discharging power such that one ``battery_step`` stays above ``soc_min`` and within the
    discharging limit.
    """
    return _discharge_headroom(
        soc_prev,
        spec.capacity_kwh,
        spec.eta_carryover,
        spec.eta_discharge,
        spec.soc_min,
        spec.p_discharge_max,
    )


def turbine_emissions(spec: TurbineSpec, energy_kwh):
    return spec.emissions_factor * np.asarray(energy_kwh, dtype=float)


def turbine_fuel(spec: TurbineSpec, energy_kwh):
    return spec.fuel_rate * np.asarray(energy_kwh, dtype=float)
