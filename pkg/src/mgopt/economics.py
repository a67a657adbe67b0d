#!/usr/bin/env python3
"""
.. module economics
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Turn dispatch traces and a design into the penalized loss: capital and operating costs,
    carbon tax, fuel and lost-load costs, the two policy subsidies, capital-recovery annualization and a
    quadratic penalty on hours of lost load above the allowance.
"""

import dataclasses
import math
from typing import Dict, Iterable, Mapping, Union

import numpy as np

from mgopt.dispatch import (
    DesignVector,
    DispatchTrace,
    emissions_reduction,
    renewable_penetration,
)
from mgopt.exceptions import EmptyTraceError, InvalidParameterError
from mgopt.scenario import COMPONENTS

# ===================== What can be exported? =====================
__all__ = [
    "CostParams",
    "CostBreakdown",
    "crf",
    "incentive_rp",
    "incentive_er",
    "penalty",
    "evaluate_loss",
]

ER_GATINGS = ("prose", "equation")

# Design fields carrying each component's capacity.
_CAPACITY_FIELDS = dict(zip(COMPONENTS, DesignVector.FIELDS[:4]))


@dataclasses.dataclass(frozen=True)
class CostParams:
    """
    :param capex_unit: One-time cost per kW (per kWh for ``bss``) keyed by component.
    :param opex_unit: Annual cost per kW (per kWh for ``bss``) keyed by component.
    :param carbon_tax: USD per kg CO2.
    :param fuel_price: USD per fuel unit.
    :param voll: Value of lost load, USD per unserved kWh.
    :param discount_rate: Annual discount rate :math:`i`.
    :param lifetime_years: Project lifetime :math:`n`.
    :param h_max: Allowed hours of lost load per year.
    :param penalty_r: Penalty parameter :math:`r`, USD per squared hour.
    :param lifetime_sum: Multiply annual terms by the lifetime before annualizing. ``False`` sums one year
        of operating cost with the capital cost as written in the plain objective.
    :param er_gating: ``"prose"`` pays the emissions subsidy when the realized reduction reaches the
        threshold; ``"equation"`` pays it when the threshold is at least the realized reduction.
    """

    capex_unit: Mapping[str, float] = dataclasses.field(
        default_factory=lambda: dict.fromkeys(COMPONENTS, 0.0)
    )
    opex_unit: Mapping[str, float] = dataclasses.field(
        default_factory=lambda: dict.fromkeys(COMPONENTS, 0.0)
    )
    carbon_tax: float = 0.0
    fuel_price: float = 0.0
    voll: float = 0.0
    discount_rate: float = 0.08
    lifetime_years: int = 20
    h_max: float = 0.0
    penalty_r: float = 1e4
    lifetime_sum: bool = True
    er_gating: str = "prose"

    def __post_init__(self):
        for name in ("capex_unit", "opex_unit"):
            table = dict(getattr(self, name))
            unknown = set(table) - set(COMPONENTS)
            if unknown:
                raise InvalidParameterError(
                    name, "unknown components {0}".format(sorted(unknown))
                )
            for component in COMPONENTS:
                value = float(table.setdefault(component, 0.0))
                if not value >= 0:
                    raise InvalidParameterError(
                        "{0}.{1}".format(name, component), "must be >= 0, got {0}".format(value)
                    )
                table[component] = value
            object.__setattr__(self, name, table)
        for name in ("carbon_tax", "fuel_price", "voll", "h_max"):
            if not getattr(self, name) >= 0:
                raise InvalidParameterError(name, "must be >= 0, got {0}".format(getattr(self, name)))
        if not 0 < self.discount_rate < 1:
            raise InvalidParameterError(
                "discount_rate", "must be in (0, 1), got {0}".format(self.discount_rate)
            )
        if not self.lifetime_years >= 1:
            raise InvalidParameterError(
                "lifetime_years", "must be >= 1, got {0}".format(self.lifetime_years)
            )
        if not self.penalty_r > 0:
            raise InvalidParameterError("penalty_r", "must be > 0, got {0}".format(self.penalty_r))
        if self.er_gating not in ER_GATINGS:
            raise InvalidParameterError(
                "er_gating", "must be one of {0}, got {1!r}".format(ER_GATINGS, self.er_gating)
            )

    @property
    def lifetime_multiplier(self) -> float:
        return float(self.lifetime_years) if self.lifetime_sum else 1.0

    def capex_total(self, design: DesignVector) -> float:
        return sum(
            self.capex_unit[c] * getattr(design, f) for c, f in _CAPACITY_FIELDS.items()
        )

    def opex_total(self, design: DesignVector) -> float:
        return sum(
            self.opex_unit[c] * getattr(design, f) for c, f in _CAPACITY_FIELDS.items()
        )


@dataclasses.dataclass(frozen=True)
class CostBreakdown:
    """
    All cost terms of one evaluated design. Operational terms are annual averages over the scenarios;
    ``subsidy_er_value`` already carries the lifetime multiplier when that convention is on.
    """

    capex_total: float
    opex_total: float
    carbon_tax_cost: float
    fuel_cost: float
    voll_cost: float
    subsidy_rp: float
    subsidy_er_value: float
    crf: float
    npc: float
    hll: float
    penalty: float
    loss: float
    r_rp: float
    r_er: float
    baseline_tax: float = 0.0
    unserved_kwh: float = 0.0
    emissions_kg: float = 0.0
    n_scenarios: int = 1

    def to_dict(self) -> Dict[str, Union[float, int]]:
        return dataclasses.asdict(self)


def crf(discount_rate: float, lifetime_years: float) -> float:
    """
    Capital recovery factor :math:`i (1 + i)^n / ((1 + i)^n - 1)`, evaluated in a form that stays
    accurate as :math:`i \\to 0`, where it tends to :math:`1 / n`.
    """
    if not discount_rate >= 0:
        raise InvalidParameterError(
            "discount_rate", "must be >= 0, got {0}".format(discount_rate)
        )
    if not lifetime_years >= 1:
        raise InvalidParameterError(
            "lifetime_years", "must be >= 1, got {0}".format(lifetime_years)
        )
    if discount_rate == 0:
        return 1.0 / lifetime_years
    # (1 + i)^n / ((1 + i)^n - 1) == 1 / (1 - (1 + i)^-n)
    return discount_rate / -math.expm1(-lifetime_years * math.log1p(discount_rate))


def _check_threshold(name: str, value: float):
    if not 0 <= value <= 1:
        raise InvalidParameterError(name, "must be in [0, 1], got {0}".format(value))


def incentive_rp(design: DesignVector, capex_total: float, r_rp: float) -> float:
    """
    Renewable-penetration subsidy: ``capex_total * t_rp`` when the realized penetration reaches ``t_rp``.
    """
    _check_threshold("t_rp", design.t_rp)
    if r_rp >= design.t_rp:
        return capex_total * design.t_rp
    return 0.0


def incentive_er(
    baseline_tax: float, t_er: float, r_er: float, gating: str = "prose"
) -> float:
    """
    Emissions-reduction subsidy: the share *t_er* of the tax the all-microturbine baseline would pay.

    :param baseline_tax: Annual carbon tax of the baseline, USD.
    :param t_er: Threshold.
    :param r_er: Realized emissions-reduction rate.
    :param gating: ``"prose"`` (pay when ``r_er >= t_er``) or ``"equation"`` (pay when ``t_er >= r_er``).
    """
    _check_threshold("t_er", t_er)
    if gating == "prose":
        met = r_er >= t_er
    elif gating == "equation":
        met = t_er >= r_er
    else:
        raise InvalidParameterError("er_gating", "unknown gating {0!r}".format(gating))
    return baseline_tax * t_er if met else 0.0


def penalty(hll: float, h_max: float, r: float) -> float:
    """Quadratic penalty :math:`r \\max(0, HLL - h_{max})^2`."""
    return r * max(0.0, hll - h_max) ** 2


def evaluate_loss(
    design: DesignVector,
    traces: Union[DispatchTrace, Iterable[DispatchTrace]],
    params: CostParams,
) -> CostBreakdown:
    """
    Cost a design from one or more simulated years. Operational quantities and realized rates are
    averaged over the traces before costing.

    .. math::

        NPC = CRF \\cdot (CAPEX + m (OPEX + C_{tax} + C_{fuel} + C_{voll}) - I_{rp} - I_{er}),

    with :math:`m` the lifetime under the lifetime-sum convention and 1 otherwise, and the loss is
    :math:`NPC + r \\max(0, \\overline{HLL} - h_{max})^2`.

    :param design: The design; capacities are costed as given.
    :param traces: Dispatch traces of that design.
    :param params: Cost parameters.
    """
    if isinstance(traces, DispatchTrace):
        traces = [traces]
    traces = list(traces)
    if not traces:
        raise EmptyTraceError("evaluate_loss needs at least one dispatch trace!")

    hll = float(np.mean([t.hll for t in traces]))
    emissions = float(np.mean([t.emissions_kg for t in traces]))
    fuel = float(np.mean([t.fuel_units for t in traces]))
    unserved = float(np.mean([t.unserved_kwh for t in traces]))
    baseline_emissions = float(np.mean([t.baseline_emissions_kg for t in traces]))
    r_rp = float(np.mean([renewable_penetration(t) for t in traces]))
    r_er = float(np.mean([emissions_reduction(t) for t in traces]))

    capex_total = params.capex_total(design)
    opex_total = params.opex_total(design)
    carbon_tax_cost = params.carbon_tax * emissions
    fuel_cost = params.fuel_price * fuel
    voll_cost = params.voll * unserved
    baseline_tax = params.carbon_tax * baseline_emissions

    m = params.lifetime_multiplier
    subsidy_rp = incentive_rp(design, capex_total, r_rp)
    subsidy_er_value = m * incentive_er(baseline_tax, design.t_er, r_er, params.er_gating)

    factor = crf(params.discount_rate, params.lifetime_years)
    npc = factor * (
        capex_total
        + m * (opex_total + carbon_tax_cost + fuel_cost + voll_cost)
        - subsidy_rp
        - subsidy_er_value
    )
    pen = penalty(hll, params.h_max, params.penalty_r)
    return CostBreakdown(
        capex_total=capex_total,
        opex_total=opex_total,
        carbon_tax_cost=carbon_tax_cost,
        fuel_cost=fuel_cost,
        voll_cost=voll_cost,
        subsidy_rp=subsidy_rp,
        subsidy_er_value=subsidy_er_value,
        crf=factor,
        npc=npc,
        hll=hll,
        penalty=pen,
        loss=npc + pen,
        r_rp=r_rp,
        r_er=r_er,
        baseline_tax=baseline_tax,
        unserved_kwh=unserved,
        emissions_kg=emissions,
        n_scenarios=len(traces),
    )
