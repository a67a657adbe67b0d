#!/usr/bin/env python3
"""
.. module scenario
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Seeded stochastic years. A ``TypicalYear`` is the deterministic base; ``build_scenario``
    perturbs its irradiance with Gaussian noise, draws Weibull wind speeds and runs one two-state Markov
    availability chain per component, each from its own named sub-stream of the master seed.
"""

import dataclasses
from typing import Dict, Mapping, Optional

import numpy as np
from numba import boolean, float64, jit

from mgopt.exceptions import InvalidParameterError, ScenarioLengthError
from mgopt.tools import SeedLike, as_generator, named_generator
from mgopt.type_aliases import BoolVector, Vector

# ===================== What can be exported? =====================
__all__ = [
    "HOURS_PER_YEAR",
    "COMPONENTS",
    "TypicalYear",
    "StochasticParams",
    "ReliabilityParams",
    "ScenarioBundle",
    "perturb_solar",
    "sample_wind",
    "sample_availability",
    "build_scenario",
]

HOURS_PER_YEAR = 8760
COMPONENTS = ("pv", "wt", "bss", "mt")


def _as_series(name: str, values) -> Vector:
    array = np.ascontiguousarray(values, dtype=float)
    if array.ndim != 1:
        raise InvalidParameterError(name, "must be a one-dimensional series")
    return array


@dataclasses.dataclass(frozen=True, eq=False)
class TypicalYear:
    """
    Hourly base year.

    :param irradiance: Irradiance in kW/m^2.
    :param temperature: Ambient temperature in degrees Celsius.
    :param wind_speed: Wind speed in m/s.
    :param load: Demand in kW.
    """

    irradiance: Vector
    temperature: Vector
    wind_speed: Vector
    load: Vector

    def __post_init__(self):
        for field in dataclasses.fields(self):
            series = _as_series(field.name, getattr(self, field.name))
            if len(series) != HOURS_PER_YEAR:
                raise ScenarioLengthError(
                    "Typical-year series '{0}' has {1} entries, expected {2}!".format(
                        field.name, len(series), HOURS_PER_YEAR
                    )
                )
            object.__setattr__(self, field.name, series)
        for name in ("irradiance", "wind_speed", "load"):
            if np.any(getattr(self, name) < 0):
                raise InvalidParameterError(name, "must be >= 0 everywhere")


@dataclasses.dataclass(frozen=True)
class StochasticParams:
    """
    :param sigma_pv: Standard deviation of the hourly irradiance noise, kW/m^2.
    :param weibull_shape: Weibull shape :math:`k`. ``None`` (together with *weibull_scale*) keeps the
        typical-year wind series instead of sampling it.
    :param weibull_scale: Weibull scale :math:`\\lambda` in m/s.
    """

    sigma_pv: float = 0.0
    weibull_shape: Optional[float] = None
    weibull_scale: Optional[float] = None

    def __post_init__(self):
        if not self.sigma_pv >= 0:
            raise InvalidParameterError(
                "sigma_pv", "must be >= 0, got {0}".format(self.sigma_pv)
            )
        if (self.weibull_shape is None) != (self.weibull_scale is None):
            raise InvalidParameterError(
                "weibull_shape/weibull_scale", "give both or neither"
            )
        if self.samples_wind:
            _check_weibull(self.weibull_shape, self.weibull_scale)

    @property
    def samples_wind(self) -> bool:
        return self.weibull_shape is not None


def _check_weibull(shape, scale):
    if shape is None or not shape > 0:
        raise InvalidParameterError("weibull_shape", "must be > 0, got {0}".format(shape))
    if scale is None or not scale > 0:
        raise InvalidParameterError("weibull_scale", "must be > 0, got {0}".format(scale))


@dataclasses.dataclass(frozen=True)
class ReliabilityParams:
    """
    Hourly transition probabilities of a component's two-state availability chain.

    :param failure_rate: Probability of failing in one hour while available, :math:`\\lambda`.
    :param repair_rate: Probability of being repaired in one hour while failed, :math:`\\mu`.
    """

    failure_rate: float = 0.0
    repair_rate: float = 1.0

    def __post_init__(self):
        for name in ("failure_rate", "repair_rate"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise InvalidParameterError(name, "must be in [0, 1], got {0}".format(value))
        if not self.failure_rate + self.repair_rate > 0:
            raise InvalidParameterError(
                "failure_rate/repair_rate", "their sum must be > 0"
            )

    @property
    def availability(self) -> float:
        """Stationary probability of being available, :math:`\\mu / (\\lambda + \\mu)`."""
        return self.repair_rate / (self.failure_rate + self.repair_rate)

    @property
    def unavailability(self) -> float:
        return self.failure_rate / (self.failure_rate + self.repair_rate)


@dataclasses.dataclass(frozen=True, eq=False)
class ScenarioBundle:
    """
    One realized stochastic year. Series share one length (8760 for a full year, shorter in tests).
    Components without an availability series are always available.
    """

    irradiance: Vector
    temperature: Vector
    wind_speed: Vector
    load: Vector
    availability: Mapping[str, BoolVector] = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        n = None
        for name in ("irradiance", "temperature", "wind_speed", "load"):
            series = _as_series(name, getattr(self, name))
            object.__setattr__(self, name, series)
            if n is None:
                n = len(series)
            elif len(series) != n:
                raise ScenarioLengthError(
                    "Series '{0}' has {1} hours, expected {2}!".format(name, len(series), n)
                )
        masks = {}
        for name, mask in self.availability.items():
            mask = np.ascontiguousarray(mask, dtype=bool)
            if mask.shape != (n,):
                raise ScenarioLengthError(
                    "Availability of '{0}' has {1} hours, expected {2}!".format(
                        name, mask.size, n
                    )
                )
            masks[name] = mask
        object.__setattr__(self, "availability", masks)

    @property
    def n_hours(self) -> int:
        return len(self.load)

    def available(self, component: str) -> BoolVector:
        try:
            return self.availability[component]
        except KeyError:
            return np.ones(self.n_hours, dtype=bool)

    @classmethod
    def from_typical_year(cls, tmy: TypicalYear) -> "ScenarioBundle":
        return cls(tmy.irradiance.copy(), tmy.temperature.copy(), tmy.wind_speed.copy(), tmy.load.copy())


def perturb_solar(tmy: TypicalYear, params: StochasticParams, seed: SeedLike) -> Vector:
    """
    Add independent Gaussian noise to every daylight hour of the base irradiance and clamp at zero.
    Hours with zero base irradiance stay zero.

    :param tmy: The base year.
    :param params: Noise level.
    :param seed: An integer seed or a ``numpy.random.Generator``.
    :return: Perturbed irradiance in kW/m^2.
    """
    base = tmy.irradiance
    if params.sigma_pv == 0:
        return base.copy()
    noise = as_generator(seed).normal(0.0, params.sigma_pv, size=base.size)
    return np.where(base > 0, np.maximum(base + noise, 0.0), 0.0)


def sample_wind(params: StochasticParams, n_hours: int, seed: SeedLike) -> Vector:
    """
    Independent hourly Weibull wind speeds by inverse-CDF transform,
    :math:`\\lambda (-\\ln(1 - u))^{1/k}` with :math:`u \\sim U[0, 1)`.
    """
    _check_weibull(params.weibull_shape, params.weibull_scale)
    if n_hours < 0:
        raise InvalidParameterError("n_hours", "must be >= 0, got {0}".format(n_hours))
    u = as_generator(seed).random(int(n_hours))
    return params.weibull_scale * (-np.log1p(-u)) ** (1.0 / params.weibull_shape)


@jit(boolean[:](float64[:], float64, float64), nopython=True, cache=True)
def _markov_chain(u, failure_rate, repair_rate):
    n = u.shape[0]
    state = np.empty(n, dtype=np.bool_)
    if n == 0:
        return state
    state[0] = True
    for h in range(1, n):
        if state[h - 1]:
            state[h] = u[h] >= failure_rate
        else:
            state[h] = u[h] < repair_rate
    return state


def sample_availability(
    params: ReliabilityParams, n_hours: int, seed: SeedLike
) -> BoolVector:
    """
    Sequential hourly availability starting in the available state. An available component fails with
    probability :math:`\\lambda` per hour, a failed one is repaired with probability :math:`\\mu` per hour.

    :return: Boolean series, ``True`` meaning available.
    """
    if not isinstance(params, ReliabilityParams):
        raise InvalidParameterError("params", "expected ReliabilityParams")
    if n_hours < 0:
        raise InvalidParameterError("n_hours", "must be >= 0, got {0}".format(n_hours))
    u = as_generator(seed).random(int(n_hours))
    return _markov_chain(u, float(params.failure_rate), float(params.repair_rate))


def build_scenario(
    tmy: TypicalYear,
    sparams: StochasticParams,
    rparams: Mapping[str, ReliabilityParams],
    seed: int,
) -> ScenarioBundle:
    """
    Compose the three samplers into one stochastic year. Each sampler draws from a sub-stream named after
    it (``"solar"``, ``"wind"``, ``"availability:<component>"``), so adding a component never shifts the
    other streams.

    :param tmy: The base year.
    :param sparams: Weather noise parameters.
    :param rparams: Reliability parameters keyed by component name (``pv``, ``wt``, ``bss``, ``mt``).
    :param seed: Master seed.
    """
    n = len(tmy.load)
    irradiance = perturb_solar(tmy, sparams, named_generator(seed, "solar"))
    if sparams.samples_wind:
        wind_speed = sample_wind(sparams, n, named_generator(seed, "wind"))
    else:
        wind_speed = tmy.wind_speed.copy()
    availability: Dict[str, BoolVector] = {
        name: sample_availability(params, n, named_generator(seed, "availability:" + name))
        for name, params in rparams.items()
    }
    return ScenarioBundle(
        irradiance=irradiance,
        temperature=tmy.temperature.copy(),
        wind_speed=wind_speed,
        load=tmy.load.copy(),
        availability=availability,
    )
