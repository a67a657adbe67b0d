#!/usr/bin/env python3
"""
.. module settings
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Run configuration. ``DEFAULT_SETTINGS`` reproduces the bundled synthetic case; a YAML file
    overrides any subset of it, down to single nested fields. ``build_run_config`` validates the merged
    settings in one pass and reports every problem with its dotted field path and source line.
"""

import collections
import copy
import dataclasses
import pathlib
from importlib import resources
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
import yaml

try:
    from yaml import CSafeLoader as Loader
except ImportError:
    from yaml import SafeLoader as Loader

from mgopt.components import BatterySpec, PvSpec, TurbineSpec, WindSpec
from mgopt.dispatch import ComponentSpecs, DesignVector
from mgopt.economics import CostParams
from mgopt.exceptions import ConfigurationError, MicrogridError
from mgopt.optimize.mspsa import GainSchedule, MspsaConfig
from mgopt.optimize.pso import PsoConfig
from mgopt.scenario import COMPONENTS, ReliabilityParams, StochasticParams

# ===================== What can be exported? =====================
__all__ = [
    "DEFAULT_SETTINGS",
    "Settings",
    "from_yaml",
    "bundled_case",
    "RunConfig",
    "build_run_config",
]

OPTIMIZERS = ("mspsa", "pso")

DEFAULT_SETTINGS: Dict[str, Any] = {
    "seed": 42,
    "output_directory": "./results/",
    "typical_year": None,  # ``None`` uses the bundled synthetic year
    "stochastic": {"sigma_pv": 0.0724, "weibull_shape": 2.0, "weibull_scale": 6.8},
    "reliability": {
        "pv": {"failure_rate": 0.0002, "repair_rate": 0.02},
        "wt": {"failure_rate": 0.0005, "repair_rate": 0.0125},
        "bss": {"failure_rate": 0.0002, "repair_rate": 0.02},
        "mt": {"failure_rate": 0.001, "repair_rate": 0.05},
    },
    "components": {
        "turbine_charging": False,
        "pv": {"g_stc": 1.0, "temp_coeff": -0.004, "t_stc": 25.0},
        "wt": {"v_cut_in": 3.0, "v_rated": 12.0, "v_cut_out": 25.0},
        "bss": {
            "eta_carryover": 1.0,
            "eta_charge": 0.95,
            "eta_discharge": 0.95,
            "soc_min": 0.1,
            "soc_max": 1.0,
            "soc_init": 0.5,
            "p_charge_max_per_kwh": 0.5,
            "p_discharge_max_per_kwh": 0.5,
        },
        "mt": {"emissions_factor": 0.8, "fuel_rate": 0.3},
    },
    "costs": {
        "capex_unit": {"pv": 3000.0, "wt": 4500.0, "bss": 900.0, "mt": 1500.0},
        "opex_unit": {"pv": 60.0, "wt": 150.0, "bss": 25.0, "mt": 60.0},
        "carbon_tax": 0.05,
        "fuel_price": 1.1,
        "voll": 5.0,
        "discount_rate": 0.08,
        "lifetime_years": 20,
        "h_max": 50.0,
        "penalty_r": 1.0e4,
        "lifetime_sum": True,
        "er_gating": "prose",
    },
    "design": {
        "bounds": {
            "pv_kw": [0, 10000],
            "wt_kw": [0, 10000],
            "bss_kwh": [0, 10000],
            "mt_kw": [0, 10000],
            "t_rp": [0.0, 1.0],
            "t_er": [0.0, 1.0],
        },
        "initial": {
            "pv_kw": 5000,
            "wt_kw": 5000,
            "bss_kwh": 5000,
            "mt_kw": 5000,
            "t_rp": 0.0,
            "t_er": 0.0,
        },
        # optimizer coordinate * threshold_scale = threshold fraction
        "threshold_scale": 1.0e-3,
    },
    "optimizer": "mspsa",
    "mspsa": {
        "a": 0.25,
        "c": 0.7,
        "A": 500.0,
        "alpha": 0.602,
        "gamma": 0.101,
        "max_iterations": 500,
        "replicates_per_eval": 1,
        "common_random_numbers": True,
        "stall_tolerance": 1.0e-6,
        "stall_window": 50,
        "max_difference": 1.0e5,
        "track_loss": True,
    },
    "pso": {
        "c1": 2.3,
        "c2": 2.3,
        "w": 1.0,
        "population": 20,
        "v0_range": [-1.0, 1.0],
        "max_evaluations": 1000,
        "initial_spread": "point",
    },
    "compare": {"replicates": 10, "budget": 1000, "stride": 20, "incentive_table": True},
    "evaluation": {"scenarios": 100},
}


class Settings(collections.ChainMap):
    """
    User settings over ``DEFAULT_SETTINGS``. Lookups of a section (``settings["costs"]``) merge the user's
    keys into the default section recursively, so a file may override one nested field.

    :param user_settings: One or more dictionaries, earlier ones taking precedence.
    :param source: The YAML file the first dictionary came from, if any.
    :param lines: Source line of every dotted key path in *source*.
    """

    def __init__(
        self,
        *user_settings: Mapping[str, Any],
        source: Optional[pathlib.Path] = None,
        lines: Optional[Dict[str, int]] = None,
    ):
        super().__init__(*[dict(s) for s in user_settings if s], DEFAULT_SETTINGS)
        self.source = source
        self.lines = lines or {}

    def __getitem__(self, key):
        layers = [m[key] for m in reversed(self.maps) if key in m]
        if not layers:
            raise KeyError(key)
        merged = copy.deepcopy(layers[0])
        for layer in layers[1:]:
            merged = _deep_merge(merged, layer)
        return merged

    @property
    def user(self) -> Dict[str, Any]:
        """Everything not coming from the defaults."""
        out: Dict[str, Any] = {}
        for layer in reversed(self.maps[:-1]):
            out = _deep_merge(out, layer)
        return out

    def line_of(self, path: str) -> Optional[int]:
        while path:
            if path in self.lines:
                return self.lines[path]
            path = path.rpartition(".")[0]
        return None

    def to_yaml_file(self, filename: Union[str, pathlib.Path]):
        filename = pathlib.Path(filename)
        if filename.suffix != ".yaml":
            filename = filename.with_suffix(".yaml")
        with open(filename, "w") as f:
            yaml.safe_dump({key: self[key] for key in self}, f, sort_keys=False)


def _deep_merge(base: Any, override: Any) -> Any:
    if isinstance(base, Mapping) and isinstance(override, Mapping):
        merged = dict(base)
        for key, value in override.items():
            merged[key] = _deep_merge(base.get(key), value) if key in base else copy.deepcopy(value)
        return merged
    return copy.deepcopy(override)


def _key_lines(node, prefix: str = "") -> Dict[str, int]:
    lines: Dict[str, int] = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = prefix + str(key_node.value)
            lines[path] = key_node.start_mark.line + 1
            lines.update(_key_lines(value_node, path + "."))
    return lines


def from_yaml(filename: Union[str, pathlib.Path]) -> Settings:
    """
    Read user settings from a YAML file, remembering the line of every key for error reports.

    :param filename: The name of the YAML file.
    :return: A ``Settings`` object.
    """
    filename = pathlib.Path(filename)
    try:
        text = filename.read_text()
    except OSError as error:
        raise ConfigurationError(["cannot read file: {0}".format(error)], str(filename))
    try:
        data = yaml.load(text, Loader=Loader)
        lines = _key_lines(yaml.compose(text, Loader=Loader))
    except yaml.YAMLError as error:
        raise ConfigurationError(["not valid YAML: {0}".format(error)], str(filename))
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError(["top level must be a mapping of sections"], str(filename))
    return Settings(data, source=filename, lines=lines)


def bundled_case() -> Settings:
    """Settings of the bundled synthetic case shipped in ``mgopt.data``."""
    with resources.as_file(resources.files("mgopt.data") / "synthetic_case.yaml") as path:
        return from_yaml(path)


@dataclasses.dataclass(eq=False)
class RunConfig:
    """
    A validated run. Optimizer templates work in optimizer coordinates: capacities as they are, thresholds
    divided by ``threshold_scale``.
    """

    seed: int
    output_directory: pathlib.Path
    typical_year: Optional[pathlib.Path]
    stochastic: StochasticParams
    reliability: Dict[str, ReliabilityParams]
    specs: ComponentSpecs
    costs: CostParams
    bounds: np.ndarray  # (6, 2), design units
    initial: DesignVector
    threshold_scale: float
    optimizer: str
    mspsa: MspsaConfig
    pso: PsoConfig
    compare_replicates: int
    compare_budget: int
    compare_stride: int
    incentive_table: bool
    evaluation_scenarios: int

    @property
    def scale(self) -> np.ndarray:
        """Per-coordinate factor from optimizer coordinates to design units."""
        return np.array([1.0, 1.0, 1.0, 1.0, self.threshold_scale, self.threshold_scale])

    def with_seed(self, seed: int) -> "RunConfig":
        seed = int(seed)
        return dataclasses.replace(
            self,
            seed=seed,
            mspsa=dataclasses.replace(self.mspsa, seed=seed),
            pso=dataclasses.replace(self.pso, seed=seed),
        )

    def without_incentives(self) -> "RunConfig":
        """Thresholds pinned to zero, for the reference run without policy incentives."""
        bounds = self.bounds.copy()
        bounds[4:] = 0.0
        initial = self.initial.without_incentives()
        x0 = initial.to_array() / self.scale
        opt_bounds = bounds / self.scale[:, None]
        return dataclasses.replace(
            self,
            bounds=bounds,
            initial=initial,
            mspsa=dataclasses.replace(self.mspsa, x0=x0, bounds=opt_bounds),
            pso=dataclasses.replace(self.pso, x0=x0, bounds=opt_bounds),
        )


class _Validator:
    """Collects problems while reading sections; every accessor returns a placeholder on failure."""

    def __init__(self, settings: Settings):
        self.settings = settings
        self.problems: List[str] = []

    def report(self, path: str, message: str):
        line = self.settings.line_of(path)
        where = "{0} (line {1})".format(path, line) if line else path
        self.problems.append("{0}: {1}".format(where, message))

    def check_keys(self, path: str, value: Any, default: Any):
        if isinstance(default, Mapping):
            if not isinstance(value, Mapping):
                self.report(path, "must be a mapping")
                return
            for key in value:
                sub = "{0}.{1}".format(path, key) if path else str(key)
                if key not in default:
                    self.report(sub, "unknown key")
                else:
                    self.check_keys(sub, value[key], default[key])

    def number(self, path: str, value: Any, integer: bool = False) -> Optional[float]:
        if isinstance(value, bool):
            self.report(path, "must be a number, got {0!r}".format(value))
            return None
        try:
            number = float(value)
        except (TypeError, ValueError):
            self.report(path, "must be a number, got {0!r}".format(value))
            return None
        if not np.isfinite(number):
            self.report(path, "must be finite, got {0!r}".format(value))
            return None
        if integer:
            if not number.is_integer():
                self.report(path, "must be an integer, got {0!r}".format(value))
                return None
            return int(number)
        return number

    def flag(self, path: str, value: Any) -> bool:
        if not isinstance(value, bool):
            self.report(path, "must be true or false, got {0!r}".format(value))
            return False
        return value

    def numbers(
        self, path: str, section: Mapping[str, Any], integers=(), skip=()
    ) -> Dict[str, Any]:
        """
        Numeric fields of *section*; nested mappings, the keys in *skip* and keys unknown to the defaults
        (already reported by ``check_keys``) are left out.
        """
        known = _default_at(path)
        out = {}
        for key, value in section.items():
            if isinstance(value, Mapping) or key in skip or key not in known:
                continue
            if value is None and key in _OPTIONAL:
                out[key] = None
            else:
                out[key] = self.number("{0}.{1}".format(path, key), value, key in integers)
        return out

    def build(self, path: str, factory, **kwargs):
        if any(value is None for key, value in kwargs.items() if key not in _OPTIONAL):
            return None
        try:
            return factory(**kwargs)
        except MicrogridError as error:
            field = getattr(error, "field", None)
            self.report(
                "{0}.{1}".format(path, field.split(".")[-1]) if field else path,
                str(error).split(": ", 1)[-1],
            )
        except (TypeError, ValueError) as error:
            self.report(path, str(error))
        return None


_OPTIONAL = ("weibull_shape", "weibull_scale", "max_difference", "stall_window")


def _default_at(path: str) -> Mapping[str, Any]:
    section: Any = DEFAULT_SETTINGS
    for key in path.split("."):
        section = section.get(key, {}) if isinstance(section, Mapping) else {}
    return section if isinstance(section, Mapping) else {}


def _resolve(settings: Settings, value: Any) -> pathlib.Path:
    path = pathlib.Path(value).expanduser()
    if not path.is_absolute() and settings.source is not None:
        path = settings.source.parent / path
    return path


def build_run_config(settings: Settings) -> RunConfig:
    """
    Validate *settings* and turn them into a ``RunConfig``.

    :raises ConfigurationError: listing every problem found, each with its field path and line.
    """
    v = _Validator(settings)
    v.check_keys("", settings.user, DEFAULT_SETTINGS)

    seed = v.number("seed", settings["seed"], integer=True)
    if seed is not None and seed < 0:
        v.report("seed", "must be >= 0")
        seed = None

    typical_year = settings["typical_year"]
    if typical_year is not None:
        if not isinstance(typical_year, str):
            v.report("typical_year", "must be a file path or null")
            typical_year = None
        else:
            typical_year = _resolve(settings, typical_year)
            if not typical_year.is_file():
                v.report("typical_year", "file '{0}' does not exist".format(typical_year))
    output_directory = settings["output_directory"]
    if not isinstance(output_directory, str):
        v.report("output_directory", "must be a directory path")
        output_directory = "./results/"
    output_directory = _resolve(settings, output_directory)

    stochastic = v.build(
        "stochastic", StochasticParams, **v.numbers("stochastic", settings["stochastic"])
    )

    reliability = {}
    for name in COMPONENTS:
        params = settings["reliability"].get(name)
        if params is None:
            continue
        path = "reliability." + name
        reliability[name] = v.build(path, ReliabilityParams, **v.numbers(path, params))

    components = settings["components"]
    pv = v.build("components.pv", PvSpec, **v.numbers("components.pv", components["pv"]))
    wind = v.build("components.wt", WindSpec, **v.numbers("components.wt", components["wt"]))
    # The reference bank is 1 kWh, so its power limits are the per-kWh ratings.
    bss = v.numbers("components.bss", components["bss"])
    p_ch, p_dch = bss.pop("p_charge_max_per_kwh"), bss.pop("p_discharge_max_per_kwh")
    battery = v.build(
        "components.bss",
        BatterySpec,
        capacity_kwh=1.0,
        p_charge_max=p_ch,
        p_discharge_max=p_dch,
        **bss,
    )
    turbine = v.build("components.mt", TurbineSpec, **v.numbers("components.mt", components["mt"]))
    turbine_charging = v.flag("components.turbine_charging", components["turbine_charging"])

    costs = dict(settings["costs"])
    cost_kwargs = v.numbers(
        "costs", costs, integers=("lifetime_years",), skip=("lifetime_sum", "er_gating")
    )
    for table in ("capex_unit", "opex_unit"):
        cost_kwargs[table] = v.numbers("costs." + table, costs[table])
    cost_kwargs["lifetime_sum"] = v.flag("costs.lifetime_sum", costs["lifetime_sum"])
    cost_kwargs["er_gating"] = costs["er_gating"]
    for table in ("capex_unit", "opex_unit"):
        if any(value is None for value in cost_kwargs[table].values()):
            cost_kwargs[table] = None
    cost_params = v.build("costs", CostParams, **cost_kwargs)

    design = settings["design"]
    bounds = np.zeros((len(DesignVector.FIELDS), 2))
    initial = np.zeros(len(DesignVector.FIELDS))
    for i, name in enumerate(DesignVector.FIELDS):
        pair = design["bounds"].get(name)
        path = "design.bounds." + name
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            v.report(path, "must be a [min, max] pair")
            continue
        lo, hi = v.number(path, pair[0]), v.number(path, pair[1])
        if lo is None or hi is None:
            continue
        if lo > hi:
            v.report(path, "min {0} exceeds max {1}".format(lo, hi))
        if i < 4 and lo < 0:
            v.report(path, "capacities must be >= 0")
        if i < 4 and not (lo.is_integer() and hi.is_integer()):
            v.report(path, "capacity bounds must be whole numbers, got [{0}, {1}]".format(lo, hi))
        if i >= 4 and not 0 <= lo <= hi <= 1:
            v.report(path, "thresholds must lie within [0, 1]")
        bounds[i] = lo, hi
        x = v.number("design.initial." + name, design["initial"].get(name))
        if x is not None:
            if not lo <= x <= hi:
                v.report("design.initial." + name, "{0} is outside [{1}, {2}]".format(x, lo, hi))
            initial[i] = x
    threshold_scale = v.number("design.threshold_scale", design["threshold_scale"])
    if threshold_scale is not None and not threshold_scale > 0:
        v.report("design.threshold_scale", "must be > 0")
        threshold_scale = None

    optimizer = settings["optimizer"]
    if optimizer not in OPTIMIZERS:
        v.report("optimizer", "must be one of {0}, got {1!r}".format(OPTIMIZERS, optimizer))

    mspsa = v.numbers(
        "mspsa",
        settings["mspsa"],
        integers=("max_iterations", "replicates_per_eval", "stall_window"),
        skip=("common_random_numbers", "track_loss"),
    )
    for key in ("common_random_numbers", "track_loss"):
        mspsa[key] = v.flag("mspsa." + key, settings["mspsa"][key])
    gains = v.build(
        "mspsa",
        GainSchedule,
        **{key: mspsa.pop(key) for key in ("a", "c", "A", "alpha", "gamma")},
    )

    pso_section = settings["pso"]
    pso = v.numbers(
        "pso",
        pso_section,
        integers=("population", "max_evaluations"),
        skip=("v0_range", "initial_spread"),
    )
    v0 = pso_section["v0_range"]
    if not isinstance(v0, (list, tuple)) or len(v0) != 2:
        v.report("pso.v0_range", "must be a [low, high] pair")
        pso["v0_range"] = None
    else:
        pso["v0_range"] = (v.number("pso.v0_range", v0[0]), v.number("pso.v0_range", v0[1]))
        if None in pso["v0_range"]:
            pso["v0_range"] = None
    pso["initial_spread"] = pso_section["initial_spread"]

    compare = settings["compare"]
    replicates = v.number("compare.replicates", compare["replicates"], integer=True)
    budget = v.number("compare.budget", compare["budget"], integer=True)
    stride = v.number("compare.stride", compare["stride"], integer=True)
    if replicates is not None and replicates < 1:
        v.report("compare.replicates", "must be >= 1")
    if budget is not None and budget < 0:
        v.report("compare.budget", "must be >= 0")
    if stride is not None and stride < 1:
        v.report("compare.stride", "must be >= 1")
    incentive_table = v.flag("compare.incentive_table", compare["incentive_table"])
    scenarios = v.number("evaluation.scenarios", settings["evaluation"]["scenarios"], integer=True)
    if scenarios is not None and scenarios < 1:
        v.report("evaluation.scenarios", "must be >= 1")

    mspsa_config = pso_config = None
    if threshold_scale is not None and seed is not None:
        scale = np.array([1.0, 1.0, 1.0, 1.0, threshold_scale, threshold_scale])
        x0, opt_bounds = initial / scale, bounds / scale[:, None]
        if gains is not None:
            mspsa_config = v.build(
                "mspsa",
                MspsaConfig,
                gains=gains,
                x0=x0,
                bounds=opt_bounds,
                discrete_mask=DesignVector.DISCRETE_MASK,
                seed=seed,
                **mspsa,
            )
        pso_config = v.build(
            "pso",
            PsoConfig,
            x0=x0,
            bounds=opt_bounds,
            discrete_mask=DesignVector.DISCRETE_MASK,
            replicates_per_eval=mspsa.get("replicates_per_eval") or 1,
            seed=seed,
            **pso,
        )

    if v.problems:
        raise ConfigurationError(
            v.problems, str(settings.source) if settings.source else None
        )

    return RunConfig(
        seed=seed,
        output_directory=output_directory,
        typical_year=typical_year,
        stochastic=stochastic,
        reliability=reliability,
        specs=ComponentSpecs(pv, wind, battery, turbine, turbine_charging),
        costs=cost_params,
        bounds=bounds,
        initial=DesignVector.from_array(initial),
        threshold_scale=threshold_scale,
        optimizer=optimizer,
        mspsa=mspsa_config,
        pso=pso_config,
        compare_replicates=replicates,
        compare_budget=budget,
        compare_stride=stride,
        incentive_table=incentive_table,
        evaluation_scenarios=scenarios,
    )
