#!/usr/bin/env python3
"""
.. module read_input
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Read the typical-meteorological-year file, a comma-separated table with the header
    ``hour,irradiance_kw_m2,temperature_c,wind_speed_m_s,load_kw`` and one row per hour of the year.
"""

import pathlib
from importlib import resources
from typing import List, Union

import numpy as np
import pandas as pd

from mgopt.exceptions import ConfigurationError, MicrogridError
from mgopt.scenario import HOURS_PER_YEAR, TypicalYear

# ===================== What can be exported? =====================
__all__ = ["TMY_COLUMNS", "read_typical_year", "read_bundled_typical_year"]

TMY_COLUMNS = ("hour", "irradiance_kw_m2", "temperature_c", "wind_speed_m_s", "load_kw")


def read_typical_year(inp: Union[str, pathlib.PurePath]) -> TypicalYear:
    """
    Read a typical year. Every problem found is reported at once.

    :param inp: The filename or its path.
    :return: The hourly base year.
    :raises ConfigurationError: if the file is missing, has the wrong header or row count, or holds
        non-numeric, negative or missing values.
    """
    path = pathlib.Path(inp)
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as error:
        raise ConfigurationError(["cannot read typical year: {0}".format(error)], str(path))

    problems: List[str] = []
    if tuple(df.columns) != TMY_COLUMNS:
        raise ConfigurationError(
            ["header must be '{0}', got '{1}'".format(",".join(TMY_COLUMNS), ",".join(df.columns))],
            str(path),
        )
    if len(df) != HOURS_PER_YEAR:
        problems.append("expected {0} data rows, got {1}".format(HOURS_PER_YEAR, len(df)))

    values = df.apply(pd.to_numeric, errors="coerce")
    for column in TMY_COLUMNS:
        bad = values[column].isna() | ~np.isfinite(values[column].fillna(0.0))
        if bad.any():
            row = int(bad.idxmax()) + 2  # header is line 1
            problems.append("column '{0}' has a non-numeric value at line {1}".format(column, row))
    hours = values["hour"].to_numpy()
    if not problems and not (
        np.array_equal(hours, np.arange(len(hours)))
        or np.array_equal(hours, np.arange(1, len(hours) + 1))
    ):
        problems.append("column 'hour' must count up by one from 0 or 1")
    if problems:
        raise ConfigurationError(problems, str(path))

    try:
        return TypicalYear(
            irradiance=values["irradiance_kw_m2"].to_numpy(dtype=float),
            temperature=values["temperature_c"].to_numpy(dtype=float),
            wind_speed=values["wind_speed_m_s"].to_numpy(dtype=float),
            load=values["load_kw"].to_numpy(dtype=float),
        )
    except MicrogridError as error:
        raise ConfigurationError([str(error)], str(path))


def read_bundled_typical_year() -> TypicalYear:
    """The synthetic year shipped in ``mgopt.data``."""
    with resources.as_file(resources.files("mgopt.data") / "synthetic_tmy.csv") as path:
        return read_typical_year(path)
