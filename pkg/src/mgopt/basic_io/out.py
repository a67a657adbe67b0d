#!/usr/bin/env python3
"""
.. module output
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Writers for every result file (hourly traces, convergence curves, iterate records, designs and
    cost records) and the banners appended to a run's ``output.txt``.
"""

import json
import pathlib
import textwrap
from datetime import datetime, timezone
from typing import Any, Mapping, Sequence

import numpy as np
import pandas as pd

from mgopt.dispatch import DesignVector, DispatchTrace

# ===================== What can be exported? =====================
__all__ = [
    "save_to_output",
    "make_starting_string",
    "make_design_info",
    "make_ending_string",
    "save_trace",
    "save_record",
    "save_design",
    "save_curve",
    "save_iterates",
    "save_generations",
    "save_table",
]

# Column suffixes naming the unit of each hourly series.
_TRACE_UNITS = {name: name + "_kwh" for name in DispatchTrace.HOURLY}
_TRACE_UNITS["soc"] = "soc_fraction"


def save_to_output(fn_output, text):
    with open(fn_output, "a") as f:
        f.write(text + "\n")


def make_starting_string(command: str) -> str:
    return textwrap.dedent(
        """\
        ============================================================
        Command: {0}
        Current time: {1:%Y-%m-%d %H:%M:%S} UTC
        """.format(
            command, datetime.now(timezone.utc)
        )
    )


def make_design_info(design: DesignVector, label: str = "Design") -> str:
    return textwrap.dedent(
        """\
        ------------------------------------------------------------
         {0}:
           PV      {1:12.2f}  kW
           Wind    {2:12.2f}  kW
           Battery {3:12.2f}  kWh
           MT      {4:12.2f}  kW
           T_rp    {5:12.4f}
           T_er    {6:12.4f}
        ------------------------------------------------------------
        """.format(
            label, *design.to_array()
        )
    )


def make_ending_string(time_elapsed) -> str:
    return textwrap.dedent(
        """\
        ------------------------------------------------------------
        Total elapsed time is: {0:8.2f} seconds
        ============================================================
        """.format(
            time_elapsed
        )
    )


def save_trace(trace: DispatchTrace, outfile_name):
    df = pd.DataFrame({_TRACE_UNITS[name]: values for name, values in trace.hourly().items()})
    df.index.name = "hour"
    df.to_csv(outfile_name)


def _plain(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, pathlib.PurePath):
        return str(value)
    return value


def save_record(record: Mapping[str, Any], outfile_name):
    """One JSON object per file, keys in insertion order."""
    with open(outfile_name, "w") as f:
        json.dump(_plain(record), f, indent=2)
        f.write("\n")


def save_design(design: DesignVector, outfile_name, **extra):
    save_record({**design.to_dict(), **extra}, outfile_name)


def save_curve(curve, outfile_name, label: str = "best_loss_so_far"):
    """A single run's ``(evaluations, loss)`` curve."""
    curve = np.asarray(curve, dtype=float)
    pd.DataFrame({"evals": curve[:, 0].astype(int), label: curve[:, 1]}).to_csv(
        outfile_name, index=False
    )


def save_iterates(history: Sequence, fields: Sequence[str], outfile_name):
    """
    One row per optimizer iteration with its working iterate, measurements and gradient estimate.

    :param history: ``IterateRecord`` objects.
    :param fields: Names of the coordinates, used as column prefixes.
    """
    rows = []
    for record in history:
        row = {"k": record.k}
        row.update({"theta_" + f: x for f, x in zip(fields, record.theta)})
        row.update({"delta_" + f: d for f, d in zip(fields, record.delta)})
        row["loss_plus"] = record.loss_plus
        row["loss_minus"] = record.loss_minus
        row.update({"gradient_" + f: g for f, g in zip(fields, record.gradient_estimate)})
        row["loss_tracked"] = record.loss_current
        rows.append(row)
    pd.DataFrame(rows).to_csv(outfile_name, index=False)


def save_table(df: pd.DataFrame, outfile_name, index: bool = False):
    df.to_csv(outfile_name, index=index)


def save_generations(history: Sequence, fields: Sequence[str], outfile_name):
    """One row per swarm generation with its global best, as measured and as tracked."""
    rows = []
    for record in history:
        row = {"generation": record.generation, "evals": record.evaluations}
        row.update({"best_" + f: x for f, x in zip(fields, record.best_position)})
        row["loss_measured"] = record.best_measured
        row["loss_tracked"] = record.best_tracked
        rows.append(row)
    pd.DataFrame(rows).to_csv(outfile_name, index=False)
