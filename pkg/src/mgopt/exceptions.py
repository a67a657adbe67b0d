#!/usr/bin/env python3
"""
.. module exceptions
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Errors raised by the simulation, costing and optimization layers. Every class derives from
    ``MicrogridError`` and from the builtin it specializes, so callers may catch either.
"""

from typing import Iterable, Optional

import numpy as np

# ===================== What can be exported? =====================
__all__ = [
    "MicrogridError",
    "InvalidParameterError",
    "SimultaneousChargeDischargeError",
    "StateOfChargeBoundError",
    "ScenarioLengthError",
    "EmptyTraceError",
    "ConfigurationError",
    "OptimizerAbort",
]


class MicrogridError(Exception):
    pass


class InvalidParameterError(MicrogridError, ValueError):
    """
    A parameter violates its invariant.

    :param field: Name of the offending parameter, e.g. ``"weibull_shape"``.
    :param message: What is wrong with it.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__("{0}: {1}".format(field, message))


class SimultaneousChargeDischargeError(MicrogridError, ValueError):
    pass


class StateOfChargeBoundError(MicrogridError, ValueError):
    pass


class ScenarioLengthError(MicrogridError, ValueError):
    pass


class EmptyTraceError(MicrogridError, ValueError):
    pass


class ConfigurationError(MicrogridError, ValueError):
    """
    One or more problems in a run configuration or an input data file.
    All problems are reported together, one per line.

    :param problems: Human-readable messages, each naming a field (and a line when known).
    :param path: The file the problems were found in, if any.
    """

    def __init__(self, problems: Iterable[str], path: Optional[str] = None):
        self.problems = list(problems)
        self.path = path
        head = (
            "Invalid configuration in '{0}':".format(path)
            if path
            else "Invalid configuration:"
        )
        super().__init__("\n  ".join([head, *self.problems]))


class OptimizerAbort(MicrogridError, RuntimeError):
    """
    A loss evaluation failed inside an optimizer run.

    :param k: Iteration (MSPSA) or generation (PSO) index at the failure.
    :param theta: The working iterate at the failure.
    :param cause: The original exception.
    """

    def __init__(self, k: int, theta, cause: BaseException):
        self.k = k
        self.theta = np.array(theta, dtype=float)
        self.cause = cause
        super().__init__(
            "Loss evaluation failed at iteration {0} with theta = {1}: {2!r}".format(
                k, np.array2string(self.theta, precision=6), cause
            )
        )
