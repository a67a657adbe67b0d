#!/usr/bin/env python3
"""
.. module type_aliases
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Array type hints used throughout the package. ``Vector`` is an hourly series or a design
    vector of floats, ``BoolVector`` an hourly availability mask, and ``Matrix`` a stack of vectors
    (for example, one particle per row).
"""

from numpy import bool_, float64
from numpy.typing import NDArray

# ===================== What can be exported? =====================
__all__ = ["Scalar", "Vector", "BoolVector", "Matrix"]

Scalar = float64  # 0-dimensional float
Vector = NDArray[float64]  # 1-dimensional floats
BoolVector = NDArray[bool_]  # 1-dimensional booleans
Matrix = NDArray[float64]  # 2-dimensional floats
