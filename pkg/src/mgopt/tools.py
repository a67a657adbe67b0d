#!/usr/bin/env python3
"""
.. module tools
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Small helpers shared by the scenario sampler and the optimizers: deterministic seed
    derivation, named random sub-streams and half-up rounding.
"""

import zlib
from typing import Union

import numpy as np

from mgopt.type_aliases import Vector

# ===================== What can be exported? =====================
__all__ = [
    "SeedLike",
    "stable_key",
    "derive_seed",
    "named_generator",
    "as_generator",
    "round_half_up",
]

SeedLike = Union[int, np.random.Generator]


def stable_key(key: Union[int, str]) -> int:
    """
    Map a sub-stream key to a non-negative integer that does not depend on the interpreter's hash seed.

    :param key: An integer (returned unchanged) or a name such as ``"solar"``.
    :return: A non-negative integer usable in a ``numpy.random.SeedSequence`` spawn key.
    """
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError("Sub-stream keys must be non-negative, got {0}!".format(key))
        return int(key)
    return zlib.crc32(str(key).encode("utf-8"))


def derive_seed(seed: int, *keys: Union[int, str]) -> int:
    """
    Derive a child seed from a master *seed* and a path of *keys*.
    The same ``(seed, keys)`` always gives the same child, and distinct paths give independent children.

    :param seed: The master seed, any non-negative integer (u64 in practice).
    :param keys: Names or indices identifying the sub-stream, e.g. ``("replicate", 3)``.
    :return: A 64-bit unsigned integer.
    """
    sequence = np.random.SeedSequence(
        int(seed), spawn_key=tuple(stable_key(k) for k in keys)
    )
    return int(sequence.generate_state(1, np.uint64)[0])


def named_generator(seed: int, name: str) -> np.random.Generator:
    """
    A ``numpy`` generator for the sub-stream *name* of the master *seed*.
    Adding a new name never shifts the draws of existing names.
    """
    return np.random.default_rng(
        np.random.SeedSequence(int(seed), spawn_key=(stable_key(name),))
    )


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed))


def round_half_up(x) -> Vector:
    """
    Round to the nearest integer with ties going up, so that ``2.5 -> 3`` and ``-2.5 -> -2``.
    ``numpy.round`` rounds ties to even, which is not what we want for capacities.
    """
    return np.floor(np.asarray(x, dtype=float) + 0.5)
