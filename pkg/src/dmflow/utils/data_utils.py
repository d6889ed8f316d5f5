"""Random streams, grid parsing and batching helpers shared by the pipelines."""

import zlib
from typing import Union

import numpy as np


def stable_key(name: str) -> int:
    """Map a name (experiment id, scheme) to a stable 32-bit integer for seeding."""
    return zlib.crc32(name.encode("utf-8"))


def make_rng(seed: int, *keys: Union[int, str]) -> np.random.Generator:
    """
    Build a counter-based random stream keyed on ``seed`` and a tuple of keys.

    Parameters
    ------------
    seed : int
        Master seed (any non-negative 64-bit integer).

    keys : int or str
        Spawn path, e.g. ``(experiment, scheme, sweep_index, trial_index)``. String keys
        are hashed with :func:`stable_key`.

    Returns
    ------------
    rng : numpy.random.Generator
        A Philox-backed generator. The same ``(seed, *keys)`` always yields the same
        stream, independent of the order in which streams are created.
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    spawn_key = tuple(stable_key(k) if isinstance(k, str) else int(k) for k in keys)
    seed_sequence = np.random.SeedSequence(entropy=seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(seed_sequence))


def batchlize(examples: list, batch_size: int) -> list[list]:
    """
    Split ``examples`` into consecutive batches of at most ``batch_size`` items.

    Parameters
    ------------
    examples : list.
        Items to split, order kept.
    batch_size : int.

    Returns
    ------------
    batches : list of lists.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be at least 1, got {batch_size}")
    return [examples[start : start + batch_size] for start in range(0, len(examples), batch_size)]


def parse_float_list(value: Union[str, list, tuple]) -> list[float]:
    """Parse ``"0,2,4"`` (or an already split list) into floats."""
    if isinstance(value, str):
        value = [elem.strip() for elem in value.split(",") if elem.strip()]
    return [float(elem) for elem in value]


def parse_linspace(value: Union[str, list, np.ndarray]) -> np.ndarray:
    """Parse ``"start,stop,num"`` into ``numpy.linspace(start, stop, num)``; explicit grids pass through."""
    if not isinstance(value, str):
        return np.asarray(value, dtype=float)
    parts = parse_float_list(value)
    if len(parts) != 3:
        raise ValueError(f'Grid "{value}" must be given as "start,stop,num"')
    start, stop, num = parts
    if num < 1 or int(num) != num:
        raise ValueError(f'Grid "{value}" needs a positive integer point count')
    return np.linspace(start, stop, int(num))


def parse_offset_pairs(value: Union[str, list]) -> list[tuple[float, float]]:
    """Parse ``"0:0,1:2"`` into ``[(0.0, 0.0), (1.0, 2.0)]``."""
    if not isinstance(value, str):
        return [(float(first), float(second)) for first, second in value]
    pairs = []
    for item in [elem.strip() for elem in value.split(",") if elem.strip()]:
        first, sep, second = item.partition(":")
        if not sep:
            raise ValueError(f'Offset "{item}" must be given as "a:b"')
        pairs.append((float(first), float(second)))
    return pairs
