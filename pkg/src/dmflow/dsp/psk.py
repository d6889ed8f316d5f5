#!/usr/bin/env python
"""M-PSK with binary-reflected Gray labels."""

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from dmflow.utils.constants import MODULATION_ORDERS
from dmflow.utils.errors import FramingError

PHASE_OFFSETS = {2: 0.0, 4: np.pi / 4, 8: np.pi / 8}


@dataclass
class PskAlphabet:
    """
    Unit-energy M-PSK constellation, point ``k`` at ``exp(j (2 pi k / M + phi_M))``.

    Point ``k`` carries the Gray label ``k ^ (k >> 1)``, so neighbours differ in one bit.
    """

    m: int
    points: np.ndarray = field(init=False, repr=False, compare=False)
    gray_labels: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.m not in PHASE_OFFSETS:
            raise ValueError(f"Unsupported PSK order {self.m}, choose from {sorted(PHASE_OFFSETS)}")
        k = np.arange(self.m)
        self.points = np.exp(1j * (2 * np.pi * k / self.m + PHASE_OFFSETS[self.m]))
        self._labels = k ^ (k >> 1)
        self._index_of_label = np.argsort(self._labels)
        self.gray_labels = tuple(format(label, f"0{self.bits_per_symbol}b") for label in self._labels)

    @classmethod
    def from_name(cls, name: Union[str, int]) -> "PskAlphabet":
        """Accepts ``"bpsk"``, ``"qpsk"``, ``"8psk"`` or the order itself."""
        if isinstance(name, str):
            key = name.strip().lower()
            if key in MODULATION_ORDERS:
                return cls(MODULATION_ORDERS[key])
            if key.isdigit():
                return cls(int(key))
            raise ValueError(f'Unknown modulation "{name}", choose from {sorted(MODULATION_ORDERS)}')
        return cls(int(name))

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(self.m))

    @property
    def name(self) -> str:
        return {2: "bpsk", 4: "qpsk", 8: "8psk"}[self.m]


def map_bits(bits, alphabet: PskAlphabet) -> np.ndarray:
    """Map groups of ``log2 M`` bits (MSB first) on the last axis to constellation points."""
    bits = np.asarray(bits)
    if bits.size and not np.isin(bits, (0, 1)).all():
        raise ValueError("bits must contain only 0 and 1")
    width = alphabet.bits_per_symbol
    if bits.ndim == 0 or bits.shape[-1] % width:
        raise FramingError(f"{bits.shape[-1] if bits.ndim else 0} bits do not split into {width}-bit symbols")
    groups = bits.astype(np.int64).reshape(*bits.shape[:-1], -1, width)
    labels = groups @ (1 << np.arange(width - 1, -1, -1))
    return alphabet.points[alphabet._index_of_label[labels]]


def demap_ml(y, alphabet: PskAlphabet) -> np.ndarray:
    """Nearest-point decisions; for PSK that is the nearest phase, so scaling never matters."""
    y = np.asarray(y, dtype=complex)
    step = 2 * np.pi / alphabet.m
    index = np.rint((np.angle(y) - PHASE_OFFSETS[alphabet.m]) / step).astype(np.int64) % alphabet.m
    labels = alphabet._labels[index]
    width = alphabet.bits_per_symbol
    shifts = np.arange(width - 1, -1, -1)
    bits = (labels[..., None] >> shifts) & 1
    return bits.reshape(*y.shape[:-1], -1).astype(np.uint8) if y.ndim else bits.astype(np.uint8)


def count_bit_errors(tx, rx) -> tuple[int, int]:
    """Hamming distance between two bit arrays, and their length."""
    tx = np.asarray(tx)
    rx = np.asarray(rx)
    if tx.shape != rx.shape:
        raise ValueError(f"Bit arrays differ in shape: {tx.shape} vs {rx.shape}")
    return int(np.count_nonzero(tx != rx)), int(tx.size)


def random_bits(n_symbols: int, alphabet: PskAlphabet, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, size=n_symbols * alphabet.bits_per_symbol, dtype=np.uint8)
