#!/usr/bin/env python
"""Line-of-sight FDA channel with additive white Gaussian noise."""

import numpy as np


def complex_gaussian(shape, variance: float, rng: np.random.Generator) -> np.ndarray:
    """Circular complex Gaussian samples, ``variance / 2`` on each of the real and imaginary parts."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def awgn(signal, noise_var: float, rng: np.random.Generator) -> np.ndarray:
    """Add i.i.d. circular complex Gaussian noise of variance ``noise_var`` to every sample."""
    if noise_var < 0:
        raise ValueError(f"noise_var must be non-negative, got {noise_var}")
    signal = np.asarray(signal, dtype=complex)
    if noise_var == 0:
        return signal.copy()
    return signal + complex_gaussian(signal.shape, noise_var, rng)


def observe(x, steering, noise_var: float, rng: np.random.Generator) -> np.ndarray:
    """
    Receive ``h^H x + noise`` at one or more locations.

    Parameters
    ------------
    x : array_like
        Radiated vectors, ``(..., (2N+1)L)``.
    steering : array_like
        A steering vector ``((2N+1)L,)`` or a matrix ``((2N+1)L, R)`` of them.
    noise_var : float
    rng : numpy.random.Generator

    Returns
    ------------
    numpy.ndarray
        ``(...)`` for a single vector, ``(..., R)`` for a matrix.
    """
    x = np.asarray(x, dtype=complex)
    steering = np.asarray(steering, dtype=complex)
    return awgn(x @ steering.conj(), noise_var, rng)
