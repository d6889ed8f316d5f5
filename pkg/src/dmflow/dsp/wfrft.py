#!/usr/bin/env python
"""
Normalized DFT and the 4-weighted fractional Fourier transform (WFRFT).

The transform of order ``alpha`` is a weighted sum of the first four powers of the
unitary DFT ``D``::

    F^alpha(s) = w0 * s + w1 * D(s) + w2 * D^2(s) + w3 * D^3(s)

The weights come from the multi-parameter form driven by ``(alpha, M_V, N_V)``; with
``M_V = N_V = 0`` it collapses to the classical single-parameter transform. Every
function works on the last axis, so a ``(trials, J)`` array transforms ``trials``
blocks at once.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import dft

logger = logging.getLogger(__name__)

DFT_METHODS = ("direct", "fft")

_ZERO_VECTOR = (0, 0, 0, 0)
# j ** (k * i) for k, i in 0..3, looked up instead of computed so it stays exact.
_UNIT_POWERS = np.array([1, 1j, -1, -1j])[np.outer(np.arange(4), np.arange(4)) % 4]


def _as_int_vector(name: str, value) -> tuple[int, ...]:
    values = tuple(value)
    if len(values) != 4:
        raise ValueError(f"{name} must hold exactly 4 integers, got {len(values)}")
    result = []
    for elem in values:
        if isinstance(elem, bool) or int(elem) != elem:
            raise ValueError(f"{name} must hold integers, got {elem!r}")
        result.append(int(elem))
    return tuple(result)


@dataclass(frozen=True)
class WfrftParams:
    """
    Transform descriptor ``(alpha, M_V, N_V)``.

    Parameters
    ------------
    alpha : float
        Transform order. Only ``alpha mod 4`` matters.
    m_vec, n_vec : tuple of 4 ints
        Integer parameter vectors. Zeros give the single-parameter transform.
    """

    alpha: float
    m_vec: tuple[int, ...] = _ZERO_VECTOR
    n_vec: tuple[int, ...] = _ZERO_VECTOR

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "m_vec", _as_int_vector("m_vec", self.m_vec))
        object.__setattr__(self, "n_vec", _as_int_vector("n_vec", self.n_vec))

    @property
    def is_single_parameter(self) -> bool:
        return self.m_vec == _ZERO_VECTOR and self.n_vec == _ZERO_VECTOR

    def with_alpha(self, alpha: float) -> "WfrftParams":
        return WfrftParams(alpha, self.m_vec, self.n_vec)

    def inverse(self) -> "WfrftParams":
        return self.with_alpha(-self.alpha)

    def single_parameter(self) -> "WfrftParams":
        return WfrftParams(self.alpha)


@dataclass(frozen=True, eq=False)
class WfrftWeights:
    """The four weights ``w0..w3`` of a WFRFT."""

    w: np.ndarray

    @property
    def omega0(self) -> complex:
        return complex(self.w[0])

    @property
    def equivalent_an_variance(self) -> float:
        """Power that a receiver without the parameters sees as noise, ``1 - |w0|^2``."""
        return float(1.0 - abs(self.w[0]) ** 2)


def _as_sequence(s) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    if s.ndim == 0 or s.shape[-1] == 0:
        raise ValueError("Cannot transform an empty sequence")
    return s


@lru_cache(maxsize=64)
def _dft_matrix(length: int) -> np.ndarray:
    matrix = dft(length, scale="sqrtn")
    matrix.setflags(write=False)
    return matrix


def normalized_dft(s, method: str = "direct") -> np.ndarray:
    """
    Unitary DFT along the last axis, ``S_k = (1/sqrt(J)) sum_n s_n exp(-j 2 pi k n / J)``.

    Parameters
    ------------
    s : array_like
        Complex samples, block length ``J`` on the last axis.

    method : str
        ``"direct"`` multiplies by the cached DFT matrix, ``"fft"`` uses
        ``numpy.fft`` with orthonormal scaling. Both satisfy the same contract.

    Returns
    ------------
    numpy.ndarray of the same shape.
    """
    s = _as_sequence(s)
    if method == "direct":
        # The DFT matrix is symmetric, so right-multiplying applies it row-wise.
        return s @ _dft_matrix(s.shape[-1])
    if method == "fft":
        return np.fft.fft(s, axis=-1, norm="ortho")
    raise ValueError(f'Unknown DFT method "{method}", choose from {DFT_METHODS}')


def _reverse(s: np.ndarray) -> np.ndarray:
    """D^2: ``out[n] = s[-n mod J]``."""
    return np.roll(s[..., ::-1], 1, axis=-1)


def weights_multi(p: WfrftParams) -> WfrftWeights:
    """
    Multi-parameter weights.

    ``w_i = 1/4 sum_k exp{-j (2 pi / 4) [(4 m_k + 1)(4 n_k + k) alpha - k i]}``. The
    term in brackets is the eigen-phase of ``F^alpha`` on the k-th DFT eigenspace;
    it is reduced mod 4 so large ``M_V``/``N_V`` do not inflate the trig arguments.
    """
    alpha = np.remainder(p.alpha, 4.0)
    k = np.arange(4)
    phi = (4 * np.asarray(p.m_vec) + 1) * (4 * np.asarray(p.n_vec) + k)
    eigen_phase = np.remainder(phi * alpha, 4.0)
    eigenvalues = np.exp(-0.5j * np.pi * eigen_phase)
    return WfrftWeights(w=0.25 * eigenvalues @ _UNIT_POWERS)


def weights_single(alpha: float) -> WfrftWeights:
    """
    Single-parameter weights.

    ``w_i = cos((alpha-i) pi/4) cos(2 (alpha-i) pi/4) exp(-j 3 (alpha-i) pi/4)``, the
    closed form of :func:`weights_multi` with zero vectors.
    """
    x = np.remainder(alpha, 4.0) - np.arange(4)
    w = np.cos(x * np.pi / 4) * np.cos(2 * x * np.pi / 4) * np.exp(-3j * x * np.pi / 4)
    return WfrftWeights(w=w)


def weights(p: WfrftParams) -> WfrftWeights:
    if p.is_single_parameter:
        return weights_single(p.alpha)
    return weights_multi(p)


def wfrft(s, p: WfrftParams, method: str = "direct") -> np.ndarray:
    """Forward WFRFT of every block on the last axis."""
    s = _as_sequence(s)
    w = weights(p).w
    d1 = normalized_dft(s, method=method)
    return w[0] * s + w[1] * d1 + w[2] * _reverse(s) + w[3] * _reverse(d1)


def inverse_wfrft(s, p: WfrftParams, method: str = "direct") -> np.ndarray:
    """Inverse WFRFT: the forward transform with ``alpha`` negated."""
    return wfrft(s, p.inverse(), method=method)


def equivalent_an(s, p: WfrftParams, method: str = "direct") -> np.ndarray:
    """The part ``w1 D(s) + w2 D^2(s) + w3 D^3(s)`` that acts as noise without the key."""
    s = _as_sequence(s)
    return wfrft(s, p, method=method) - weights(p).w[0] * s


@lru_cache(maxsize=256)
def wfrft_matrix(length: int, p: WfrftParams) -> np.ndarray:
    """``J x J`` operator matrix, column ``n`` is the transform of the n-th basis vector."""
    if length < 1:
        raise ValueError(f"Block length must be at least 1, got {length}")
    matrix = wfrft(np.eye(length), p).T
    matrix.setflags(write=False)
    return matrix


def equivalent_an_covariance(length: int, p: WfrftParams) -> np.ndarray:
    """Covariance of the equivalent AN for i.i.d. unit-power symbols, ``(F - w0 I)(F - w0 I)^H``."""
    a = wfrft_matrix(length, p) - weights(p).w[0] * np.eye(length)
    return a @ a.conj().T


def equivalent_an_variance_exact(length: int, p: WfrftParams) -> float:
    """Equivalent-AN power per sample, averaged over a block of ``length``.

    Equals ``1 - |w0|^2`` only when the cross terms ``Re(w0* w_i tr(D^i))`` cancel,
    which they do asymptotically in ``length``.
    """
    return float(np.real(np.trace(equivalent_an_covariance(length, p))) / length)


def mismatch_residual(p: WfrftParams, delta_alpha: float, length: int) -> float:
    """Per-symbol distortion ``||F^delta - I||_F^2 / J`` left by a receiver whose order is off by ``delta``."""
    error = wfrft_matrix(length, p.with_alpha(delta_alpha)) - np.eye(length)
    return float(np.sum(np.abs(error) ** 2) / length)
