#!/usr/bin/env python
"""
Closed-form performance figures: SNR, M-PSK bit error rates, per-receiver SINRs,
achievable rates and secrecy rates for the cooperative scheme, the independent
scheme and the AN-DM baseline.

All SNR/SINR arguments and results are linear ratios unless the name says ``_db``.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, special

from dmflow.dsp.fda import FdaConfig, Location, steering_vector
from dmflow.dsp.precoding import Precoder, null_space_projector
from dmflow.dsp.wfrft import WfrftParams, WfrftWeights, equivalent_an_covariance, equivalent_an_variance_exact
from dmflow.dsp.wfrft import weights as wfrft_weights

logger = logging.getLogger(__name__)

SUPPORTED_ORDERS = (2, 4, 8)


def _check_order(m: int):
    if m not in SUPPORTED_ORDERS:
        raise ValueError(f"Unsupported PSK order {m}, choose from {SUPPORTED_ORDERS}")


def q_function(t):
    """Gaussian tail probability, ``Q(t) = erfc(t / sqrt(2)) / 2``."""
    return 0.5 * special.erfc(np.asarray(t, dtype=float) / np.sqrt(2.0))


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(np.asarray(value, dtype=float))


def snr(ps: float, noise_var: float) -> float:
    """``gamma = Ps / sigma^2``."""
    if ps <= 0 or noise_var <= 0:
        raise ValueError(f"ps and noise_var must be positive, got ps={ps}, noise_var={noise_var}")
    return ps / noise_var


def theoretical_ber_mpsk(gamma, m: int):
    """
    Textbook M-PSK approximation ``(2 / log2 M) Q(sqrt(2 gamma) sin(pi / M))``.

    Kept in this form for the "theory" curves. At ``M = 2`` it is twice the exact
    ``Q(sqrt(2 gamma))``; :func:`awgn_ber_mpsk` gives the exact value.
    """
    _check_order(m)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise ValueError("gamma must be non-negative")
    return 2.0 / np.log2(m) * q_function(np.sqrt(2.0 * gamma) * np.sin(np.pi / m))


def _phase_density(phi: float, gamma: float) -> float:
    """Density of the received phase error for a unit PSK point at symbol SNR ``gamma``."""
    cos_phi = np.cos(phi)
    return np.exp(-gamma) / (2 * np.pi) + 0.5 * np.sqrt(gamma / np.pi) * cos_phi * np.exp(
        -gamma * np.sin(phi) ** 2
    ) * (1.0 + special.erf(np.sqrt(gamma) * cos_phi))


def _gray_bit_distance(m: int) -> np.ndarray:
    k = np.arange(m)
    labels = k ^ (k >> 1)
    return np.array([bin(labels[0] ^ label).count("1") for label in labels])


def _ber_by_integration(gamma: float, m: int) -> float:
    # By rotational symmetry the error profile seen from point 0 holds for every point.
    distances = _gray_bit_distance(m)
    half_wedge = np.pi / m
    total = 0.0
    for i in range(1, m):
        if distances[i] == 0:
            continue
        center = 2 * np.pi * i / m
        probability, _ = integrate.quad(
            _phase_density, center - half_wedge, center + half_wedge, args=(gamma,), epsabs=0.0, epsrel=1e-10
        )
        total += distances[i] * probability
    return total / np.log2(m)


def awgn_ber_mpsk(gamma, m: int):
    """
    Exact bit error rate of Gray-labelled M-PSK over AWGN at symbol SNR ``gamma``.

    BPSK and QPSK use their closed forms; 8PSK integrates the received-phase density
    over every wrong decision wedge, weighted by the Hamming distance of its label.
    """
    _check_order(m)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise ValueError("gamma must be non-negative")
    if m == 2:
        return q_function(np.sqrt(2.0 * gamma))
    if m == 4:
        return q_function(np.sqrt(gamma))
    result = np.vectorize(lambda g: _ber_by_integration(float(g), m), otypes=[float])(gamma)
    return float(result) if result.ndim == 0 else result


def achievable_rate(sinr):
    """``log2(1 + sinr)`` in bits/s/Hz."""
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0):
        raise ValueError("sinr must be non-negative")
    return np.log2(1.0 + sinr)


def empirical_sinr(signal_part, noise_part) -> float:
    """Ratio of the mean powers of the signal component and everything else."""
    return float(np.mean(np.abs(signal_part) ** 2) / np.mean(np.abs(noise_part) ** 2))


def leakage_coefficients(pre: Precoder, h_eve) -> np.ndarray:
    """``rho = P^T h*``: how much of each Bob's stream reaches an observer with steering ``h_eve``."""
    return pre.p_matrix.T @ np.conj(np.asarray(h_eve, dtype=complex))


# Cooperative scheme


def coop_bob_sinr(ps: float, noise_var: float) -> float:
    """Each Bob sees its symbol free of interference after the joint inverse transform."""
    return snr(ps, noise_var)


def coop_eve_sinr_from_leakage(rho, weights: WfrftWeights, ps: float, noise_var: float):
    """:func:`coop_eve_sinr` for leakage coefficients on the last axis, one SINR per leading index."""
    gain = np.sum(np.abs(np.asarray(rho, dtype=complex)) ** 2, axis=-1)
    omega0_power = abs(weights.omega0) ** 2
    sinr = ps * omega0_power * gain / (ps * gain * weights.equivalent_an_variance + noise_var)
    return float(sinr) if np.ndim(sinr) == 0 else sinr


def coop_eve_sinr(
    pre: Precoder, eve: Location, cfg: FdaConfig, weights: WfrftWeights, ps: float, noise_var: float
) -> float:
    """
    SINR of an Eve that lacks the shared parameters.

    ``Ps |w0|^2 g / (Ps g sigma_eta^2 + sigma^2)`` with ``g = h^H P P^H h``, treating the
    equivalent AN as white with variance ``1 - |w0|^2``.
    """
    rho = leakage_coefficients(pre, steering_vector(cfg, eve))
    return coop_eve_sinr_from_leakage(rho, weights, ps, noise_var)


def coop_eve_sinr_exact(
    pre: Precoder, eve: Location, cfg: FdaConfig, params: WfrftParams, ps: float, noise_var: float
) -> float:
    """Same as :func:`coop_eve_sinr` with the equivalent AN's true covariance across the ``K`` users."""
    rho = leakage_coefficients(pre, steering_vector(cfg, eve))
    covariance = equivalent_an_covariance(pre.n_users, params)
    omega0 = wfrft_weights(params).omega0
    signal = ps * abs(omega0) ** 2 * float(np.sum(np.abs(rho) ** 2))
    an_power = ps * float(np.real(rho @ covariance @ np.conj(rho)))
    return signal / (an_power + noise_var)


def coop_secrecy_rate(bob_rates: Sequence[float], eve_rates: Sequence[float]) -> float:
    """``max_k [min_v (R_bob_k - R_eve_v)]^+``."""
    bob_rates = np.asarray(bob_rates, dtype=float)
    eve_rates = np.asarray(eve_rates, dtype=float)
    if bob_rates.size == 0:
        raise ValueError("At least one Bob rate is required")
    if eve_rates.size == 0:
        raise ValueError("Secrecy rate is undefined without at least one Eve")
    gaps = bob_rates[:, None] - eve_rates[None, :]
    return max(float(np.max(np.min(gaps, axis=1))), 0.0)


# Independent scheme


def inde_eve_sinr(
    rho, weights_per_bob: Sequence[WfrftWeights], target_k: int, ps: float, noise_var: float
) -> float:
    """
    SINR of an Eve without the keys that targets Bob ``target_k`` (0-based).

    The other Bobs' distorted signals and every Bob's equivalent AN count as interference.
    ``rho`` holds one coefficient per Bob on its last axis; leading axes index Eves.
    """
    rho = np.asarray(rho, dtype=complex)
    n_bobs = rho.shape[-1] if rho.ndim else 1
    if len(weights_per_bob) != n_bobs:
        raise ValueError(f"Got {n_bobs} leakage coefficients but {len(weights_per_bob)} weight sets")
    if not 0 <= target_k < n_bobs:
        raise IndexError(f"target_k {target_k} outside [0, {n_bobs - 1}]")
    leak = np.abs(rho) ** 2
    omega0 = np.array([abs(w.omega0) ** 2 for w in weights_per_bob])
    an_variance = np.array([w.equivalent_an_variance for w in weights_per_bob])
    return _inde_ratio(leak, omega0, an_variance, target_k, ps, noise_var)


def inde_eve_sinr_exact(
    rho,
    params_per_bob: Sequence[WfrftParams],
    block_lens: Sequence[int],
    target_k: int,
    ps: float,
    noise_var: float,
) -> float:
    """:func:`inde_eve_sinr` with each Bob's equivalent-AN power averaged over its actual block length."""
    rho = np.asarray(rho, dtype=complex)
    if not len(params_per_bob) == len(block_lens) == rho.size:
        raise ValueError("rho, params_per_bob and block_lens must all have one entry per Bob")
    if not 0 <= target_k < rho.size:
        raise IndexError(f"target_k {target_k} outside [0, {rho.size - 1}]")
    leak = np.abs(rho) ** 2
    omega0 = np.array([abs(wfrft_weights(p).omega0) ** 2 for p in params_per_bob])
    an_variance = np.array([equivalent_an_variance_exact(q, p) for p, q in zip(params_per_bob, block_lens)])
    return _inde_ratio(leak, omega0, an_variance, target_k, ps, noise_var)


def _inde_ratio(leak, omega0, an_variance, target_k, ps, noise_var):
    signal = ps * leak[..., target_k] * omega0[target_k]
    others = ps * np.sum(leak * omega0, axis=-1) - signal
    an_power = ps * np.sum(leak * an_variance, axis=-1)
    sinr = signal / (others + an_power + noise_var)
    return float(sinr) if np.ndim(sinr) == 0 else sinr


def inde_secrecy_rate(bob_rates: Sequence[float], eve_rate_matrix) -> float:
    """``max_k [min_v (R_bob_k - max_k' R_eve_{v,k'})]^+`` over a ``V x K`` Eve rate matrix."""
    bob_rates = np.asarray(bob_rates, dtype=float)
    eve_rate_matrix = np.atleast_2d(np.asarray(eve_rate_matrix, dtype=float))
    if bob_rates.size == 0:
        raise ValueError("At least one Bob rate is required")
    if eve_rate_matrix.size == 0:
        raise ValueError("Secrecy rate is undefined without at least one Eve")
    best_eve = np.max(eve_rate_matrix, axis=1)
    gaps = bob_rates[:, None] - best_eve[None, :]
    return max(float(np.max(np.min(gaps, axis=1))), 0.0)


# AN-DM baseline


def an_dm_bob_sinr(ps: float, noise_var: float, beta1: float) -> float:
    """``beta1^2 gamma``: the AN never reaches a Bob, only the signal share is lost."""
    return beta1**2 * snr(ps, noise_var)


def an_dm_eve_sinr(pre: Precoder, h_eve, beta1: float, target_k: int, ps: float, noise_var: float):
    """
    SINR of an Eve targeting Bob ``target_k`` under AN-DM.

    The AN is uniformly oriented in the ``(2N+1)L - K`` dimensional null space, so its
    mean power at the Eve is ``(1 - beta1^2) Ps h^H Pi h / ((2N+1)L - K)``. A matrix
    ``h_eve`` holds one steering vector per column and yields one SINR per column.
    """
    h_eve = np.asarray(h_eve, dtype=complex)
    if not 0 <= target_k < pre.n_users:
        raise IndexError(f"target_k {target_k} outside [0, {pre.n_users - 1}]")
    leak = np.moveaxis(np.abs(leakage_coefficients(pre, h_eve)) ** 2, 0, -1)
    null_dim = pre.dimension - pre.n_users
    if null_dim > 0:
        an_gain = np.real(np.sum(np.conj(h_eve) * (null_space_projector(pre) @ h_eve), axis=0)) / null_dim
    else:
        an_gain = 0.0
    signal = beta1**2 * ps * leak[..., target_k]
    interference = beta1**2 * ps * np.sum(leak, axis=-1) - signal
    sinr = signal / (interference + (1.0 - beta1**2) * ps * an_gain + noise_var)
    return float(sinr) if np.ndim(sinr) == 0 else sinr


def required_transmit_power(rate: float, noise_var: float, epsilon: float, beta1: Optional[float] = None) -> float:
    """
    Total radiated power ``E ||x||^2`` that gives every Bob ``rate`` bits/s/Hz.

    Without ``beta1`` this is the WFRFT-DM figure ``sigma^2 (2^rate - 1) / epsilon``; with
    it, the AN-DM figure where only ``beta1^2`` of ``Ps`` reaches the Bobs and the AN
    still has to be radiated.
    """
    if rate < 0:
        raise ValueError(f"rate must be non-negative, got {rate}")
    if noise_var <= 0 or epsilon <= 0:
        raise ValueError("noise_var and epsilon must be positive")
    needed_snr = 2.0**rate - 1.0
    if beta1 is None:
        return noise_var * needed_snr / epsilon
    if not 0 < beta1 < 1:
        raise ValueError(f"beta1 must lie strictly between 0 and 1, got {beta1}")
    ps = noise_var * needed_snr / beta1**2
    return ps * (beta1**2 / epsilon + 1.0 - beta1**2)


@dataclass
class RateReport:
    """
    Achievable rates of one scenario at one SNR.

    Parameters
    ------------
    bob_rates : numpy.ndarray
        ``K`` Bob rates.
    eve_rates : numpy.ndarray
        ``V`` rates (cooperative) or a ``V x K`` matrix (independent, AN-DM).
    secrecy_rate : float
        Never negative.
    """

    bob_rates: np.ndarray
    eve_rates: np.ndarray
    secrecy_rate: float

    def __post_init__(self):
        if self.secrecy_rate < 0:
            raise ValueError(f"secrecy_rate must be non-negative, got {self.secrecy_rate}")

    @classmethod
    def from_cooperative(cls, bob_rates, eve_rates) -> "RateReport":
        return cls(np.asarray(bob_rates, float), np.asarray(eve_rates, float), coop_secrecy_rate(bob_rates, eve_rates))

    @classmethod
    def from_independent(cls, bob_rates, eve_rate_matrix) -> "RateReport":
        eve_rate_matrix = np.atleast_2d(np.asarray(eve_rate_matrix, float))
        return cls(np.asarray(bob_rates, float), eve_rate_matrix, inde_secrecy_rate(bob_rates, eve_rate_matrix))
