#!/usr/bin/env python
"""
Cooperative-receiver WFRFT-DM.

One WFRFT with the shared parameters runs across the ``K``-vector of user symbols
(block length ``J = K``), the result is zero-forced toward the Bobs, and the Bobs pool
their scalar observations to invert the transform together.
"""

import logging
from typing import Sequence

import numpy as np

from dmflow.dsp.channel import observe
from dmflow.dsp.fda import FdaConfig, Location, steering_matrix, steering_vector
from dmflow.dsp.precoding import Precoder, transmit_cooperative
from dmflow.dsp.wfrft import WfrftParams, equivalent_an, inverse_wfrft, weights, wfrft, wfrft_matrix
from dmflow.models.base_scheme import BaseScheme, Receiver
from dmflow.utils.constants import WFRFT_COOP

logger = logging.getLogger(__name__)


def _check_users(symbols: np.ndarray, pre: Precoder):
    if symbols.ndim == 0 or symbols.shape[-1] != pre.n_users:
        raise ValueError(f"Expected {pre.n_users} symbols per channel use, got shape {symbols.shape}")


def coop_alice_encode(symbols, shared_wfrft: WfrftParams, pre: Precoder, ps: float) -> np.ndarray:
    """``x = sqrt(Ps) P F^alpha(s)`` with the transform taken across the ``K`` users."""
    symbols = np.asarray(symbols, dtype=complex)
    _check_users(symbols, pre)
    return transmit_cooperative(pre, wfrft(symbols, shared_wfrft), ps)


def coop_bobs_decode(received, shared_wfrft: WfrftParams) -> np.ndarray:
    """Inverse transform of the pooled ``K`` Bob observations, Bob order on the last axis."""
    return inverse_wfrft(received, shared_wfrft)


def coop_eve_observe(x, eve_loc: Location, cfg: FdaConfig, noise_var: float, rng: np.random.Generator):
    """``h_eve^H x + noise`` for one or more radiated vectors."""
    return observe(x, steering_vector(cfg, eve_loc), noise_var, rng)


def coop_eves_observe(
    x, eve_locs: Sequence[Location], cfg: FdaConfig, noise_var: float, rng: np.random.Generator
) -> np.ndarray:
    """Observations of ``V`` Eves of the same transmission, Eve index on the last axis."""
    return observe(x, steering_matrix(cfg, eve_locs), noise_var, rng)


def coop_eve_decomposition(symbols, shared_wfrft: WfrftParams, pre: Precoder, ps: float, h_eve) -> dict:
    """
    Split a noiseless Eve observation into what she can use and what acts as noise.

    Returns
    ------------
    dict
        ``distorted_signal = sqrt(Ps) w0 rho^T s`` and ``equivalent_an = sqrt(Ps) rho^T eta``;
        their sum is ``h_eve^H x``.
    """
    symbols = np.asarray(symbols, dtype=complex)
    _check_users(symbols, pre)
    rho = pre.p_matrix.T @ np.conj(np.asarray(h_eve, dtype=complex))
    omega0 = weights(shared_wfrft).omega0
    return {
        "distorted_signal": np.sqrt(ps) * omega0 * (symbols @ rho),
        "equivalent_an": np.sqrt(ps) * (equivalent_an(symbols, shared_wfrft) @ rho),
    }


class CooperativeScheme(BaseScheme):
    """
    The Bobs pool their ``K`` observations and invert the shared transform together.

    Any other keyed receiver only has what it observes itself. A leaked-key Eve applies
    the Bob's row of the inverse to her single sample. A keyed probe with peers stands
    for the receiving group moved rigidly: the target Bob sits at the probe and every
    other Bob keeps its angle and range ratio to the target, each with its own noise.
    """

    name = WFRFT_COOP

    @property
    def shared(self) -> WfrftParams:
        return self.scenario.coop_wfrft

    def _decoder_matrix(self) -> np.ndarray:
        params = self.shared.with_alpha(self.shared.alpha + self.alpha_mismatch).inverse()
        return wfrft_matrix(self.n_bobs, params)

    def moved_group(self, receiver: Receiver) -> list[Location]:
        """Bob locations moved so that Bob ``target_k`` lands on ``receiver.location``."""
        k, target = receiver.target_k, receiver.location
        anchor = self.scenario.bobs[k].location
        scale = target.range_m / anchor.range_m
        turn = target.angle_rad - anchor.angle_rad
        return [
            target if j == k else Location(bob.location.range_m * scale, bob.location.angle_rad + turn)
            for j, bob in enumerate(self.scenario.bobs)
        ]

    def sites(self, receiver: Receiver) -> list[tuple[tuple, Location]]:
        if receiver.is_bob:
            return [(("bob", j), bob.location) for j, bob in enumerate(self.scenario.bobs)]
        own = super().sites(receiver)
        if not (receiver.with_key and receiver.with_peers):
            return own
        return [
            own[0] if j == receiver.target_k else ((receiver.name, receiver.location, "peer", j), location)
            for j, location in enumerate(self.moved_group(receiver))
        ]

    def encode(self, symbols: np.ndarray) -> np.ndarray:
        return wfrft(symbols, self.shared)

    def recover(self, receiver: Receiver, samples: np.ndarray) -> np.ndarray:
        if not receiver.with_key:
            return samples[:, 0]
        row = self._decoder_matrix()[receiver.target_k]
        if samples.shape[1] == self.n_bobs:
            return samples @ row
        return row[receiver.target_k] * samples[:, 0]
