#!/usr/bin/env python
"""
Independent-receiver WFRFT-DM.

Every Bob ``k`` has its own path: its symbols are transformed in blocks of ``Q_k`` with
``(alpha_k, M_V, N_V)``, the transformed samples queue in a per-path FIFO, and each
channel use drains one sample from every FIFO into the precoder input ``z_q``. Bob
``k`` collects ``Q_k`` consecutive observations and inverts his own block alone.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from dmflow.dsp.channel import observe
from dmflow.dsp.fda import FdaConfig, Location, steering_vector
from dmflow.dsp.precoding import Precoder, transmit_cooperative
from dmflow.dsp.wfrft import WfrftParams, inverse_wfrft, weights, wfrft
from dmflow.models.base_scheme import BaseScheme, Receiver
from dmflow.scenarios.scenario import BobProfile
from dmflow.utils.constants import WFRFT_INDE
from dmflow.utils.errors import FramingError

logger = logging.getLogger(__name__)


@dataclass
class TransmitFrame:
    """
    ``q_total`` channel uses of the independent scheme.

    Parameters
    ------------
    columns : numpy.ndarray
        ``(Q, (2N+1)L)`` radiated vectors ``x_q``.
    q_total : int
    z : numpy.ndarray
        ``(Q, K)`` precoder inputs, the FIFO samples drained at each channel use.
    stream : numpy.ndarray
        ``(Q, K)`` untransformed symbols aligned with ``z``.
    residual : list of numpy.ndarray
        Transformed samples each FIFO still holds after the frame.
    precoder : Precoder
    ps : float
    """

    columns: np.ndarray
    q_total: int
    z: np.ndarray
    stream: np.ndarray
    residual: list[np.ndarray] = field(default_factory=list)
    precoder: Optional[Precoder] = None
    ps: float = 1.0


@dataclass
class EveObservation:
    """An Eve's per-channel-use samples and her leakage coefficients ``rho = P^T h*``."""

    samples: np.ndarray
    leakage: np.ndarray


def _transform_path(symbols: np.ndarray, profile: BobProfile, alpha_offset: float = 0.0) -> np.ndarray:
    q = profile.block_len
    if symbols.shape[-1] % q:
        raise FramingError(f"{symbols.shape[-1]} symbols do not fill whole blocks of Q = {q}")
    params = profile.wfrft.with_alpha(profile.wfrft.alpha + alpha_offset)
    blocks = symbols.reshape(*symbols.shape[:-1], -1, q)
    return wfrft(blocks, params).reshape(symbols.shape)


def inde_alice_encode(
    per_bob_blocks: Sequence,
    bobs: Sequence[BobProfile],
    pre: Precoder,
    ps: float,
    q_total: Optional[int] = None,
) -> TransmitFrame:
    """
    Assemble ``q_total`` channel uses (``max_k Q_k`` by default).

    Parameters
    ------------
    per_bob_blocks : list of array_like
        Symbols of each Bob, a whole number of ``Q_k`` blocks, enough to supply
        ``q_total`` samples.

    Raises
    ------------
    FramingError
        When a path holds a partial block or too few samples for the frame.
    """
    if len(per_bob_blocks) != len(bobs) or len(bobs) != pre.n_users:
        raise ValueError(f"Need symbols and a profile for each of the {pre.n_users} Bobs")
    q_total = max(bob.block_len for bob in bobs) if q_total is None else q_total
    if q_total < 1:
        raise FramingError(f"q_total must be at least 1, got {q_total}")

    z_columns, raw_columns, residual = [], [], []
    for k, (symbols, bob) in enumerate(zip(per_bob_blocks, bobs)):
        symbols = np.asarray(symbols, dtype=complex).reshape(-1)
        if symbols.size < q_total:
            raise FramingError(
                f"Bob {k + 1} supplies {symbols.size} symbols, {q_total} are needed to fill the frame"
            )
        fifo = _transform_path(symbols, bob)
        z_columns.append(fifo[:q_total])
        raw_columns.append(symbols[:q_total])
        residual.append(fifo[q_total:])

    z = np.stack(z_columns, axis=-1)
    return TransmitFrame(
        columns=transmit_cooperative(pre, z, ps),
        q_total=q_total,
        z=z,
        stream=np.stack(raw_columns, axis=-1),
        residual=residual,
        precoder=pre,
        ps=ps,
    )


def inde_bob_decode(observations, profile: BobProfile, alpha_offset: float = 0.0) -> np.ndarray:
    """Invert one aligned block (or a batch of blocks on the leading axes) of ``Q_k`` observations."""
    observations = np.asarray(observations, dtype=complex)
    if observations.ndim == 0 or observations.shape[-1] != profile.block_len:
        raise FramingError(f"Expected blocks of {profile.block_len} observations, got shape {observations.shape}")
    params = profile.wfrft.with_alpha(profile.wfrft.alpha + alpha_offset)
    return inverse_wfrft(observations, params)


def inde_eve_observe(
    frame: TransmitFrame, eve_loc: Location, cfg: FdaConfig, noise_var: float, rng: np.random.Generator
) -> EveObservation:
    h_eve = steering_vector(cfg, eve_loc)
    leakage = frame.precoder.p_matrix.T @ np.conj(h_eve) if frame.precoder is not None else None
    return EveObservation(samples=observe(frame.columns, h_eve, noise_var, rng), leakage=leakage)


def eve_decode_with_leaked_params(observations, leaked: Sequence[BobProfile], target_k: int) -> np.ndarray:
    """
    An Eve who knows every Bob's ``alpha`` and ``Q`` applies Bob ``target_k``'s inverse
    transform to her own block-aligned samples.

    Away from Bob ``target_k`` the result is still scaled by ``rho_k`` and mixed with the
    other Bobs' streams.
    """
    if not 0 <= target_k < len(leaked):
        raise IndexError(f"target_k {target_k} outside [0, {len(leaked) - 1}]")
    profile = leaked[target_k]
    observations = np.asarray(observations, dtype=complex)
    if observations.shape[-1] % profile.block_len:
        raise FramingError(f"{observations.shape[-1]} samples do not fill whole blocks of Q = {profile.block_len}")
    blocks = observations.reshape(*observations.shape[:-1], -1, profile.block_len)
    return inverse_wfrft(blocks, profile.wfrft).reshape(observations.shape)


def inde_eve_decomposition(frame: TransmitFrame, bobs: Sequence[BobProfile], target_k: int, h_eve, noise) -> dict:
    """
    Four parts of an Eve's observation while she targets Bob ``target_k``.

    Returns
    ------------
    dict
        ``distorted_signal`` (``sqrt(Ps) rho_k w0_k s_k``), ``mixed_noise`` (the other
        Bobs' ``w0`` parts), ``equivalent_an`` (every Bob's ``eta``) and ``awgn``.
    """
    rho = frame.precoder.p_matrix.T @ np.conj(np.asarray(h_eve, dtype=complex))
    omega0 = np.array([weights(bob.wfrft).omega0 for bob in bobs])
    scale = np.sqrt(frame.ps)
    useful = frame.stream * omega0
    an = frame.z - useful
    others = np.ones(len(bobs), dtype=bool)
    others[target_k] = False
    return {
        "distorted_signal": scale * useful[:, target_k] * rho[target_k],
        "mixed_noise": scale * (useful[:, others] @ rho[others]),
        "equivalent_an": scale * (an @ rho),
        "awgn": np.asarray(noise, dtype=complex),
    }


class IndependentScheme(BaseScheme):
    name = WFRFT_INDE

    @property
    def frame_len(self) -> int:
        return self.scenario.block_lcm

    def encode(self, symbols: np.ndarray) -> np.ndarray:
        # Whole-frame batches end on block boundaries, so draining the FIFOs is plain concatenation.
        return np.stack(
            [_transform_path(symbols[:, k], bob) for k, bob in enumerate(self.scenario.bobs)], axis=-1
        )

    def recover(self, receiver: Receiver, samples: np.ndarray) -> np.ndarray:
        if not receiver.with_key:
            return samples[:, 0]
        profile = self.scenario.bobs[receiver.target_k]
        blocks = samples[:, 0].reshape(-1, profile.block_len)
        return inde_bob_decode(blocks, profile, alpha_offset=self.alpha_mismatch).reshape(-1)
