#!/usr/bin/env python
"""
AN-DM baseline: plain zero forcing with ``beta1`` of the signal amplitude, plus unit-norm
artificial noise in the null space of all Bob steering vectors.
"""

import logging

import numpy as np
from scipy.linalg import null_space

from dmflow.dsp.channel import awgn
from dmflow.dsp.precoding import transmit_an_baseline
from dmflow.models.base_scheme import BaseScheme, Receiver, Transmission
from dmflow.utils.constants import AN_DM
from dmflow.utils.errors import DegenerateBaselineError

logger = logging.getLogger(__name__)


class AnDmScheme(BaseScheme):
    """
    The artificial noise seen by ``R`` receivers is sampled in the receiver domain.

    With ``B`` an orthonormal basis of the null space and ``c`` isotropic Gaussian,
    ``h_r^H w = a_r^H c / ||c||`` with ``a_r = B^H h_r``. Only the component of ``c`` in
    ``span(a_1..a_R)`` reaches a receiver; the rest only enters ``||c||`` and is drawn as
    its Gamma-distributed squared norm.
    """

    name = AN_DM

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if self.precoder.n_users >= self.precoder.dimension:
            raise DegenerateBaselineError(
                f"{self.precoder.n_users} Bobs fill the whole {self.precoder.dimension}-dimensional array space; "
                "AN-DM has no room for artificial noise"
            )
        self._basis = null_space(self.precoder.h_matrix.conj().T)

    @property
    def beta1(self) -> float:
        return self.scenario.an_baseline.beta1

    def encode(self, symbols: np.ndarray) -> np.ndarray:
        return self.beta1 * symbols

    def recover(self, receiver: Receiver, samples: np.ndarray) -> np.ndarray:
        # No key exists; every receiver decides on its own samples.
        return samples[:, 0]

    def transmit_full(self, symbols: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Full radiated vectors, AN included, for ``(n_uses, K)`` symbols."""
        return transmit_an_baseline(self.precoder, symbols, self.scenario.ps, self.scenario.an_baseline, rng)

    def artificial_noise(self, steering: np.ndarray, n_uses: int, rng: np.random.Generator) -> np.ndarray:
        """``(n_uses, R)`` samples of ``h_r^H w`` for the columns of ``steering``."""
        a = self._basis.conj().T @ steering
        null_dim = a.shape[0]
        _, r = np.linalg.qr(a, mode="reduced")
        rank = r.shape[0]
        c = (rng.standard_normal((n_uses, rank)) + 1j * rng.standard_normal((n_uses, rank))) / np.sqrt(2.0)
        norm_sq = np.sum(np.abs(c) ** 2, axis=-1)
        if null_dim > rank:
            norm_sq = norm_sq + rng.gamma(shape=null_dim - rank, scale=1.0, size=n_uses)
        return (c @ r.conj()) / np.sqrt(norm_sq)[:, None]

    def observe(self, transmission: Transmission, steering: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        ps = self.scenario.ps
        clean = np.sqrt(ps) * (transmission.stream @ self.leakage(steering))
        n_uses = transmission.stream.shape[0]
        clean = clean + np.sqrt((1.0 - self.beta1**2) * ps) * self.artificial_noise(steering, n_uses, rng)
        return awgn(clean, self.scenario.noise_var, rng)
