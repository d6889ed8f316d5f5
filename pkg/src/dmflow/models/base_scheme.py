#!/usr/bin/env python
"""
BaseScheme: one transmission scheme (cooperative WFRFT-DM, independent WFRFT-DM or
AN-DM) run end to end for a batch of channel uses.

Observations are computed in the receiver domain: for a receiver with steering vector
``h``, ``h^H x = sqrt(Ps) rho^T u`` where ``rho = P^T h*`` and ``u`` is the ``K``-stream
fed to the precoder. This is the same quantity the radiated vector produces, without
forming the ``(2N+1)L``-long vector for every channel use.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from dmflow.dsp.channel import awgn
from dmflow.dsp.fda import Location, steering_matrix, steering_matrix_from_arrays
from dmflow.dsp.precoding import Precoder, build_precoder, transmit_cooperative
from dmflow.dsp.psk import count_bit_errors, demap_ml, map_bits, random_bits
from dmflow.scenarios.scenario import Scenario
from dmflow.utils.errors import FramingError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Receiver:
    """
    A receiver whose bit errors are counted.

    Parameters
    ------------
    name : str
        Metric stem, e.g. ``bob2``, ``eve1``, ``eve2_leaked``, ``probe``.
    location : Location
    target_k : int
        0-based index of the Bob whose bits this receiver tries to recover.
    with_key : bool
        Whether it applies the target Bob's inverse WFRFT.
    is_bob : bool
        The legitimate Bob ``target_k`` itself.
    with_peers : bool
        A keyed stand-in for the whole receiving side: where the scheme decodes jointly,
        it brings the other receivers along, placed as the Bobs are placed around
        ``target_k``.
    """

    name: str
    location: Location
    target_k: int
    with_key: bool = False
    is_bob: bool = False
    with_peers: bool = False

    @property
    def metric_key(self) -> str:
        """``bob2`` for a Bob, ``eve1.bob1`` for anyone else."""
        if self.is_bob:
            return self.name
        return f"{self.name}.bob{self.target_k + 1}"


@dataclass
class Transmission:
    """Bits and streams of one batch of channel uses."""

    bits: list[np.ndarray]
    symbols: np.ndarray
    stream: np.ndarray


class BaseScheme(ABC):
    """
    Parameters
    ------------
    scenario : Scenario

    alpha_mismatch : float
        Order error of every receiver that applies an inverse WFRFT, ``0`` when ideal.

    precoder_locations : list of Location, optional
        Bob locations the precoder is built from; the true ones when omitted. The
        chains always propagate to the true locations.
    """

    name = "base"

    def __init__(
        self,
        scenario: Scenario,
        alpha_mismatch: float = 0.0,
        precoder_locations: Optional[Sequence[Location]] = None,
    ):
        self.scenario = scenario
        self.alpha_mismatch = float(alpha_mismatch)
        if precoder_locations is None:
            self.precoder: Precoder = scenario.precoder
        else:
            if len(precoder_locations) != scenario.n_bobs:
                raise ValueError(f"Need {scenario.n_bobs} precoder locations, got {len(precoder_locations)}")
            self.precoder = build_precoder(steering_matrix(scenario.fda, precoder_locations), scenario.cond_limit)

    @property
    def n_bobs(self) -> int:
        return self.scenario.n_bobs

    @property
    def frame_len(self) -> int:
        """Channel uses per simulated batch must be a multiple of this."""
        return 1

    # Receivers

    def bob_receivers(self) -> list[Receiver]:
        return [
            Receiver(name=f"bob{k + 1}", location=bob.location, target_k=k, with_key=True, is_bob=True)
            for k, bob in enumerate(self.scenario.bobs)
        ]

    def eve_receivers(self, leaked: bool = False, targets: Optional[Sequence[int]] = None) -> list[Receiver]:
        """Every Eve against every target Bob, optionally holding the leaked parameters."""
        targets = range(self.n_bobs) if targets is None else targets
        suffix = "_leaked" if leaked else ""
        return [
            Receiver(name=f"eve{v + 1}{suffix}", location=eve, target_k=k, with_key=leaked)
            for v, eve in enumerate(self.scenario.eves)
            for k in targets
        ]

    # Chain

    def draw(self, n_uses: int, rng: np.random.Generator) -> Transmission:
        """Draw uniform bits for every Bob, map them and encode the streams."""
        if n_uses < 1 or n_uses % self.frame_len:
            raise FramingError(f"{n_uses} channel uses is not a positive multiple of {self.frame_len}")
        bits = [random_bits(n_uses, bob.alphabet, rng) for bob in self.scenario.bobs]
        symbols = np.stack([map_bits(b, bob.alphabet) for b, bob in zip(bits, self.scenario.bobs)], axis=-1)
        return Transmission(bits=bits, symbols=symbols, stream=self.encode(symbols))

    @abstractmethod
    def encode(self, symbols: np.ndarray) -> np.ndarray:
        """``(n_uses, K)`` symbols to the ``(n_uses, K)`` stream fed to the precoder."""
        raise NotImplementedError(".encode is not implemented")

    @abstractmethod
    def recover(self, receiver: Receiver, samples: np.ndarray) -> np.ndarray:
        """Symbol estimates of ``receiver`` from the ``(n_uses, S)`` samples at its :meth:`sites`."""
        raise NotImplementedError(".recover is not implemented")

    def sites(self, receiver: Receiver) -> list[tuple[tuple, Location]]:
        """
        Keyed locations whose samples ``receiver`` decodes from, in the order
        :meth:`recover` reads them. Receivers sharing a key share one noisy observation.
        """
        if receiver.is_bob:
            return [(("bob", receiver.target_k), receiver.location)]
        return [((receiver.name, receiver.location), receiver.location)]

    def transmit(self, stream: np.ndarray) -> np.ndarray:
        """Radiated vectors ``(n_uses, (2N+1)L)`` for a stream."""
        return transmit_cooperative(self.precoder, stream, self.scenario.ps)

    def leakage(self, steering: np.ndarray) -> np.ndarray:
        """``K x R`` matrix ``P^T conj(H_r)`` for the columns of ``steering``."""
        return self.precoder.p_matrix.T @ np.conj(steering)

    def observe(self, transmission: Transmission, steering: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Noisy ``(n_uses, R)`` observations at the locations whose steering vectors are the columns."""
        clean = np.sqrt(self.scenario.ps) * (transmission.stream @ self.leakage(steering))
        return awgn(clean, self.scenario.noise_var, rng)

    def simulate(self, receivers: Sequence[Receiver], n_uses: int, rng: np.random.Generator) -> dict:
        """
        Run ``n_uses`` channel uses and count bit errors.

        Returns
        ------------
        dict
            ``{receiver.metric_key: (bit_errors, compared_bits)}``.
        """
        transmission = self.draw(n_uses, rng)
        # Every physical site gets its own noise; an Eve decoding several targets reuses one column.
        sites, receiver_keys = {}, []
        for receiver in receivers:
            own = self.sites(receiver)
            for key, location in own:
                sites.setdefault(key, location)
            receiver_keys.append([key for key, _ in own])
        column = {key: i for i, key in enumerate(sites)}
        steering = steering_matrix_from_arrays(
            self.scenario.fda, [loc.range_m for loc in sites.values()], [loc.angle_rad for loc in sites.values()]
        )
        samples = self.observe(transmission, steering, rng)

        counts = {}
        for receiver, keys in zip(receivers, receiver_keys):
            estimate = self.recover(receiver, samples[:, [column[key] for key in keys]])
            alphabet = self.scenario.bobs[receiver.target_k].alphabet
            counts[receiver.metric_key] = count_bit_errors(
                transmission.bits[receiver.target_k], demap_ml(estimate, alphabet)
            )
        return counts
