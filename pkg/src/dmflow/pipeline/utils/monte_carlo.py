#!/usr/bin/env python
"""
Deterministic Monte Carlo engine for bit error rates.

Every trial draws from its own stream keyed on ``(seed, experiment, scheme, *sweep_key,
trial)``. Trials run in waves of fixed size; the stopping rule is only checked between
waves, and counts are integer sums, so the result does not depend on the number of
worker threads or on the order in which trials finish.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from dmflow.scenarios.results import binomial_ci95
from dmflow.utils.data_utils import make_rng

logger = logging.getLogger(__name__)

TrialFn = Callable[[np.random.Generator, int], dict]


@dataclass
class BerCounter:
    errors: int = 0
    bits: int = 0

    def add(self, errors: int, bits: int):
        self.errors += int(errors)
        self.bits += int(bits)

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits else float("nan")

    @property
    def ci95(self) -> float:
        return binomial_ci95(self.errors, self.bits)


@dataclass
class PointResult:
    """Counts of one sweep point, per receiver metric key."""

    counters: dict[str, BerCounter] = field(default_factory=dict)
    channel_uses: int = 0
    trials: int = 0
    adaptive: bool = True
    min_errors: int = 0

    def converged(self, key: str) -> bool:
        """Fixed-budget points are measurements, never flagged; adaptive ones need ``min_errors``."""
        if not self.adaptive:
            return True
        return self.counters[key].errors >= self.min_errors


class MonteCarloEngine:
    """
    Parameters
    ------------
    seed : int
    experiment : str
    min_symbols, min_errors, max_symbols : int
        Adaptive stopping: run until ``min_symbols`` channel uses and ``min_errors``
        bit errors at every receiver, or until ``max_symbols``.
    trial_uses : int
        Channel uses per trial.
    num_threads : int
    wave_size : int
        Trials between two stopping checks.
    """

    def __init__(
        self,
        seed: int,
        experiment: str,
        min_symbols: int = 100_000,
        min_errors: int = 100,
        max_symbols: int = 30_000_000,
        trial_uses: int = 12_000,
        num_threads: int = 1,
        wave_size: int = 8,
    ):
        if trial_uses < 1 or wave_size < 1 or num_threads < 1:
            raise ValueError("trial_uses, wave_size and num_threads must all be positive")
        self.seed = seed
        self.experiment = experiment
        self.min_symbols = min_symbols
        self.min_errors = min_errors
        self.max_symbols = max_symbols
        self.trial_uses = trial_uses
        self.num_threads = num_threads
        self.wave_size = wave_size

    def _run_wave(self, trial_fn: TrialFn, keys: tuple, trials: Sequence[int], n_uses: int) -> list[dict]:
        def run_one(trial: int) -> dict:
            return trial_fn(make_rng(self.seed, self.experiment, *keys, trial), n_uses)

        if self.num_threads == 1 or len(trials) == 1:
            return [run_one(trial) for trial in trials]
        with ThreadPoolExecutor(max_workers=min(self.num_threads, len(trials))) as pool:
            return list(pool.map(run_one, trials))

    def run_point(
        self,
        scheme: str,
        sweep_key: tuple,
        trial_fn: TrialFn,
        fixed_symbols: Optional[int] = None,
    ) -> PointResult:
        """
        Simulate one sweep point.

        Parameters
        ------------
        scheme : str
        sweep_key : tuple of int or str
            Identifies the point within the experiment, e.g. ``(snr_index,)``.
        trial_fn : callable
            ``trial_fn(rng, n_uses) -> {metric_key: (errors, bits)}``.
        fixed_symbols : int, optional
            Run exactly ``ceil(fixed_symbols / trial_uses)`` trials instead of stopping
            adaptively.
        """
        keys = (scheme, *sweep_key)
        result = PointResult(adaptive=fixed_symbols is None, min_errors=self.min_errors)
        n_trials_fixed = None if fixed_symbols is None else max(1, -(-fixed_symbols // self.trial_uses))

        while True:
            stop = result.trials + self.wave_size
            if n_trials_fixed is not None:
                stop = min(stop, n_trials_fixed)
            for counts in self._run_wave(trial_fn, keys, range(result.trials, stop), self.trial_uses):
                for key, (errors, bits) in counts.items():
                    result.counters.setdefault(key, BerCounter()).add(errors, bits)
            result.channel_uses += (stop - result.trials) * self.trial_uses
            result.trials = stop

            if n_trials_fixed is not None:
                if result.trials >= n_trials_fixed:
                    break
                continue
            enough_errors = all(c.errors >= self.min_errors for c in result.counters.values())
            if result.channel_uses >= self.min_symbols and enough_errors:
                break
            if result.channel_uses >= self.max_symbols:
                lagging = sorted(k for k, c in result.counters.items() if c.errors < self.min_errors)
                logger.warning(
                    f"{self.experiment}/{scheme} point {sweep_key} hit the {self.max_symbols} channel-use cap; "
                    f"not converged: {', '.join(lagging)}"
                )
                break
        return result


def snr_at_ber(
    snr_db: Sequence[float], ber: Sequence[float], target: float, floor: Union[float, Sequence[float]] = 0.0
) -> float:
    """
    SNR where the piecewise-linear ``log10(BER)`` curve first drops to ``target``.

    Zero BERs are raised to ``floor`` (e.g. half an error over the compared bits) so the
    last segment can still be interpolated. Returns ``inf`` if the curve never reaches
    the target on the grid and ``nan`` if it already starts below it.
    """
    snr_db = np.asarray(snr_db, dtype=float)
    ber = np.maximum(np.asarray(ber, dtype=float), np.broadcast_to(np.asarray(floor, dtype=float), len(snr_db)))
    if snr_db.size == 0 or snr_db.shape != ber.shape:
        raise ValueError("snr_db and ber must be non-empty and of equal length")
    if ber[0] <= target:
        logger.warning(f"BER {ber[0]:.3g} at {snr_db[0]} dB is already below {target}")
        return float("nan")
    with np.errstate(divide="ignore"):
        log_ber = np.log10(ber)
    log_target = np.log10(target)
    for i in range(len(snr_db) - 1):
        if log_ber[i] > log_target >= log_ber[i + 1]:
            if not np.isfinite(log_ber[i + 1]):
                return float(snr_db[i + 1])
            fraction = (log_ber[i] - log_target) / (log_ber[i] - log_ber[i + 1])
            return float(snr_db[i] + fraction * (snr_db[i + 1] - snr_db[i]))
    return float("inf")
