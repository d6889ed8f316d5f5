#!/usr/bin/env python
"""This script defines dataclasses: ExperimentArguments and MonteCarloArguments,
that contain the run-level options of an experiment and of its Monte Carlo engine.

Scenario physics (array, Bobs, Eves, powers) lives in the scenario file, see
:mod:`dmflow.scenarios.scenario`. The arguments here only choose what is swept and
how long each point is simulated. Comma-separated list options are kept as strings on
the command line and split in ``__post_init__``.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from dmflow.scenarios.scenario import Scenario
from dmflow.utils.constants import (
    EXPERIMENTS,
    PROBE_MODES,
    ROBUSTNESS_ALPHA,
    ROBUSTNESS_LOCATION,
    SCHEMES,
    WITH_KEY,
)
from dmflow.utils.data_utils import parse_float_list, parse_linspace, parse_offset_pairs

logger = logging.getLogger(__name__)

MIN_SYMBOLS_FLOOR = 10_000
MIN_ERRORS_FLOOR = 50


@dataclass
class ExperimentArguments:
    """
    Define a class ExperimentArguments using the dataclass decorator.

    config : str, optional
        Scenario YAML file. The default scenario is used when omitted.

    seed : int
        Master seed of every random stream.

    out : str
        Result CSV path; run metadata goes to ``<out>.meta.json``.

    scheme : str, optional
        Restrict the run to one scheme, choice from ["wfrft_coop", "wfrft_inde", "an_dm"].

    probe : str
        Whether map probes apply the targeted Bob's inverse WFRFT, choice from
        ["with_key", "without_key"].

    threads : int
        Monte Carlo worker threads, 0 reads ``DMFLOW_NUM_THREADS`` (default 1).
    """

    config: Optional[str] = field(default=None, metadata={"help": "Path of the scenario YAML file."})
    seed: int = field(default=0, metadata={"help": "Master seed, any non-negative 64-bit integer."})
    out: str = field(default="results.csv", metadata={"help": "Output CSV path."})
    scheme: Optional[str] = field(
        default=None,
        metadata={"help": "Run a single scheme instead of all of them.", "choices": list(SCHEMES)},
    )
    probe: str = field(
        default=WITH_KEY,
        metadata={"help": "Probe receiver mode for BER maps.", "choices": list(PROBE_MODES)},
    )
    threads: int = field(default=0, metadata={"help": "Worker threads; 0 falls back to DMFLOW_NUM_THREADS."})
    snr_grid_db: str = field(default="0,2,4,6,8,10", metadata={"help": "Comma-separated SNR grid in dB."})
    robustness_snr_grid_db: str = field(
        default="4,5,6,7,8,9,10,11,12,13,14",
        metadata={"help": "SNR grid of the robustness curves, in dB."},
    )
    map_snr_db: float = field(default=10.0, metadata={"help": "SNR of BER and secrecy maps, in dB."})
    angle_grid_deg: str = field(
        default="-90,90,721", metadata={"help": "Angle sweep as 'start,stop,num' in degrees."}
    )
    range_grid_km: str = field(default="100,300,200", metadata={"help": "Range sweep as 'start,stop,num' in km."})
    leaked_eves: bool = field(
        default=False,
        metadata={"help": "Also let every Eve decode with the leaked parameters of the targeted Bob."},
    )
    beta1_grid: str = field(
        default="0.9,0.7,0.5",
        metadata={"help": "AN-DM signal amplitude splits compared in secrecy and power runs."},
    )
    eve_sets: str = field(
        default="scenario,random9",
        metadata={"help": "Eve sets of the secrecy sweep: 'scenario', 'reference', 'random9', 'reference+random9'."},
    )
    target_ber: float = field(default=1e-3, metadata={"help": "BER at which robustness penalties are read."})
    robustness_bob: int = field(default=2, metadata={"help": "1-based Bob whose curve the robustness runs measure."})
    location_offsets: str = field(
        default="0:0,0:2,1:0,1:2",
        metadata={"help": "Precoder location errors 'dR_km:dtheta_deg', comma-separated."},
    )
    alpha_offsets: str = field(
        default="0,0.01,0.02,0.05",
        metadata={"help": "WFRFT order errors for the single-parameter transform."},
    )
    alpha_offsets_multi: str = field(
        default="0,0.0001,0.0002,0.0004",
        metadata={"help": "WFRFT order errors for the multi-parameter transform."},
    )
    target_rates: str = field(
        default="0.5,1,1.5,2,2.5,3,3.5,4",
        metadata={"help": "Bob rates in bits/s/Hz of the power_vs_rate experiment."},
    )
    disable_tqdm: bool = field(default=False, metadata={"help": "Hide sweep progress bars."})
    log_level: str = field(
        default="info",
        metadata={"help": "Logging level.", "choices": ["debug", "info", "warning", "error"]},
    )

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.scheme is not None and self.scheme not in SCHEMES:
            raise ValueError(f'Scheme "{self.scheme}" is not supported, choose from {SCHEMES}')
        if self.probe not in PROBE_MODES:
            raise ValueError(f'Probe mode "{self.probe}" is not supported, choose from {PROBE_MODES}')
        if self.threads < 0:
            logger.warning(f"threads={self.threads} is negative. Setting threads to 0.")
            self.threads = 0
        if not 0 < self.target_ber < 0.5:
            raise ValueError(f"target_ber must lie in (0, 0.5), got {self.target_ber}")

        self.snr_grid_db = parse_float_list(self.snr_grid_db)
        self.robustness_snr_grid_db = parse_float_list(self.robustness_snr_grid_db)
        self.angle_grid_deg = parse_linspace(self.angle_grid_deg)
        self.range_grid_km = parse_linspace(self.range_grid_km)
        self.beta1_grid = parse_float_list(self.beta1_grid)
        self.eve_sets = split_args(self.eve_sets)
        self.location_offsets = parse_offset_pairs(self.location_offsets)
        self.alpha_offsets = parse_float_list(self.alpha_offsets)
        self.alpha_offsets_multi = parse_float_list(self.alpha_offsets_multi)
        self.target_rates = parse_float_list(self.target_rates)
        if not self.snr_grid_db:
            raise ValueError("snr_grid_db must hold at least one value")
        if any(not 0 < beta < 1 for beta in self.beta1_grid):
            raise ValueError(f"Every beta1 must lie strictly between 0 and 1, got {self.beta1_grid}")


@dataclass
class MonteCarloArguments:
    """
    Define a class MonteCarloArguments using the dataclass decorator.

    min_symbols : int
        Channel uses simulated at every BER point before the error target is checked.

    min_errors : int
        Bit errors every receiver needs for a point to count as converged.

    max_symbols : int
        Cap per point; a point that hits it without enough errors is reported as not
        converged.

    trial_uses : int
        Channel uses per trial. Must be a multiple of the lcm of the Bobs' block lengths
        for the independent scheme.

    map_symbols : int
        Fixed channel uses per location of BER maps and per point of robustness curves.

    wave_size : int
        Trials launched between two convergence checks. Independent of the thread
        count so results do not depend on it.
    """

    min_symbols: int = field(default=100_000, metadata={"help": "Minimum channel uses per BER point."})
    min_errors: int = field(default=100, metadata={"help": "Bit errors needed for a converged BER point."})
    max_symbols: int = field(default=30_000_000, metadata={"help": "Channel-use cap per BER point."})
    trial_uses: int = field(default=12_000, metadata={"help": "Channel uses per Monte Carlo trial."})
    map_symbols: int = field(default=12_000, metadata={"help": "Channel uses per map location."})
    robustness_symbols: int = field(default=1_200_000, metadata={"help": "Channel uses per robustness point."})
    wave_size: int = field(default=8, metadata={"help": "Trials per convergence check."})

    def __post_init__(self):
        if self.min_symbols < MIN_SYMBOLS_FLOOR:
            raise ValueError(f"min_symbols must be at least {MIN_SYMBOLS_FLOOR}, got {self.min_symbols}")
        if self.min_errors < MIN_ERRORS_FLOOR:
            logger.warning(f"min_errors={self.min_errors} is below {MIN_ERRORS_FLOOR}. Setting min_errors to 50.")
            self.min_errors = MIN_ERRORS_FLOOR
        if self.max_symbols < self.min_symbols:
            logger.warning(
                f"max_symbols={self.max_symbols} is below min_symbols. Setting max_symbols to {self.min_symbols}."
            )
            self.max_symbols = self.min_symbols
        for name in ("trial_uses", "map_symbols", "robustness_symbols", "wave_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass
class ExperimentSpec:
    """An experiment name with its scenario and run options."""

    experiment: str
    scenario: Scenario
    arguments: ExperimentArguments = field(default_factory=ExperimentArguments)
    monte_carlo: MonteCarloArguments = field(default_factory=MonteCarloArguments)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise NotImplementedError(f'Experiment "{self.experiment}" is not supported')
        robustness = self.experiment in (ROBUSTNESS_LOCATION, ROBUSTNESS_ALPHA)
        if robustness and not 1 <= self.arguments.robustness_bob <= self.scenario.n_bobs:
            raise ValueError(
                f"robustness_bob must lie in [1, {self.scenario.n_bobs}], got {self.arguments.robustness_bob}"
            )

    @property
    def schemes(self) -> tuple[str, ...]:
        return SCHEMES if self.arguments.scheme is None else (self.arguments.scheme,)

    @property
    def seed(self) -> int:
        return self.arguments.seed

    @property
    def probe_mode(self) -> str:
        return self.arguments.probe


def split_args(args):
    return [elem.strip() for elem in args.split(",")] if isinstance(args, str) else args
