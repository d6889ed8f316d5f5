#!/usr/bin/env python
"""
BaseExperiment: shared plumbing of every experiment pipeline.

An experiment holds an :class:`~dmflow.args.ExperimentSpec`, builds its schemes through
:class:`~dmflow.models.auto_scheme.AutoScheme`, runs Monte Carlo points through one
:class:`~dmflow.pipeline.utils.monte_carlo.MonteCarloEngine` and returns a list of
:class:`~dmflow.scenarios.results.ResultRow`.
"""

import logging
from abc import abstractmethod
from typing import Iterable, Optional

from tqdm import tqdm

from dmflow.args import ExperimentSpec
from dmflow.models.auto_scheme import AutoScheme
from dmflow.models.base_scheme import BaseScheme
from dmflow.pipeline.base_pipeline import BasePipeline
from dmflow.pipeline.utils.monte_carlo import MonteCarloEngine, PointResult
from dmflow.scenarios.results import ResultRow
from dmflow.scenarios.scenario import Scenario
from dmflow.utils.common import print_banner
from dmflow.utils.envs import get_num_threads

logger = logging.getLogger(__name__)


class BaseExperiment(BasePipeline):
    """
    Parameters
    ------------
    spec : ExperimentSpec
        Experiment name, scenario and run options.
    """

    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.scenario: Scenario = spec.scenario
        self.args = spec.arguments
        self.mc_args = spec.monte_carlo
        self.experiment = spec.experiment

        trial_uses = self._round_to_frame(self.mc_args.trial_uses, "trial_uses")
        self.engine = MonteCarloEngine(
            seed=spec.seed,
            experiment=self.experiment,
            min_symbols=self.mc_args.min_symbols,
            min_errors=self.mc_args.min_errors,
            max_symbols=self.mc_args.max_symbols,
            trial_uses=trial_uses,
            num_threads=get_num_threads(self.args.threads),
            wave_size=self.mc_args.wave_size,
        )

    def _round_to_frame(self, n_uses: int, name: str) -> int:
        """Round a per-trial channel-use count up to whole frames of every scheme."""
        frame = self.scenario.block_lcm
        if n_uses % frame == 0:
            return n_uses
        rounded = -(-n_uses // frame) * frame
        logger.warning(f"{name}={n_uses} is not a multiple of the block lcm {frame}. Setting {name} to {rounded}.")
        return rounded

    def make_scheme(self, scheme_name: str, scenario: Optional[Scenario] = None, **kwargs) -> BaseScheme:
        return AutoScheme.get_scheme(scheme_name, self.scenario if scenario is None else scenario, **kwargs)

    def progress(self, iterable: Iterable, desc: str, unit: str = "point"):
        return tqdm(iterable, desc=desc, unit=unit, disable=self.args.disable_tqdm)

    def row(
        self,
        scheme: str,
        metric: str,
        value: float,
        param1: tuple = (None, None),
        param2: tuple = (None, None),
        n: int = 0,
        ci95: float = 0.0,
        converged: bool = True,
    ) -> ResultRow:
        return ResultRow(
            experiment=self.experiment,
            scheme=scheme,
            param1_name=param1[0],
            param1=param1[1],
            param2_name=param2[0],
            param2=param2[1],
            metric=metric,
            value=value,
            n=n,
            ci95=ci95,
            converged=converged,
        )

    def ber_rows(
        self,
        scheme: str,
        result: PointResult,
        param1: tuple,
        param2: tuple = (None, None),
        rename: Optional[dict] = None,
        qualifier: str = "",
    ) -> list[ResultRow]:
        """
        BER rows of a Monte Carlo point, with the bit error counts next to them.

        ``rename`` maps engine metric keys to the receiver part of the metric name;
        ``qualifier`` is appended as ``@qualifier``. Adaptive points also report
        ``converged.<receiver>``.
        """
        suffix = f"@{qualifier}" if qualifier else ""
        rows = []
        for key in sorted(result.counters):
            counter = result.counters[key]
            name = rename.get(key, key) if rename else key
            converged = result.converged(key)
            rows.append(
                self.row(
                    scheme, f"ber.{name}{suffix}", counter.ber, param1, param2, counter.bits, counter.ci95, converged
                )
            )
            rows.append(
                self.row(scheme, f"bit_errors.{name}{suffix}", counter.errors, param1, param2, counter.bits)
            )
            if result.adaptive:
                rows.append(self.row(scheme, f"converged.{name}{suffix}", int(converged), param1, param2))
        return rows

    def banner(self):
        print_banner(f"{self.experiment} (seed {self.spec.seed}, schemes {', '.join(self.spec.schemes)})")

    @abstractmethod
    def run(self) -> list[ResultRow]:
        """Run the experiment and return its result rows."""
        raise NotImplementedError(".run is not implemented")
