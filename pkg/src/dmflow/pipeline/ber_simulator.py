#!/usr/bin/env python
"""
BerSimulator runs the ``ber_vs_snr`` experiment: for every scheme and SNR point it
simulates the Bobs, every Eve against every Bob and, with ``--leaked_eves``, every Eve
decoding with the targeted Bob's leaked parameters. Each Bob also gets its closed-form
AWGN curves for comparison.
"""

import logging
from typing import Sequence

from dmflow.args import ExperimentSpec
from dmflow.metrics import awgn_ber_mpsk, theoretical_ber_mpsk
from dmflow.models.base_scheme import BaseScheme, Receiver
from dmflow.pipeline.base_experiment import BaseExperiment
from dmflow.scenarios.results import ResultRow
from dmflow.utils.constants import AN_DM, WFRFT_SCHEMES

logger = logging.getLogger(__name__)

SNR_PARAM = "snr_db"


def make_trial(scheme: BaseScheme, receivers: Sequence[Receiver]):
    """Trial function of the Monte Carlo engine for one scheme and receiver set."""

    def trial(rng, n_uses):
        return scheme.simulate(receivers, n_uses, rng)

    return trial


class BerSimulator(BaseExperiment):
    """
    Parameters
    ------------
    spec : ExperimentSpec
        Uses ``snr_grid_db`` and ``leaked_eves`` from the run options.
    """

    def __init__(self, spec: ExperimentSpec):
        super().__init__(spec)
        self.snr_grid_db = list(self.args.snr_grid_db)

    def receivers(self, scheme: BaseScheme) -> list[Receiver]:
        receivers = scheme.bob_receivers() + scheme.eve_receivers()
        if self.args.leaked_eves and scheme.name in WFRFT_SCHEMES:
            receivers += scheme.eve_receivers(leaked=True)
        return receivers

    def theory_rows(self, scheme_name: str, snr_db: float, gamma: float) -> list[ResultRow]:
        rows = []
        if scheme_name == AN_DM:
            gamma = self.scenario.an_baseline.beta1**2 * gamma
        for k, bob in enumerate(self.scenario.bobs):
            m = bob.alphabet.m
            param = (SNR_PARAM, snr_db)
            rows.append(self.row(scheme_name, f"ber_theory.bob{k + 1}", float(theoretical_ber_mpsk(gamma, m)), param))
            rows.append(self.row(scheme_name, f"ber_awgn.bob{k + 1}", float(awgn_ber_mpsk(gamma, m)), param))
        return rows

    def run(self) -> list[ResultRow]:
        self.banner()
        rows = []
        for scheme_name in self.spec.schemes:
            for i, snr_db in enumerate(self.progress(self.snr_grid_db, desc=f"{scheme_name} BER")):
                scenario = self.scenario.with_snr_db(snr_db)
                scheme = self.make_scheme(scheme_name, scenario)
                result = self.engine.run_point(scheme_name, (i,), make_trial(scheme, self.receivers(scheme)))
                rows += self.ber_rows(scheme_name, result, (SNR_PARAM, snr_db))
                rows += self.theory_rows(scheme_name, snr_db, scenario.snr)
                logger.debug(f"{scheme_name} at {snr_db} dB: {result.channel_uses} channel uses")
        return rows


def run_ber_vs_snr(spec: ExperimentSpec) -> list[ResultRow]:
    return BerSimulator(spec).run()
