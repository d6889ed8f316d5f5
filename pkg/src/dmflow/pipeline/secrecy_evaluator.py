#!/usr/bin/env python
"""
Closed-form rate experiments.

SecrecyEvaluator runs ``secrecy_vs_snr``: Bob and Eve achievable rates and the secrecy
rate of every scheme over the SNR grid, for each requested Eve set and, for AN-DM, each
``beta1`` of the grid. PowerRateEvaluator runs ``power_vs_rate``: the radiated power each
scheme needs to give every Bob a target rate.
"""

import logging
from typing import Optional

import numpy as np

from dmflow.args import ExperimentSpec
from dmflow.dsp.fda import Location, steering_matrix
from dmflow.dsp.wfrft import weights
from dmflow.metrics import (
    RateReport,
    achievable_rate,
    an_dm_bob_sinr,
    an_dm_eve_sinr,
    coop_bob_sinr,
    coop_eve_sinr_from_leakage,
    inde_eve_sinr,
    leakage_coefficients,
    linear_to_db,
    required_transmit_power,
)
from dmflow.pipeline.base_experiment import BaseExperiment
from dmflow.scenarios.results import ResultRow
from dmflow.scenarios.scenario import Scenario, eve_set_locations
from dmflow.utils.constants import AN_DM, WFRFT_COOP, WFRFT_INDE

logger = logging.getLogger(__name__)

SCENARIO_EVE_SET = "scenario"


def bob_rates(scenario: Scenario, scheme_name: str, beta1: Optional[float] = None) -> np.ndarray:
    """Achievable rate of every Bob; AN-DM Bobs only receive ``beta1^2`` of the power."""
    if scheme_name == AN_DM:
        sinr = an_dm_bob_sinr(scenario.ps, scenario.noise_var, beta1)
    else:
        sinr = coop_bob_sinr(scenario.ps, scenario.noise_var)
    return np.full(scenario.n_bobs, achievable_rate(sinr))


def eve_rates(scenario: Scenario, scheme_name: str, steering: np.ndarray, beta1: Optional[float] = None) -> np.ndarray:
    """
    Rates of the Eves whose steering vectors are the columns of ``steering``.

    Returns
    ------------
    numpy.ndarray
        ``(V,)`` for the cooperative scheme, where an Eve has a single rate, and
        ``(V, K)`` otherwise, one rate per targeted Bob.
    """
    pre = scenario.precoder
    ps, noise_var = scenario.ps, scenario.noise_var
    if scheme_name == WFRFT_COOP:
        rho = leakage_coefficients(pre, steering).T
        return achievable_rate(coop_eve_sinr_from_leakage(rho, weights(scenario.coop_wfrft), ps, noise_var))
    if scheme_name == WFRFT_INDE:
        rho = leakage_coefficients(pre, steering).T
        per_bob = [weights(bob.wfrft) for bob in scenario.bobs]
        sinr = [inde_eve_sinr(rho, per_bob, k, ps, noise_var) for k in range(scenario.n_bobs)]
    elif scheme_name == AN_DM:
        sinr = [an_dm_eve_sinr(pre, steering, beta1, k, ps, noise_var) for k in range(scenario.n_bobs)]
    else:
        raise NotImplementedError(f'Scheme "{scheme_name}" is not supported')
    return achievable_rate(np.stack([np.atleast_1d(s) for s in sinr], axis=-1))


def rate_report(scenario: Scenario, scheme_name: str, beta1: Optional[float] = None) -> RateReport:
    """Bob rates, Eve rates and secrecy rate of ``scenario.eves``."""
    if not scenario.eves:
        raise ValueError("Secrecy rate is undefined without at least one Eve")
    bobs = bob_rates(scenario, scheme_name, beta1)
    eves = eve_rates(scenario, scheme_name, steering_matrix(scenario.fda, scenario.eves), beta1)
    if scheme_name == WFRFT_COOP:
        return RateReport.from_cooperative(bobs, eves)
    # AN-DM Eves pick a target Bob just like in the independent scheme.
    return RateReport.from_independent(bobs, eves)


class SecrecyEvaluator(BaseExperiment):
    """
    Parameters
    ------------
    spec : ExperimentSpec
        Uses ``snr_grid_db``, ``eve_sets`` and ``beta1_grid``. The ``scenario`` Eve set
        is the scenario's own Eves, labelled with its ``eve_set``.
    """

    def eve_sets(self) -> list[tuple[str, list[Location]]]:
        sets, labels = [], set()
        for name in self.args.eve_sets:
            if name == SCENARIO_EVE_SET:
                label, eves = self.scenario.eve_set, list(self.scenario.eves)
            else:
                label, eves = name, eve_set_locations(name)
            if label in labels:
                continue
            if not eves:
                logger.warning(f'Eve set "{label}" is empty, skipping it')
                continue
            labels.add(label)
            sets.append((label, eves))
        return sets

    def beta_grid(self, scheme_name: str) -> list[Optional[float]]:
        return list(self.args.beta1_grid) if scheme_name == AN_DM else [None]

    def report_rows(self, scheme_name: str, report: RateReport, label: str, coords: tuple) -> list[ResultRow]:
        rows = []
        if report.eve_rates.ndim == 1:
            for v, rate in enumerate(report.eve_rates):
                rows.append(self.row(scheme_name, f"rate.eve{v + 1}@{label}", float(rate), *coords))
        else:
            for (v, k), rate in np.ndenumerate(report.eve_rates):
                rows.append(self.row(scheme_name, f"rate.eve{v + 1}.bob{k + 1}@{label}", float(rate), *coords))
        rows.append(self.row(scheme_name, f"secrecy_rate@{label}", report.secrecy_rate, *coords))
        return rows

    def run(self) -> list[ResultRow]:
        self.banner()
        eve_sets = self.eve_sets()
        if not eve_sets:
            raise ValueError("No non-empty Eve set to evaluate")
        rows = []
        for scheme_name in self.spec.schemes:
            for beta1 in self.beta_grid(scheme_name):
                for snr_db in self.progress(self.args.snr_grid_db, desc=f"{scheme_name} secrecy"):
                    scenario = self.scenario.with_snr_db(snr_db)
                    coords = (("snr_db", snr_db), ("beta1", beta1) if beta1 is not None else (None, None))
                    for k, rate in enumerate(bob_rates(scenario, scheme_name, beta1)):
                        rows.append(self.row(scheme_name, f"rate.bob{k + 1}", float(rate), *coords))
                    for label, eves in eve_sets:
                        report = rate_report(scenario.with_eves(eves, label), scheme_name, beta1)
                        rows += self.report_rows(scheme_name, report, label, coords)
        return rows


class PowerRateEvaluator(BaseExperiment):
    """
    Parameters
    ------------
    spec : ExperimentSpec
        Uses ``target_rates`` and, for AN-DM, ``beta1_grid``. The noise variance is the
        scenario's.
    """

    def run(self) -> list[ResultRow]:
        self.banner()
        epsilon = self.scenario.precoder.epsilon
        noise_var = self.scenario.noise_var
        rows = []
        for scheme_name in self.spec.schemes:
            betas = list(self.args.beta1_grid) if scheme_name == AN_DM else [None]
            for beta1 in betas:
                for rate in self.args.target_rates:
                    power = required_transmit_power(rate, noise_var, epsilon, beta1)
                    coords = (("rate", rate), ("beta1", beta1) if beta1 is not None else (None, None))
                    rows.append(self.row(scheme_name, "required_power", power, *coords))
                    power_db = float(linear_to_db(power)) if power > 0 else float("-inf")
                    rows.append(self.row(scheme_name, "required_power_db", power_db, *coords))
        return rows


def run_secrecy_vs_snr(spec: ExperimentSpec) -> list[ResultRow]:
    return SecrecyEvaluator(spec).run()


def run_power_vs_rate(spec: ExperimentSpec) -> list[ResultRow]:
    return PowerRateEvaluator(spec).run()
