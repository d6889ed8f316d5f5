#!/usr/bin/env python
"""SecrecyMapper runs ``secrecy_map``: the secrecy rate against a single Eve roaming over an angle x range grid."""

import logging

import numpy as np

from dmflow.args import ExperimentSpec
from dmflow.dsp.fda import steering_matrix, steering_matrix_from_arrays
from dmflow.pipeline.base_experiment import BaseExperiment
from dmflow.pipeline.secrecy_evaluator import bob_rates, eve_rates
from dmflow.scenarios.results import ResultRow
from dmflow.scenarios.scenario import Scenario, grid_locations
from dmflow.utils.constants import AN_DM

logger = logging.getLogger(__name__)

MAP_CHUNK = 4096


def single_eve_secrecy(bobs: np.ndarray, eves: np.ndarray) -> np.ndarray:
    """
    Secrecy rate against each of several lone Eves.

    With one Eve both secrecy formulas reduce to ``[max_k R_bob_k - R_eve]^+``, where
    ``R_eve`` is the Eve's best rate over the Bobs she can target.
    """
    best_eve = eves if eves.ndim == 1 else np.max(eves, axis=-1)
    return np.maximum(np.max(bobs) - best_eve, 0.0)


class SecrecyMapper(BaseExperiment):
    """
    Parameters
    ------------
    spec : ExperimentSpec
        Uses ``angle_grid_deg``, ``range_grid_km`` and ``map_snr_db``. AN-DM runs with
        the scenario's ``beta1``.
    """

    def secrecy_at(self, scenario: Scenario, scheme_name: str, ranges_m, angles_rad) -> np.ndarray:
        beta1 = scenario.an_baseline.beta1 if scheme_name == AN_DM else None
        bobs = bob_rates(scenario, scheme_name, beta1)
        secrecy = np.empty(len(ranges_m))
        for start in range(0, len(ranges_m), MAP_CHUNK):
            chunk = slice(start, start + MAP_CHUNK)
            steering = steering_matrix_from_arrays(scenario.fda, ranges_m[chunk], angles_rad[chunk])
            secrecy[chunk] = single_eve_secrecy(bobs, eve_rates(scenario, scheme_name, steering, beta1))
        return secrecy

    def run(self) -> list[ResultRow]:
        self.banner()
        scenario = self.scenario.with_snr_db(self.args.map_snr_db)
        ranges_m, angles_rad = grid_locations(self.args.range_grid_km, self.args.angle_grid_deg)
        angles_deg, ranges_km = np.rad2deg(angles_rad), ranges_m / 1e3
        rows = []
        for scheme_name in self.progress(self.spec.schemes, desc="secrecy map", unit="scheme"):
            secrecy = self.secrecy_at(scenario, scheme_name, ranges_m, angles_rad)
            for angle, range_km, value in zip(angles_deg, ranges_km, secrecy):
                rows.append(
                    self.row(scheme_name, "secrecy_rate", float(value), ("angle_deg", angle), ("range_km", range_km))
                )

            # Eve sitting exactly on each Bob, whether or not the grid hits him.
            beta1 = scenario.an_baseline.beta1 if scheme_name == AN_DM else None
            at_bobs = eve_rates(scenario, scheme_name, steering_matrix(scenario.fda, scenario.bob_locations), beta1)
            bobs = bob_rates(scenario, scheme_name, beta1)
            for k, (bob, value) in enumerate(zip(scenario.bobs, single_eve_secrecy(bobs, at_bobs))):
                coords = (("angle_deg", bob.location.angle_deg), ("range_km", bob.location.range_km))
                rows.append(self.row(scheme_name, f"secrecy_rate@bob{k + 1}", float(value), *coords))
                logger.info(f"{scheme_name}: secrecy rate with the Eve on Bob {k + 1} is {value:.4f} bits/s/Hz")
        return rows


def run_secrecy_map(spec: ExperimentSpec) -> list[ResultRow]:
    return SecrecyMapper(spec).run()
