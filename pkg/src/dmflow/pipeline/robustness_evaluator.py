#!/usr/bin/env python
"""
RobustnessEvaluator runs ``robustness_location`` and ``robustness_alpha``.

Location mode rebuilds the precoder from Bob locations that are off by ``(dR, dtheta)``
while the signals still travel to the true locations. Alpha mode lets every receiver
with the key invert with an order that is off by ``delta_alpha``, once with the
single-parameter and once with the multi-parameter WFRFT. Each case yields a BER curve
of one Bob over ``robustness_snr_grid_db``; its SNR penalty is read at ``target_ber``
against the ideal curve. All curves of a run share their random numbers per SNR point,
so a zero error reproduces the ideal curve exactly.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from dmflow.args import ExperimentSpec
from dmflow.dsp.fda import Location
from dmflow.dsp.wfrft import mismatch_residual
from dmflow.models.base_scheme import Receiver
from dmflow.pipeline.base_experiment import BaseExperiment
from dmflow.pipeline.ber_simulator import make_trial
from dmflow.pipeline.utils.monte_carlo import snr_at_ber
from dmflow.scenarios.results import ResultRow, binomial_ci95
from dmflow.scenarios.scenario import Scenario
from dmflow.utils.constants import ROBUSTNESS_ALPHA, ROBUSTNESS_LOCATION, WFRFT_COOP, WFRFT_SCHEMES

logger = logging.getLogger(__name__)

SINGLE_PARAMETER = "single_parameter"
MULTI_PARAMETER = "multi_parameter"


def _with_zero_first(offsets: Sequence, zero) -> list:
    offsets = list(offsets)
    if zero in offsets:
        offsets.remove(zero)
    return [zero] + offsets


class RobustnessEvaluator(BaseExperiment):
    """
    Parameters
    ------------
    spec : ExperimentSpec
        ``robustness_location`` or ``robustness_alpha``; uses ``robustness_bob``,
        ``robustness_snr_grid_db``, ``target_ber``, ``location_offsets``,
        ``alpha_offsets``, ``alpha_offsets_multi`` and ``robustness_symbols``.
    """

    def __init__(self, spec: ExperimentSpec):
        super().__init__(spec)
        if self.experiment not in (ROBUSTNESS_LOCATION, ROBUSTNESS_ALPHA):
            raise ValueError(f"RobustnessEvaluator runs {ROBUSTNESS_LOCATION} or {ROBUSTNESS_ALPHA}")
        self.bob_index = self.args.robustness_bob - 1
        self.snr_grid_db = list(self.args.robustness_snr_grid_db)
        self.n_symbols = self._round_to_frame(self.mc_args.robustness_symbols, "robustness_symbols")

    def ber_curve(
        self,
        scheme_name: str,
        scenario: Scenario,
        alpha_mismatch: float = 0.0,
        precoder_locations: Optional[list[Location]] = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Bit errors and compared bits of the measured Bob at every grid SNR."""
        errors, bits = [], []
        for j, snr_db in enumerate(self.snr_grid_db):
            scheme = self.make_scheme(
                scheme_name,
                scenario.with_snr_db(snr_db),
                alpha_mismatch=alpha_mismatch,
                precoder_locations=precoder_locations,
            )
            bob: Receiver = scheme.bob_receivers()[self.bob_index]
            result = self.engine.run_point(scheme_name, (j,), make_trial(scheme, [bob]), fixed_symbols=self.n_symbols)
            counter = result.counters[bob.metric_key]
            errors.append(counter.errors)
            bits.append(counter.bits)
        return np.array(errors), np.array(bits)

    def crossing(self, errors: np.ndarray, bits: np.ndarray) -> float:
        return snr_at_ber(self.snr_grid_db, errors / bits, self.args.target_ber, floor=0.5 / bits)

    def curve_rows(self, scheme_name: str, metric: str, errors, bits, param2: tuple) -> list[ResultRow]:
        rows = []
        for snr_db, e, n in zip(self.snr_grid_db, errors, bits):
            ci95 = binomial_ci95(int(e), int(n))
            rows.append(self.row(scheme_name, metric, e / n, ("snr_db", snr_db), param2, int(n), ci95))
        return rows

    def run_location(self, scheme_name: str) -> list[ResultRow]:
        bob = f"bob{self.bob_index + 1}"
        rows, ideal = [], None
        offsets = _with_zero_first(self.args.location_offsets, (0.0, 0.0))
        for i, (d_range_km, d_angle_deg) in enumerate(self.progress(offsets, desc=f"{scheme_name} offsets")):
            locations = None
            if (d_range_km, d_angle_deg) != (0.0, 0.0):
                locations = [
                    loc.offset(delta_range_m=d_range_km * 1e3, delta_angle_rad=np.deg2rad(d_angle_deg))
                    for loc in self.scenario.bob_locations
                ]
            errors, bits = self.ber_curve(scheme_name, self.scenario, precoder_locations=locations)
            rows += self.curve_rows(scheme_name, f"ber.{bob}", errors, bits, ("offset_index", i))
            crossing = self.crossing(errors, bits)
            ideal = crossing if ideal is None else ideal
            coords = (("delta_range_km", d_range_km), ("delta_angle_deg", d_angle_deg))
            rows.append(self.row(scheme_name, f"snr_at_target_db.{bob}", crossing, *coords))
            rows.append(self.row(scheme_name, f"snr_penalty_db.{bob}", crossing - ideal, *coords))
            logger.info(
                f"{scheme_name}: ({d_range_km} km, {d_angle_deg} deg) costs {crossing - ideal:.3f} dB "
                f"at BER {self.args.target_ber}"
            )
        return rows

    def run_alpha(self, scheme_name: str) -> list[ResultRow]:
        bob = f"bob{self.bob_index + 1}"
        variants = [
            (SINGLE_PARAMETER, self.scenario.single_parameter(), self.args.alpha_offsets),
            (MULTI_PARAMETER, self.scenario, self.args.alpha_offsets_multi),
        ]
        rows = []
        for variant, scenario, offsets in variants:
            if scheme_name == WFRFT_COOP:
                params, length = scenario.coop_wfrft, scenario.n_bobs
            else:
                profile = scenario.bobs[self.bob_index]
                params, length = profile.wfrft, profile.block_len
            if variant == MULTI_PARAMETER and params.is_single_parameter:
                logger.warning(f"{scheme_name} already uses the single-parameter WFRFT; both variants coincide")

            ideal = None
            for delta_alpha in self.progress(_with_zero_first(offsets, 0.0), desc=f"{scheme_name} {variant}"):
                errors, bits = self.ber_curve(scheme_name, scenario, alpha_mismatch=delta_alpha)
                rows += self.curve_rows(scheme_name, f"ber.{bob}@{variant}", errors, bits, ("delta_alpha", delta_alpha))
                crossing = self.crossing(errors, bits)
                ideal = crossing if ideal is None else ideal
                coords = (("delta_alpha", delta_alpha),)
                rows.append(self.row(scheme_name, f"snr_at_target_db.{bob}@{variant}", crossing, *coords))
                rows.append(self.row(scheme_name, f"snr_penalty_db.{bob}@{variant}", crossing - ideal, *coords))
                residual = mismatch_residual(params, delta_alpha, length)
                rows.append(self.row(scheme_name, f"mismatch_residual.{bob}@{variant}", residual, *coords))
        return rows

    def run(self) -> list[ResultRow]:
        self.banner()
        rows = []
        for scheme_name in self.spec.schemes:
            if self.experiment == ROBUSTNESS_LOCATION:
                rows += self.run_location(scheme_name)
            elif scheme_name in WFRFT_SCHEMES:
                rows += self.run_alpha(scheme_name)
            else:
                logger.info(f"{scheme_name} has no WFRFT order, skipping it in {ROBUSTNESS_ALPHA}")
        return rows


def run_robustness(spec: ExperimentSpec) -> list[ResultRow]:
    return RobustnessEvaluator(spec).run()
