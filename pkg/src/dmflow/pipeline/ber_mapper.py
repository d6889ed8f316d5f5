#!/usr/bin/env python
"""
BerMapper runs ``ber_vs_angle`` and ``ber_vs_range``: a probe receiver is moved through
each Bob's location, along the angle axis at the Bob's range or along the range axis
at the Bob's angle, and its BER for that Bob's bits is measured at ``map_snr_db``.

With ``--probe with_key`` the probe inverts the targeted Bob's WFRFT; for the
cooperative scheme it brings the other Bobs along, moved with it, and pools their
fresh observations. With ``without_key`` it decides on its raw samples. Angle sweeps
also report the width of the lobe around the Bob where the probe BER stays below
``LOBE_BER_THRESHOLD``.
"""

import logging

import numpy as np

from dmflow.args import ExperimentSpec
from dmflow.dsp.fda import Location
from dmflow.models.base_scheme import BaseScheme, Receiver
from dmflow.pipeline.base_experiment import BaseExperiment
from dmflow.pipeline.ber_simulator import make_trial
from dmflow.scenarios.results import ResultRow
from dmflow.utils.constants import BER_VS_ANGLE, BER_VS_RANGE, WITH_KEY
from dmflow.utils.data_utils import batchlize

logger = logging.getLogger(__name__)

PROBE_BATCH_SIZE = 64
LOBE_BER_THRESHOLD = 0.1


def lobe_width(axis_values, ber, center: float, threshold: float = LOBE_BER_THRESHOLD) -> float:
    """
    Span of the contiguous run of grid points around ``center`` whose BER is below ``threshold``.

    Returns 0 when the grid point closest to ``center`` is already at or above it.
    """
    axis_values = np.asarray(axis_values, dtype=float)
    below = np.asarray(ber, dtype=float) < threshold
    if axis_values.shape != below.shape or axis_values.size == 0:
        raise ValueError("axis_values and ber must be non-empty and of equal length")
    i = int(np.argmin(np.abs(axis_values - center)))
    if not below[i]:
        return 0.0
    lo = hi = i
    while lo > 0 and below[lo - 1]:
        lo -= 1
    while hi < below.size - 1 and below[hi + 1]:
        hi += 1
    return float(axis_values[hi] - axis_values[lo])


class BerMapper(BaseExperiment):
    """
    Parameters
    ------------
    spec : ExperimentSpec
        ``ber_vs_angle`` or ``ber_vs_range``; uses ``angle_grid_deg``/``range_grid_km``,
        ``map_snr_db``, ``probe`` and ``map_symbols``.
    """

    def __init__(self, spec: ExperimentSpec):
        super().__init__(spec)
        if self.experiment not in (BER_VS_ANGLE, BER_VS_RANGE):
            raise ValueError(f"BerMapper runs {BER_VS_ANGLE} or {BER_VS_RANGE}, not {self.experiment}")
        self.by_angle = self.experiment == BER_VS_ANGLE
        self.map_symbols = self._round_to_frame(self.mc_args.map_symbols, "map_symbols")
        self.with_key = spec.probe_mode == WITH_KEY

    def probe_locations(self, k: int) -> list[Location]:
        """Probe positions through Bob ``k`` (0-based) along the swept axis."""
        bob = self.scenario.bobs[k].location
        if self.by_angle:
            return [Location.from_km_deg(bob.range_km, angle) for angle in self.args.angle_grid_deg]
        return [Location.from_km_deg(range_km, bob.angle_deg) for range_km in self.args.range_grid_km]

    def map_bob(self, scheme: BaseScheme, k: int) -> tuple[list[ResultRow], list[float]]:
        """Probe rows along the sweep through Bob ``k`` and the BER at every grid point."""
        metric = f"probe.bob{k + 1}@{self.spec.probe_mode}"
        rows, ber = [], []
        batches = batchlize(list(enumerate(self.probe_locations(k))), PROBE_BATCH_SIZE)
        for b, batch in enumerate(self.progress(batches, desc=f"{scheme.name} bob{k + 1}", unit="batch")):
            receivers = [
                Receiver(f"probe{j}", loc, target_k=k, with_key=self.with_key, with_peers=self.with_key)
                for j, loc in batch
            ]
            result = self.engine.run_point(
                scheme.name, (k, b), make_trial(scheme, receivers), fixed_symbols=self.map_symbols
            )
            for receiver in receivers:
                counter = result.counters[receiver.metric_key]
                coords = (("angle_deg", receiver.location.angle_deg), ("range_km", receiver.location.range_km))
                rows.append(self.row(scheme.name, f"ber.{metric}", counter.ber, *coords, counter.bits, counter.ci95))
                rows.append(self.row(scheme.name, f"bit_errors.{metric}", counter.errors, *coords, counter.bits))
                ber.append(counter.ber)
        return rows, ber

    def run(self) -> list[ResultRow]:
        self.banner()
        scenario = self.scenario.with_snr_db(self.args.map_snr_db)
        qualifier = self.spec.probe_mode
        rows = []
        for scheme_name in self.spec.schemes:
            scheme = self.make_scheme(scheme_name, scenario)
            for k, bob in enumerate(scenario.bobs):
                bob_rows, ber = self.map_bob(scheme, k)
                rows += bob_rows
                if not self.by_angle:
                    continue
                width = lobe_width(self.args.angle_grid_deg, ber, bob.location.angle_deg)
                logger.info(f"{scheme_name}: lobe around Bob {k + 1} is {width:.2f} deg wide ({qualifier})")
                at_bob = ("range_km", bob.location.range_km)
                rows.append(self.row(scheme_name, f"lobe_width_deg.bob{k + 1}@{qualifier}", width, at_bob))
        return rows


def run_ber_map(spec: ExperimentSpec) -> list[ResultRow]:
    return BerMapper(spec).run()
