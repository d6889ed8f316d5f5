#!/usr/bin/env python
"""
PropertyChecker runs ``property_suite``: every invariant of the transform, geometry,
precoding, modem and chain layers is measured on the scenario and reported as a
residual next to its tolerance.

Each check draws from its own stream keyed on the seed and the check name, so the
residual table only depends on ``(scenario, seed)``. Checks without a tolerance are
reported, never judged.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from dmflow.args import ExperimentSpec
from dmflow.dsp.channel import complex_gaussian
from dmflow.dsp.fda import steering_matrix
from dmflow.dsp.precoding import Precoder, draw_null_space_noise, null_space_projector
from dmflow.dsp.psk import PskAlphabet, count_bit_errors, demap_ml, map_bits, random_bits
from dmflow.dsp.wfrft import (
    WfrftParams,
    equivalent_an,
    equivalent_an_variance_exact,
    inverse_wfrft,
    normalized_dft,
    weights,
    weights_multi,
    weights_single,
    wfrft,
)
from dmflow.metrics import (
    an_dm_eve_sinr,
    coop_eve_sinr,
    coop_eve_sinr_exact,
    empirical_sinr,
    inde_eve_sinr,
    inde_eve_sinr_exact,
    leakage_coefficients,
)
from dmflow.models.an_dm_scheme import AnDmScheme
from dmflow.models.cooperative_scheme import coop_alice_encode, coop_bobs_decode, coop_eve_decomposition
from dmflow.models.independent_scheme import inde_alice_encode, inde_bob_decode, inde_eve_decomposition
from dmflow.pipeline.base_experiment import BaseExperiment
from dmflow.scenarios.results import ResultRow
from dmflow.scenarios.scenario import BobProfile
from dmflow.utils.constants import AN_DM, MODULATION_ORDERS, WFRFT_COOP, WFRFT_INDE
from dmflow.utils.data_utils import make_rng

logger = logging.getLogger(__name__)

ALGEBRA_CASES = 1000
ALGEBRA_TOLERANCE = 1e-9
LOOPBACK_SYMBOLS = 10_000
AN_LONG_BLOCK = 1024
AN_LONG_BLOCKS = 64
AN_EXACT_SAMPLES = 200_000
SINR_SAMPLES = 200_000
SINR_CHUNK = 12_000
CHECK_SCHEMES = {"coop": WFRFT_COOP, "inde": WFRFT_INDE, "an": AN_DM}


@dataclass
class PropertyCheck:
    """One measured invariant; ``tolerance=None`` means report only."""

    name: str
    residual: float
    tolerance: Optional[float] = None

    @property
    def passed(self) -> Optional[bool]:
        if self.tolerance is None:
            return None
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)


def _random_params(rng: np.random.Generator) -> WfrftParams:
    if rng.random() < 0.5:
        return WfrftParams(rng.uniform(-4.0, 4.0))
    return WfrftParams(rng.uniform(-4.0, 4.0), rng.integers(-5, 6, size=4), rng.integers(-5, 6, size=4))


def _random_block(rng: np.random.Generator, length: Optional[int] = None) -> np.ndarray:
    length = int(rng.integers(1, 17)) if length is None else length
    return complex_gaussian(length, 1.0, rng)


def _max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


class PropertyChecker(BaseExperiment):
    """
    Parameters
    ------------
    spec : ExperimentSpec

    precoder : Precoder, optional
        Precoder under test, the scenario's own when omitted.
    """

    def __init__(self, spec: ExperimentSpec, precoder: Optional[Precoder] = None):
        super().__init__(spec)
        self.precoder = self.scenario.precoder if precoder is None else precoder

    def rng(self, name: str) -> np.random.Generator:
        return make_rng(self.spec.seed, self.experiment, "check", name)

    def _all_params(self) -> list[tuple[WfrftParams, int]]:
        """Every transform of the scenario with the block length it runs on."""
        params = [(self.scenario.coop_wfrft, self.scenario.n_bobs)]
        params += [(bob.wfrft, bob.block_len) for bob in self.scenario.bobs]
        return params

    def _symbols(self, n_uses: int, rng: np.random.Generator) -> np.ndarray:
        return np.stack(
            [map_bits(random_bits(n_uses, bob.alphabet, rng), bob.alphabet) for bob in self.scenario.bobs], axis=-1
        )

    # Transform

    def check_wfrft_boundary(self, rng) -> float:
        residual = 0.0
        for _ in range(ALGEBRA_CASES):
            p = _random_params(rng)
            s = _random_block(rng)
            residual = max(residual, _max_abs(wfrft(s, p.with_alpha(0.0)) - s))
            residual = max(residual, _max_abs(wfrft(s, WfrftParams(1.0)) - normalized_dft(s)))
        return residual

    def check_wfrft_periodicity(self, rng) -> float:
        residual = 0.0
        for _ in range(ALGEBRA_CASES):
            p = _random_params(rng)
            s = _random_block(rng)
            residual = max(residual, _max_abs(wfrft(s, p.with_alpha(p.alpha + 4.0)) - wfrft(s, p)))
        return residual

    def check_wfrft_additivity(self, rng) -> float:
        residual = 0.0
        for _ in range(ALGEBRA_CASES):
            p = _random_params(rng)
            beta = rng.uniform(-4.0, 4.0)
            s = _random_block(rng)
            twice = wfrft(wfrft(s, p), p.with_alpha(beta))
            residual = max(residual, _max_abs(twice - wfrft(s, p.with_alpha(p.alpha + beta))))
        return residual

    def check_wfrft_linearity(self, rng) -> float:
        residual = 0.0
        for _ in range(ALGEBRA_CASES):
            p = _random_params(rng)
            s1 = _random_block(rng)
            s2 = _random_block(rng, s1.size)
            a, b = complex_gaussian(2, 1.0, rng)
            combined = wfrft(a * s1 + b * s2, p)
            residual = max(residual, _max_abs(combined - a * wfrft(s1, p) - b * wfrft(s2, p)))
        return residual

    def check_wfrft_inverse(self, rng) -> float:
        residual = 0.0
        for _ in range(ALGEBRA_CASES):
            p = _random_params(rng)
            s = _random_block(rng)
            residual = max(residual, _max_abs(inverse_wfrft(wfrft(s, p), p) - s))
        return residual

    def check_wfrft_unitarity(self, rng) -> float:
        residual = 0.0
        for _ in range(ALGEBRA_CASES):
            p = _random_params(rng)
            length = int(rng.integers(1, 17))
            matrix = wfrft(np.eye(length), p).T
            residual = max(residual, _max_abs(matrix.conj().T @ matrix - np.eye(length)))
        return residual

    def check_weight_normalization(self, rng) -> float:
        cases = [p for p, _ in self._all_params()] + [_random_params(rng) for _ in range(ALGEBRA_CASES)]
        return max(abs(float(np.sum(np.abs(weights(p).w) ** 2)) - 1.0) for p in cases)

    def check_weights_single_agreement(self, rng) -> float:
        alphas = rng.uniform(-4.0, 4.0, size=ALGEBRA_CASES)
        return max(_max_abs(weights_single(a).w - weights_multi(WfrftParams(a)).w) for a in alphas)

    def check_dft_energy(self, rng) -> float:
        residual = 0.0
        for _ in range(ALGEBRA_CASES):
            s = _random_block(rng)
            direct = normalized_dft(s)
            residual = max(residual, abs(np.linalg.norm(direct) - np.linalg.norm(s)))
            residual = max(residual, _max_abs(direct - normalized_dft(s, method="fft")))
        return residual

    def check_equivalent_an_variance(self, rng) -> float:
        """Relative gap between the measured equivalent-AN power on long blocks and ``1 - |w0|^2``."""
        residual = 0.0
        for p, _ in self._all_params():
            s = np.exp(2j * np.pi * rng.random((AN_LONG_BLOCKS, AN_LONG_BLOCK)))
            measured = float(np.mean(np.abs(equivalent_an(s, p)) ** 2))
            expected = weights(p).equivalent_an_variance
            gap = abs(measured - expected)
            residual = max(residual, gap / expected if expected > 1e-12 else gap)
        return residual

    def check_equivalent_an_exact(self, rng) -> float:
        """Same as above on the scenario's own block lengths, against the exact per-block power."""
        residual = 0.0
        for p, length in self._all_params():
            s = np.exp(2j * np.pi * rng.random((max(1, AN_EXACT_SAMPLES // length), length)))
            measured = float(np.mean(np.abs(equivalent_an(s, p)) ** 2))
            expected = equivalent_an_variance_exact(length, p)
            gap = abs(measured - expected)
            residual = max(residual, gap / expected if expected > 1e-12 else gap)
        return residual

    def check_equivalent_an_formula_gap(self, rng) -> float:
        return max(
            abs(equivalent_an_variance_exact(length, p) - weights(p).equivalent_an_variance)
            for p, length in self._all_params()
        )

    # Geometry and precoding

    def check_steering_unit_norm(self, rng) -> float:
        locations = self.scenario.bob_locations + list(self.scenario.eves)
        norms = np.linalg.norm(steering_matrix(self.scenario.fda, locations), axis=0)
        return _max_abs(norms - 1.0)

    def check_zf_identity(self, rng) -> float:
        pre = self.precoder
        return _max_abs(pre.h_matrix.conj().T @ pre.p_matrix - np.eye(pre.n_users))

    def check_power_normalization(self, rng) -> float:
        pre = self.precoder
        return abs(pre.epsilon * float(np.real(np.trace(pre.p_matrix @ pre.p_matrix.conj().T))) - 1.0)

    def check_null_space_projector(self, rng) -> float:
        projector = null_space_projector(self.precoder)
        idempotence = _max_abs(projector @ projector - projector)
        return max(idempotence, _max_abs(self.precoder.h_matrix.conj().T @ projector))

    def check_an_invisible(self, rng) -> float:
        noise = draw_null_space_noise(self.precoder, (1000,), rng)
        return _max_abs(noise @ np.conj(self.precoder.h_matrix))

    # Modem and chains

    def check_psk_round_trip(self, rng) -> float:
        errors = 0
        for m in MODULATION_ORDERS.values():
            alphabet = PskAlphabet(m)
            bits = random_bits(LOOPBACK_SYMBOLS, alphabet, rng)
            errors += count_bit_errors(bits, demap_ml(map_bits(bits, alphabet), alphabet))[0]
        return float(errors)

    def check_coop_loopback(self, rng) -> float:
        ps = self.scenario.ps
        symbols = self._symbols(LOOPBACK_SYMBOLS, rng)
        x = coop_alice_encode(symbols, self.scenario.coop_wfrft, self.precoder, ps)
        received = x @ np.conj(self.precoder.h_matrix)
        return _max_abs(coop_bobs_decode(received, self.scenario.coop_wfrft) / np.sqrt(ps) - symbols)

    def check_inde_loopback(self, rng) -> float:
        ps = self.scenario.ps
        n_uses = -(-LOOPBACK_SYMBOLS // self.scenario.block_lcm) * self.scenario.block_lcm
        symbols = self._symbols(n_uses, rng)
        frame = inde_alice_encode(list(symbols.T), self.scenario.bobs, self.precoder, ps, q_total=n_uses)
        received = frame.columns @ np.conj(self.precoder.h_matrix)
        residual = 0.0
        for k, bob in enumerate(self.scenario.bobs):
            blocks = received[:, k].reshape(-1, bob.block_len)
            estimate = inde_bob_decode(blocks, bob).reshape(-1) / np.sqrt(ps)
            residual = max(residual, _max_abs(estimate - symbols[:, k]))
        return residual

    def check_coop_eve_decomposition(self, rng) -> float:
        ps = self.scenario.ps
        symbols = self._symbols(1000, rng)
        x = coop_alice_encode(symbols, self.scenario.coop_wfrft, self.precoder, ps)
        residual = 0.0
        for h_eve in steering_matrix(self.scenario.fda, self.scenario.eves).T:
            parts = coop_eve_decomposition(symbols, self.scenario.coop_wfrft, self.precoder, ps, h_eve)
            residual = max(residual, _max_abs(sum(parts.values()) - x @ np.conj(h_eve)))
        return residual

    def check_inde_eve_decomposition(self, rng) -> float:
        scenario = self.scenario
        n_uses = scenario.block_lcm * 20
        symbols = self._symbols(n_uses, rng)
        frame = inde_alice_encode(list(symbols.T), scenario.bobs, self.precoder, scenario.ps, q_total=n_uses)
        residual = 0.0
        for h_eve in steering_matrix(scenario.fda, scenario.eves).T:
            noise = complex_gaussian(n_uses, scenario.noise_var, rng)
            observed = frame.columns @ np.conj(h_eve) + noise
            for k in range(scenario.n_bobs):
                parts = inde_eve_decomposition(frame, scenario.bobs, k, h_eve, noise)
                residual = max(residual, _max_abs(sum(parts.values()) - observed))
        return residual

    # Closed forms against Monte Carlo

    def _coop_eve_sinrs(self, rng) -> list[tuple[float, np.ndarray]]:
        """Measured cooperative Eve SINR and leakage ``rho`` for every Eve."""
        scenario, shared = self.scenario, self.scenario.coop_wfrft
        results = []
        for h_eve in steering_matrix(scenario.fda, scenario.eves).T:
            symbols = self._symbols(SINR_SAMPLES, rng)
            parts = coop_eve_decomposition(symbols, shared, self.precoder, scenario.ps, h_eve)
            noise = complex_gaussian(SINR_SAMPLES, scenario.noise_var, rng)
            measured = empirical_sinr(parts["distorted_signal"], parts["equivalent_an"] + noise)
            results.append((measured, leakage_coefficients(self.precoder, h_eve)))
        return results

    def _inde_eve_sinrs(self, rng, bobs: list[BobProfile]) -> list[tuple[float, np.ndarray, int]]:
        """Measured independent-scheme Eve SINR with leakage ``rho`` and target for every Eve and target."""
        scenario = self.scenario
        frame_len = int(np.lcm.reduce([bob.block_len for bob in bobs]))
        chunk = -(-SINR_CHUNK // frame_len) * frame_len
        n_chunks = -(-SINR_SAMPLES // chunk)
        results = []
        for h_eve in steering_matrix(scenario.fda, scenario.eves).T:
            signal = np.zeros(scenario.n_bobs)
            rest = np.zeros(scenario.n_bobs)
            for _ in range(n_chunks):
                symbols = self._symbols(chunk, rng)
                frame = inde_alice_encode(list(symbols.T), bobs, self.precoder, scenario.ps, q_total=chunk)
                noise = complex_gaussian(chunk, scenario.noise_var, rng)
                for k in range(scenario.n_bobs):
                    parts = inde_eve_decomposition(frame, bobs, k, h_eve, noise)
                    signal[k] += np.sum(np.abs(parts["distorted_signal"]) ** 2)
                    others = parts["mixed_noise"] + parts["equivalent_an"] + parts["awgn"]
                    rest[k] += np.sum(np.abs(others) ** 2)
            rho = leakage_coefficients(self.precoder, h_eve)
            results += [(signal[k] / rest[k], rho, k) for k in range(scenario.n_bobs) if signal[k] > 0]
        return results

    def check_coop_eve_sinr(self, rng) -> float:
        """Relative gap between the measured cooperative Eve SINR and the exact closed form."""
        scenario, shared = self.scenario, self.scenario.coop_wfrft
        residual = 0.0
        for eve, (measured, _) in zip(scenario.eves, self._coop_eve_sinrs(rng)):
            expected = coop_eve_sinr_exact(self.precoder, eve, scenario.fda, shared, scenario.ps, scenario.noise_var)
            residual = max(residual, abs(measured / expected - 1.0))
        return residual

    def check_coop_eve_sinr_closed_form(self, rng) -> float:
        """
        How far the measured cooperative Eve SINR or the white-AN closed form falls outside
        the SINR range whitening allows.

        The transform is unitary, so along any ``rho`` the true AN power per unit gain lies
        between ``(1 - |w0|)^2`` and ``(1 + |w0|)^2``; the closed form takes ``1 - |w0|^2``.
        """
        scenario, shared = self.scenario, self.scenario.coop_wfrft
        ps, noise_var = scenario.ps, scenario.noise_var
        w = weights(shared)
        omega0 = abs(w.omega0)
        residual = 0.0
        for eve, (measured, rho) in zip(scenario.eves, self._coop_eve_sinrs(rng)):
            closed = coop_eve_sinr(self.precoder, eve, scenario.fda, w, ps, noise_var)
            gain = ps * float(np.sum(np.abs(rho) ** 2))
            lo, hi = (omega0**2 * gain / (gain * (1 + sign * omega0) ** 2 + noise_var) for sign in (1, -1))
            for sinr in (measured, closed):
                if sinr > 0:
                    residual = max(residual, lo / sinr - 1.0, sinr / hi - 1.0)
        return residual

    def check_inde_eve_sinr(self, rng) -> float:
        scenario = self.scenario
        params = [bob.wfrft for bob in scenario.bobs]
        block_lens = [bob.block_len for bob in scenario.bobs]
        residual = 0.0
        for measured, rho, k in self._inde_eve_sinrs(rng, scenario.bobs):
            expected = inde_eve_sinr_exact(rho, params, block_lens, k, scenario.ps, scenario.noise_var)
            residual = max(residual, abs(measured / expected - 1.0))
        return residual

    def check_inde_eve_sinr_closed_form(self, rng) -> float:
        """Relative gap to the white-AN closed form once every path runs long blocks, where it is exact."""
        scenario = self.scenario
        long_bobs = [replace(bob, block_len=AN_LONG_BLOCK) for bob in scenario.bobs]
        per_bob = [weights(bob.wfrft) for bob in scenario.bobs]
        residual = 0.0
        for measured, rho, k in self._inde_eve_sinrs(rng, long_bobs):
            expected = inde_eve_sinr(rho, per_bob, k, scenario.ps, scenario.noise_var)
            residual = max(residual, abs(measured / expected - 1.0))
        return residual

    def check_an_dm_eve_sinr(self, rng) -> float:
        scenario = self.scenario
        # The AN only depends on the Bob steering vectors, not on the precoder under test.
        scheme = AnDmScheme(scenario)
        beta1, ps = scenario.an_baseline.beta1, scenario.ps
        residual = 0.0
        for h_eve in steering_matrix(scenario.fda, scenario.eves).T:
            rho = self.precoder.p_matrix.T @ np.conj(h_eve)
            symbols = self._symbols(SINR_SAMPLES, rng)
            an = np.sqrt((1 - beta1**2) * ps) * scheme.artificial_noise(h_eve[:, None], SINR_SAMPLES, rng)[:, 0]
            noise = complex_gaussian(SINR_SAMPLES, scenario.noise_var, rng)
            for k in range(scenario.n_bobs):
                others = np.ones(scenario.n_bobs, dtype=bool)
                others[k] = False
                signal = beta1 * np.sqrt(ps) * rho[k] * symbols[:, k]
                interference = beta1 * np.sqrt(ps) * (symbols[:, others] @ rho[others])
                measured = empirical_sinr(signal, interference + an + noise)
                expected = an_dm_eve_sinr(self.precoder, h_eve, beta1, k, ps, scenario.noise_var)
                if expected > 0:
                    residual = max(residual, abs(measured / expected - 1.0))
        return residual

    def checks(self) -> list[tuple[str, Callable, Optional[float]]]:
        checks = [
            ("wfrft_boundary", self.check_wfrft_boundary, ALGEBRA_TOLERANCE),
            ("wfrft_periodicity", self.check_wfrft_periodicity, ALGEBRA_TOLERANCE),
            ("wfrft_additivity", self.check_wfrft_additivity, ALGEBRA_TOLERANCE),
            ("wfrft_linearity", self.check_wfrft_linearity, ALGEBRA_TOLERANCE),
            ("wfrft_inverse", self.check_wfrft_inverse, ALGEBRA_TOLERANCE),
            ("wfrft_unitarity", self.check_wfrft_unitarity, ALGEBRA_TOLERANCE),
            ("weight_normalization", self.check_weight_normalization, 1e-12),
            ("weights_single_agreement", self.check_weights_single_agreement, 1e-12),
            ("dft_energy", self.check_dft_energy, ALGEBRA_TOLERANCE),
            ("equivalent_an_variance", self.check_equivalent_an_variance, 0.02),
            ("equivalent_an_exact", self.check_equivalent_an_exact, 0.02),
            ("equivalent_an_formula_gap", self.check_equivalent_an_formula_gap, None),
            ("steering_unit_norm", self.check_steering_unit_norm, 1e-12),
            ("zf_identity", self.check_zf_identity, 1e-8),
            ("power_normalization", self.check_power_normalization, 1e-10),
            ("psk_round_trip", self.check_psk_round_trip, 0.0),
            ("coop_loopback", self.check_coop_loopback, 1e-8),
            ("inde_loopback", self.check_inde_loopback, 1e-8),
        ]
        if self.precoder.n_users < self.precoder.dimension:
            checks += [
                ("null_space_projector", self.check_null_space_projector, 1e-9),
                ("an_invisible", self.check_an_invisible, 1e-9),
            ]
        if self.scenario.eves:
            checks += [
                ("coop_eve_decomposition", self.check_coop_eve_decomposition, 1e-9),
                ("inde_eve_decomposition", self.check_inde_eve_decomposition, 1e-9),
                ("coop_eve_sinr", self.check_coop_eve_sinr, 0.03),
                ("inde_eve_sinr", self.check_inde_eve_sinr, 0.03),
                ("coop_eve_sinr_closed_form", self.check_coop_eve_sinr_closed_form, 0.03),
                ("inde_eve_sinr_closed_form", self.check_inde_eve_sinr_closed_form, 0.03),
            ]
            if self.precoder.n_users < self.precoder.dimension:
                checks.append(("an_dm_eve_sinr", self.check_an_dm_eve_sinr, 0.03))
        return checks

    def evaluate(self) -> list[PropertyCheck]:
        results = []
        for name, check, tolerance in self.progress(self.checks(), desc="property suite", unit="check"):
            result = PropertyCheck(name=name, residual=float(check(self.rng(name))), tolerance=tolerance)
            if result.passed is False:
                logger.warning(f"Check {name} failed: residual {result.residual:.3e} > {tolerance:.1e}")
            results.append(result)
        return results

    def run(self) -> list[ResultRow]:
        self.banner()
        rows = []
        seed = ("seed", self.spec.seed)
        for result in self.evaluate():
            tolerance = ("tolerance", result.tolerance) if result.tolerance is not None else (None, None)
            scheme = CHECK_SCHEMES.get(result.name.split("_")[0], "")
            rows.append(self.row(scheme, f"residual.{result.name}", result.residual, seed, tolerance))
            if result.passed is not None:
                rows.append(self.row(scheme, f"pass.{result.name}", int(result.passed), seed, tolerance))
        n_failed = sum(1 for row in rows if row.metric.startswith("pass.") and row.value == 0)
        logger.info(f"Property suite finished, {n_failed} check(s) failed")
        return rows


def run_property_suite(spec: ExperimentSpec) -> list[ResultRow]:
    return PropertyChecker(spec).run()
