import unittest

import numpy as np

from dmflow.dsp.fda import steering_matrix, steering_vector
from dmflow.dsp.wfrft import WfrftParams, weights
from dmflow.metrics import (
    RateReport,
    _ber_by_integration,
    achievable_rate,
    an_dm_bob_sinr,
    an_dm_eve_sinr,
    awgn_ber_mpsk,
    coop_bob_sinr,
    coop_eve_sinr,
    coop_eve_sinr_exact,
    coop_eve_sinr_from_leakage,
    coop_secrecy_rate,
    db_to_linear,
    inde_eve_sinr,
    inde_eve_sinr_exact,
    inde_secrecy_rate,
    leakage_coefficients,
    linear_to_db,
    q_function,
    required_transmit_power,
    snr,
    theoretical_ber_mpsk,
)
from dmflow.scenarios.scenario import Scenario


class BerTheoryTest(unittest.TestCase):
    def test_snr(self):
        self.assertEqual(snr(1.0, 1.0), 1.0)
        self.assertAlmostEqual(float(linear_to_db(snr(1.0, 0.1))), 10.0)
        self.assertAlmostEqual(float(linear_to_db(an_dm_bob_sinr(1.0, 1.0, 0.9))), -0.9151, places=4)
        with self.assertRaises(ValueError):
            snr(1.0, 0.0)

    def test_db_round_trip(self):
        self.assertAlmostEqual(float(db_to_linear(linear_to_db(3.7))), 3.7)

    def test_q_function(self):
        self.assertAlmostEqual(float(q_function(0.0)), 0.5)
        self.assertAlmostEqual(float(q_function(np.sqrt(10.0))), 7.827e-4, places=6)

    def test_theoretical_ber_at_zero_snr(self):
        for m in (2, 4, 8):
            self.assertAlmostEqual(float(theoretical_ber_mpsk(0.0, m)), 1.0 / np.log2(m))

    def test_theoretical_qpsk_value(self):
        self.assertAlmostEqual(float(theoretical_ber_mpsk(10.0, 4)), 7.827e-4, places=6)

    def test_exact_bpsk_and_qpsk(self):
        self.assertAlmostEqual(float(awgn_ber_mpsk(4.0, 2)), float(q_function(np.sqrt(8.0))))
        self.assertAlmostEqual(float(awgn_ber_mpsk(4.0, 4)), float(q_function(2.0)))

    def test_phase_integration_matches_closed_forms(self):
        for gamma in (0.5, 3.0, 10.0):
            self.assertAlmostEqual(_ber_by_integration(gamma, 2), float(q_function(np.sqrt(2 * gamma))), places=8)
            self.assertAlmostEqual(_ber_by_integration(gamma, 4), float(q_function(np.sqrt(gamma))), places=8)

    def test_8psk_exact_approaches_approximation(self):
        exact = awgn_ber_mpsk(100.0, 8)
        self.assertAlmostEqual(exact / float(theoretical_ber_mpsk(100.0, 8)), 1.0, delta=0.05)
        self.assertLess(awgn_ber_mpsk(10.0, 8), awgn_ber_mpsk(1.0, 8))

    def test_vectorized(self):
        self.assertEqual(np.shape(awgn_ber_mpsk([1.0, 2.0, 3.0], 8)), (3,))

    def test_unsupported_order(self):
        with self.assertRaises(ValueError):
            theoretical_ber_mpsk(1.0, 16)
        with self.assertRaises(ValueError):
            awgn_ber_mpsk(-1.0, 2)

    def test_bpsk_monte_carlo(self):
        rng = np.random.default_rng(0)
        gamma = float(db_to_linear(4.0))
        n = 1_000_000
        bits = rng.integers(0, 2, n)
        y = (1 - 2 * bits) + rng.standard_normal(n) / np.sqrt(2 * gamma)
        measured = float(np.mean((y < 0) != bits.astype(bool)))
        expected = float(awgn_ber_mpsk(gamma, 2))
        self.assertLess(abs(measured - expected), 5 * np.sqrt(expected * (1 - expected) / n))


class RateTest(unittest.TestCase):
    def test_achievable_rate(self):
        self.assertEqual(float(achievable_rate(1.0)), 1.0)
        self.assertAlmostEqual(float(achievable_rate(coop_bob_sinr(1.0, 0.1))), 3.4594, places=4)
        with self.assertRaises(ValueError):
            achievable_rate(-0.1)

    def test_coop_secrecy_rate(self):
        self.assertEqual(coop_secrecy_rate([3.0, 3.0], [1.0, 2.0]), 1.0)
        self.assertEqual(coop_secrecy_rate([1.0], [1.0]), 0.0)
        self.assertEqual(coop_secrecy_rate([1.0], [2.0]), 0.0)
        with self.assertRaisesRegex(ValueError, "without at least one Eve"):
            coop_secrecy_rate([1.0], [])

    def test_inde_secrecy_rate(self):
        self.assertEqual(inde_secrecy_rate([2.0], [[1.0, 1.5]]), 0.5)
        with self.assertRaises(ValueError):
            inde_secrecy_rate([2.0], np.empty((0, 2)))

    def test_single_bob_forms_agree(self):
        self.assertEqual(inde_secrecy_rate([2.0], [[0.5], [1.2]]), coop_secrecy_rate([2.0], [0.5, 1.2]))

    def test_rate_report(self):
        report = RateReport.from_independent([2.0, 2.0], [[1.0, 0.5], [0.2, 0.1]])
        self.assertEqual(report.eve_rates.shape, (2, 2))
        self.assertEqual(report.secrecy_rate, 1.0)
        with self.assertRaises(ValueError):
            RateReport(np.ones(1), np.ones(1), -0.1)

    def test_required_transmit_power(self):
        self.assertAlmostEqual(required_transmit_power(1.0, 0.1, 0.5), 0.2)
        self.assertAlmostEqual(required_transmit_power(1.0, 0.1, 0.5, beta1=0.5), 0.5)
        self.assertEqual(required_transmit_power(0.0, 0.1, 0.5), 0.0)
        with self.assertRaises(ValueError):
            required_transmit_power(-1.0, 0.1, 0.5)


class EveSinrTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.scenario = Scenario.default()
        cls.pre = cls.scenario.precoder

    def test_leakage_on_bob_is_a_unit_vector(self):
        rho = leakage_coefficients(self.pre, steering_vector(self.scenario.fda, self.scenario.bobs[1].location))
        np.testing.assert_allclose(rho, [0, 1, 0], atol=1e-8)

    def test_coop_eve_on_bob(self):
        w = weights(self.scenario.coop_wfrft)
        expected = abs(w.omega0) ** 2 / (w.equivalent_an_variance + 0.1)
        sinr = coop_eve_sinr(self.pre, self.scenario.eves[0], self.scenario.fda, w, 1.0, 0.1)
        self.assertAlmostEqual(sinr, expected, places=8)

    def test_coop_without_transform_is_exposed(self):
        w = weights(WfrftParams(0.0))
        sinr = coop_eve_sinr(self.pre, self.scenario.eves[0], self.scenario.fda, w, 1.0, 0.1)
        self.assertAlmostEqual(sinr, 10.0, places=6)

    def test_coop_noiseless_limit(self):
        w = weights(self.scenario.coop_wfrft)
        sinr = coop_eve_sinr(self.pre, self.scenario.eves[1], self.scenario.fda, w, 1.0, 1e-15)
        self.assertAlmostEqual(sinr, abs(w.omega0) ** 2 / w.equivalent_an_variance, places=6)

    def test_coop_vectorized_over_eves(self):
        w = weights(self.scenario.coop_wfrft)
        rho = leakage_coefficients(self.pre, steering_matrix(self.scenario.fda, self.scenario.eves)).T
        batch = coop_eve_sinr_from_leakage(rho, w, 1.0, 0.1)
        for v, eve in enumerate(self.scenario.eves):
            self.assertAlmostEqual(batch[v], coop_eve_sinr(self.pre, eve, self.scenario.fda, w, 1.0, 0.1))

    def test_coop_exact_on_far_eve_is_close_to_white_model(self):
        eve = self.scenario.eves[1]
        approx = coop_eve_sinr(self.pre, eve, self.scenario.fda, weights(self.scenario.coop_wfrft), 1.0, 0.1)
        exact = coop_eve_sinr_exact(self.pre, eve, self.scenario.fda, self.scenario.coop_wfrft, 1.0, 0.1)
        self.assertGreater(exact, 0.0)
        self.assertGreater(approx, 0.0)

    def test_inde_eve_on_bob(self):
        per_bob = [weights(bob.wfrft) for bob in self.scenario.bobs]
        w = per_bob[2]
        sinr = inde_eve_sinr(np.array([0, 0, 1.0]), per_bob, 2, 1.0, 0.1)
        self.assertAlmostEqual(sinr, abs(w.omega0) ** 2 / (w.equivalent_an_variance + 0.1))
        self.assertAlmostEqual(inde_eve_sinr(np.array([0, 0, 1.0]), per_bob, 0, 1.0, 0.1), 0.0)

    def test_inde_without_transform_is_exposed(self):
        per_bob = [weights(WfrftParams(0.0))] * 3
        self.assertAlmostEqual(inde_eve_sinr(np.array([1.0, 0, 0]), per_bob, 0, 1.0, 0.1), 10.0)

    def test_inde_vectorized_and_exact(self):
        per_bob = [weights(bob.wfrft) for bob in self.scenario.bobs]
        rho = leakage_coefficients(self.pre, steering_matrix(self.scenario.fda, self.scenario.eves)).T
        batch = inde_eve_sinr(rho, per_bob, 1, 1.0, 0.1)
        self.assertEqual(batch.shape, (2,))
        self.assertAlmostEqual(batch[1], inde_eve_sinr(rho[1], per_bob, 1, 1.0, 0.1))
        params = [bob.wfrft for bob in self.scenario.bobs]
        exact = inde_eve_sinr_exact(rho[1], params, [bob.block_len for bob in self.scenario.bobs], 1, 1.0, 0.1)
        self.assertGreater(exact, 0.0)
        with self.assertRaises(IndexError):
            inde_eve_sinr(rho, per_bob, 3, 1.0, 0.1)

    def test_an_dm_eve_on_bob_equals_bob(self):
        h = steering_vector(self.scenario.fda, self.scenario.bobs[0].location)
        sinr = an_dm_eve_sinr(self.pre, h, 0.9, 0, 1.0, 0.1)
        self.assertAlmostEqual(sinr, an_dm_bob_sinr(1.0, 0.1, 0.9), places=6)

    def test_an_dm_vectorized_over_eves(self):
        h = steering_matrix(self.scenario.fda, self.scenario.eves)
        batch = an_dm_eve_sinr(self.pre, h, 0.7, 2, 1.0, 0.1)
        self.assertEqual(batch.shape, (2,))
        self.assertAlmostEqual(batch[1], an_dm_eve_sinr(self.pre, h[:, 1], 0.7, 2, 1.0, 0.1))
        with self.assertRaises(IndexError):
            an_dm_eve_sinr(self.pre, h, 0.7, 3, 1.0, 0.1)
