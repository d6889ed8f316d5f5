import unittest

import numpy as np

from dmflow.dsp.wfrft import (
    WfrftParams,
    equivalent_an,
    equivalent_an_variance_exact,
    inverse_wfrft,
    mismatch_residual,
    normalized_dft,
    weights,
    weights_multi,
    weights_single,
    wfrft,
    wfrft_matrix,
)

MULTI = WfrftParams(0.5, (1, 2, 3, 4), (5, 6, 7, 8))


def random_block(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


class WfrftParamsTest(unittest.TestCase):
    def test_rejects_wrong_vector_length(self):
        with self.assertRaisesRegex(ValueError, "exactly 4 integers"):
            WfrftParams(0.5, (1, 2, 3))

    def test_rejects_non_integer_entries(self):
        with self.assertRaisesRegex(ValueError, "must hold integers"):
            WfrftParams(0.5, (1, 2, 3, 4.5))

    def test_rejects_non_finite_alpha(self):
        with self.assertRaises(ValueError):
            WfrftParams(float("nan"))

    def test_single_parameter_form(self):
        self.assertFalse(MULTI.is_single_parameter)
        single = MULTI.single_parameter()
        self.assertTrue(single.is_single_parameter)
        self.assertEqual(single.alpha, 0.5)

    def test_inverse_negates_alpha(self):
        self.assertEqual(MULTI.inverse(), WfrftParams(-0.5, (1, 2, 3, 4), (5, 6, 7, 8)))


class WeightsTest(unittest.TestCase):
    def test_order_zero_is_identity_weights(self):
        np.testing.assert_allclose(weights_single(0.0).w, [1, 0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(weights(MULTI.with_alpha(0.0)).w, [1, 0, 0, 0], atol=1e-15)

    def test_order_one_is_dft_weights(self):
        np.testing.assert_allclose(weights_single(1.0).w, [0, 1, 0, 0], atol=1e-15)

    def test_single_closed_form_matches_multi_with_zero_vectors(self):
        for alpha in np.linspace(-4.0, 4.0, 41):
            np.testing.assert_allclose(weights_single(alpha).w, weights_multi(WfrftParams(alpha)).w, atol=1e-12)

    def test_weights_have_unit_energy(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            p = WfrftParams(rng.uniform(-4, 4), rng.integers(-5, 6, 4), rng.integers(-5, 6, 4))
            self.assertAlmostEqual(float(np.sum(np.abs(weights(p).w) ** 2)), 1.0, places=12)

    def test_default_shared_transform_omega0(self):
        # Leaves about 7 % of the power on the untransformed symbol.
        w = weights(MULTI)
        self.assertAlmostEqual(abs(w.omega0) ** 2, (1 + (np.sqrt(2) - 1) ** 2) / 16, places=12)
        self.assertAlmostEqual(w.equivalent_an_variance, 1 - abs(w.omega0) ** 2, places=15)

    def test_integer_order_one_multi_parameter_has_no_direct_term(self):
        self.assertAlmostEqual(abs(weights(MULTI.with_alpha(1.0)).omega0), 0.0, places=12)


class NormalizedDftTest(unittest.TestCase):
    def test_direct_and_fft_agree(self):
        s = random_block(np.random.default_rng(1), (5, 12))
        np.testing.assert_allclose(normalized_dft(s), normalized_dft(s, method="fft"), atol=1e-12)

    def test_preserves_energy(self):
        s = random_block(np.random.default_rng(2), 31)
        self.assertAlmostEqual(np.linalg.norm(normalized_dft(s)), np.linalg.norm(s), places=12)

    def test_rejects_empty_and_unknown_method(self):
        with self.assertRaisesRegex(ValueError, "empty"):
            normalized_dft([])
        with self.assertRaisesRegex(ValueError, "Unknown DFT method"):
            normalized_dft([1.0, 2.0], method="slow")


class WfrftTest(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_order_one_is_the_dft(self):
        s = random_block(self.rng, 8)
        np.testing.assert_allclose(wfrft(s, WfrftParams(1.0)), normalized_dft(s), atol=1e-12)

    def test_order_two_reverses(self):
        s = random_block(self.rng, 7)
        expected = s[(-np.arange(7)) % 7]
        np.testing.assert_allclose(wfrft(s, WfrftParams(2.0)), expected, atol=1e-12)

    def test_inverse_recovers_block(self):
        for p in (MULTI, WfrftParams(0.3), WfrftParams(-2.7, (0, 1, 0, -1), (2, 0, 0, 3))):
            s = random_block(self.rng, (4, 9))
            np.testing.assert_allclose(inverse_wfrft(wfrft(s, p), p), s, atol=1e-10)

    def test_additivity_and_periodicity(self):
        s = random_block(self.rng, 10)
        twice = wfrft(wfrft(s, MULTI), MULTI.with_alpha(0.7))
        np.testing.assert_allclose(twice, wfrft(s, MULTI.with_alpha(1.2)), atol=1e-10)
        np.testing.assert_allclose(wfrft(s, MULTI.with_alpha(4.5)), wfrft(s, MULTI), atol=1e-10)

    def test_operator_matrix_is_unitary(self):
        for length in (1, 3, 4, 5, 16):
            matrix = wfrft_matrix(length, MULTI)
            np.testing.assert_allclose(matrix.conj().T @ matrix, np.eye(length), atol=1e-10)

    def test_transforms_blocks_on_last_axis(self):
        s = random_block(self.rng, (3, 5))
        stacked = wfrft(s, MULTI)
        for row in range(3):
            np.testing.assert_allclose(stacked[row], wfrft(s[row], MULTI), atol=1e-12)

    def test_matrix_rejects_empty_length(self):
        with self.assertRaises(ValueError):
            wfrft_matrix(0, MULTI)


class EquivalentAnTest(unittest.TestCase):
    def test_equivalent_an_completes_the_direct_term(self):
        s = random_block(np.random.default_rng(4), 12)
        np.testing.assert_allclose(weights(MULTI).w[0] * s + equivalent_an(s, MULTI), wfrft(s, MULTI), atol=1e-12)

    def test_exact_variance_approaches_closed_form_on_long_blocks(self):
        exact = equivalent_an_variance_exact(512, MULTI)
        self.assertAlmostEqual(exact, weights(MULTI).equivalent_an_variance, delta=0.01)

    def test_exact_variance_of_identity_is_zero(self):
        self.assertAlmostEqual(equivalent_an_variance_exact(6, MULTI.with_alpha(0.0)), 0.0, places=12)


class MismatchResidualTest(unittest.TestCase):
    def test_zero_error_leaves_no_residual(self):
        self.assertAlmostEqual(mismatch_residual(MULTI, 0.0, 4), 0.0, places=12)

    def test_multi_parameter_is_more_sensitive(self):
        single = mismatch_residual(MULTI.single_parameter(), 0.01, 4)
        multi = mismatch_residual(MULTI, 0.01, 4)
        self.assertGreater(single, 0.0)
        self.assertGreater(multi, 10 * single)


class DftExamplesTest(unittest.TestCase):
    def test_impulse_and_constant(self):
        np.testing.assert_allclose(normalized_dft([1, 0, 0, 0]), [0.5, 0.5, 0.5, 0.5], atol=1e-15)
        np.testing.assert_allclose(normalized_dft([2.0] * 9), [6.0] + [0.0] * 8, atol=1e-12)

    def test_matches_direct_summation(self):
        s = random_block(np.random.default_rng(5), 3)
        expected = [sum(s[n] * np.exp(-2j * np.pi * k * n / 3) for n in range(3)) / np.sqrt(3) for k in range(3)]
        np.testing.assert_allclose(normalized_dft(s), expected, atol=1e-12)

    def test_four_dfts_return_the_block(self):
        s = random_block(np.random.default_rng(6), 10)
        out = s
        for _ in range(4):
            out = normalized_dft(out)
        np.testing.assert_allclose(out, s, atol=1e-12)

    def test_inverse_of_order_one_multi_parameter_is_three_dfts(self):
        s = random_block(np.random.default_rng(7), 4)
        three = normalized_dft(normalized_dft(normalized_dft(s)))
        np.testing.assert_allclose(inverse_wfrft(s, MULTI.with_alpha(1.0)), three, atol=1e-9)

    def test_operator_matrix_oracle(self):
        s = random_block(np.random.default_rng(8), 4)
        np.testing.assert_allclose(wfrft(s, MULTI), wfrft_matrix(4, MULTI) @ s, atol=1e-12)
