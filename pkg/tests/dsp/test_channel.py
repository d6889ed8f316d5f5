import unittest

import numpy as np

from dmflow.dsp.channel import awgn, complex_gaussian, observe


class ChannelTest(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(0)

    def test_complex_gaussian_variance(self):
        samples = complex_gaussian(200_000, 0.5, self.rng)
        self.assertAlmostEqual(float(np.mean(np.abs(samples) ** 2)), 0.5, delta=0.01)
        self.assertAlmostEqual(float(np.var(samples.real)), 0.25, delta=0.01)

    def test_zero_noise_is_a_copy(self):
        signal = np.ones(4, dtype=complex)
        out = awgn(signal, 0.0, self.rng)
        np.testing.assert_array_equal(out, signal)
        self.assertIsNot(out, signal)

    def test_negative_variance_rejected(self):
        with self.assertRaises(ValueError):
            awgn(np.ones(2), -1.0, self.rng)

    def test_observe_vector_and_matrix(self):
        x = self.rng.standard_normal((5, 3)) + 1j * self.rng.standard_normal((5, 3))
        h = np.array([1.0, 1j, 0.0]) / np.sqrt(2)
        np.testing.assert_allclose(observe(x, h, 0.0, self.rng), x @ h.conj())
        out = observe(x, np.stack([h, h], axis=1), 0.0, self.rng)
        self.assertEqual(out.shape, (5, 2))
