import unittest

import numpy as np

from dmflow.dsp.fda import FdaConfig, Location, steering_matrix
from dmflow.dsp.precoding import (
    AnDmConfig,
    build_precoder,
    draw_null_space_noise,
    null_space_projector,
    transmit_an_baseline,
    transmit_cooperative,
)
from dmflow.utils.errors import DegenerateBaselineError, IllConditionedGeometryError

BOBS = [Location.from_km_deg(150, 50), Location.from_km_deg(180, -40), Location.from_km_deg(260, 0)]


class BuildPrecoderTest(unittest.TestCase):
    def setUp(self):
        self.h = steering_matrix(FdaConfig(), BOBS)
        self.pre = build_precoder(self.h)

    def test_zero_forcing_identity(self):
        np.testing.assert_allclose(self.h.conj().T @ self.pre.p_matrix, np.eye(3), atol=1e-10)

    def test_power_normalization(self):
        trace = float(np.real(np.trace(self.pre.p_matrix @ self.pre.p_matrix.conj().T)))
        self.assertAlmostEqual(self.pre.epsilon * trace, 1.0, places=12)
        self.assertEqual(self.pre.n_users, 3)
        self.assertEqual(self.pre.dimension, 119)

    def test_coincident_bobs_rejected(self):
        h = steering_matrix(FdaConfig(), [BOBS[0], BOBS[1], BOBS[0]])
        with self.assertRaises(IllConditionedGeometryError) as ctx:
            build_precoder(h)
        self.assertEqual(ctx.exception.column_pair, (0, 2))

    def test_rejects_non_unit_columns(self):
        with self.assertRaisesRegex(ValueError, "unit norm"):
            build_precoder(2 * self.h)

    def test_rejects_more_users_than_dimensions(self):
        with self.assertRaisesRegex(ValueError, "Cannot zero-force"):
            build_precoder(np.ones((2, 3)) / np.sqrt(2))


class TransmitTest(unittest.TestCase):
    def setUp(self):
        self.h = steering_matrix(FdaConfig(), BOBS)
        self.pre = build_precoder(self.h)
        self.rng = np.random.default_rng(0)

    def test_cooperative_delivers_each_stream(self):
        u = np.exp(2j * np.pi * self.rng.random((20, 3)))
        x = transmit_cooperative(self.pre, u, ps=2.0)
        np.testing.assert_allclose(x @ self.h.conj(), np.sqrt(2.0) * u, atol=1e-10)

    def test_cooperative_checks_user_count(self):
        with self.assertRaises(ValueError):
            transmit_cooperative(self.pre, np.ones((4, 2)), ps=1.0)

    def test_projector(self):
        projector = null_space_projector(self.pre)
        np.testing.assert_allclose(projector @ projector, projector, atol=1e-10)
        np.testing.assert_allclose(self.h.conj().T @ projector, 0, atol=1e-10)

    def test_null_space_noise_is_unit_and_invisible(self):
        noise = draw_null_space_noise(self.pre, (50,), self.rng)
        np.testing.assert_allclose(np.linalg.norm(noise, axis=-1), 1.0, atol=1e-12)
        np.testing.assert_allclose(noise @ self.h.conj(), 0, atol=1e-10)

    def test_an_baseline_bobs_see_scaled_symbols(self):
        s = np.exp(2j * np.pi * self.rng.random((30, 3)))
        x = transmit_an_baseline(self.pre, s, 1.0, AnDmConfig(beta1=0.7), self.rng)
        np.testing.assert_allclose(x @ self.h.conj(), 0.7 * s, atol=1e-10)

    def test_full_rank_bobs_leave_no_room_for_an(self):
        cfg = FdaConfig(n_half=0, n_carriers=2)
        h = steering_matrix(cfg, [Location.from_km_deg(150, 0), Location.from_km_deg(260, 0)])
        with self.assertRaises(DegenerateBaselineError):
            draw_null_space_noise(build_precoder(h), (1,), self.rng)


class AnDmConfigTest(unittest.TestCase):
    def test_beta1_bounds(self):
        for beta1 in (0.0, 1.0, -0.5):
            with self.assertRaises(ValueError):
                AnDmConfig(beta1=beta1)


class SingleUserTest(unittest.TestCase):
    def test_single_bob_precoder_is_its_steering_vector(self):
        h = steering_matrix(FdaConfig(), BOBS[:1])
        pre = build_precoder(h)
        np.testing.assert_allclose(pre.p_matrix, h, atol=1e-12)
        self.assertAlmostEqual(pre.epsilon, 1.0, places=12)
