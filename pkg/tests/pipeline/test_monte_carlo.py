import math
import unittest

import numpy as np

from dmflow.pipeline.utils.monte_carlo import BerCounter, MonteCarloEngine, PointResult, snr_at_ber


def noisy_trial(rng, n_uses):
    return {"bob1": (int(rng.integers(0, 5)), n_uses), "eve1.bob1": (int(rng.integers(0, 50)), n_uses)}


def silent_trial(rng, n_uses):
    return {"bob1": (0, n_uses)}


def steady_trial(rng, n_uses):
    return {"bob1": (1, n_uses)}


class BerCounterTest(unittest.TestCase):
    def test_empty_counter(self):
        self.assertTrue(math.isnan(BerCounter().ber))
        self.assertEqual(BerCounter().ci95, 0.0)

    def test_add(self):
        counter = BerCounter()
        counter.add(np.int64(3), 100)
        counter.add(1, 100)
        self.assertEqual(counter.errors, 4)
        self.assertEqual(counter.ber, 0.02)

    def test_fixed_budget_point_is_always_converged(self):
        result = PointResult(counters={"bob1": BerCounter()}, adaptive=False, min_errors=100)
        self.assertTrue(result.converged("bob1"))


class MonteCarloEngineTest(unittest.TestCase):
    def test_result_does_not_depend_on_thread_count(self):
        results = []
        for num_threads in (1, 4):
            engine = MonteCarloEngine(
                seed=7, experiment="ber_vs_snr", min_symbols=400, min_errors=30, trial_uses=10, num_threads=num_threads
            )
            result = engine.run_point("wfrft_coop", (0,), noisy_trial)
            results.append({key: (c.errors, c.bits) for key, c in result.counters.items()} | {"n": result.trials})
        self.assertEqual(results[0], results[1])

    def test_streams_differ_between_schemes(self):
        engine = MonteCarloEngine(seed=7, experiment="ber_vs_snr", trial_uses=10)
        first = engine.run_point("wfrft_coop", (0,), noisy_trial, fixed_symbols=200)
        second = engine.run_point("an_dm", (0,), noisy_trial, fixed_symbols=200)
        self.assertNotEqual(
            [c.errors for c in first.counters.values()], [c.errors for c in second.counters.values()]
        )

    def test_fixed_budget(self):
        engine = MonteCarloEngine(seed=0, experiment="ber_vs_angle", trial_uses=10)
        result = engine.run_point("wfrft_coop", (0, 0), silent_trial, fixed_symbols=25)
        self.assertEqual(result.trials, 3)
        self.assertEqual(result.channel_uses, 30)
        self.assertEqual(result.counters["bob1"].bits, 30)
        self.assertFalse(result.adaptive)

    def test_stops_once_errors_are_collected(self):
        engine = MonteCarloEngine(seed=0, experiment="ber_vs_snr", min_symbols=0, min_errors=5, trial_uses=10)
        result = engine.run_point("wfrft_coop", (0,), steady_trial)
        self.assertEqual(result.trials, 8)
        self.assertEqual(result.counters["bob1"].errors, 8)
        self.assertTrue(result.converged("bob1"))

    def test_non_convergence_is_reported(self):
        engine = MonteCarloEngine(
            seed=0, experiment="ber_vs_snr", min_symbols=0, min_errors=10, max_symbols=200, trial_uses=10
        )
        with self.assertLogs("dmflow.pipeline.utils.monte_carlo", level="WARNING") as logs:
            result = engine.run_point("wfrft_coop", (3,), silent_trial)
        self.assertEqual(result.trials, 24)
        self.assertFalse(result.converged("bob1"))
        self.assertIn("not converged: bob1", logs.output[0])

    def test_invalid_settings(self):
        with self.assertRaises(ValueError):
            MonteCarloEngine(seed=0, experiment="ber_vs_snr", trial_uses=0)
        with self.assertRaises(ValueError):
            MonteCarloEngine(seed=0, experiment="ber_vs_snr", num_threads=0)


class SnrAtBerTest(unittest.TestCase):
    def test_log_linear_interpolation(self):
        self.assertAlmostEqual(snr_at_ber([0.0, 10.0], [1e-1, 1e-3], 1e-2), 5.0)

    def test_exact_grid_point(self):
        self.assertAlmostEqual(snr_at_ber([0.0, 5.0, 10.0], [1e-1, 1e-2, 1e-3], 1e-2), 5.0)

    def test_zero_ber_uses_floor(self):
        self.assertAlmostEqual(snr_at_ber([0.0, 10.0], [1e-1, 0.0], 1e-2, floor=1e-3), 5.0)

    def test_zero_ber_without_floor(self):
        self.assertEqual(snr_at_ber([0.0, 10.0], [1e-1, 0.0], 1e-2), 10.0)

    def test_never_reached(self):
        self.assertEqual(snr_at_ber([0.0, 10.0], [0.3, 0.2], 1e-2), float("inf"))

    def test_already_below(self):
        with self.assertLogs("dmflow.pipeline.utils.monte_carlo", level="WARNING"):
            self.assertTrue(math.isnan(snr_at_ber([0.0, 10.0], [1e-3, 1e-4], 1e-2)))
