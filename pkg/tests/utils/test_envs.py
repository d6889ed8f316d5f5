import os
import unittest
from unittest.mock import patch

from dmflow.utils.envs import NUM_THREADS_ENV, get_num_threads


class TestEnvs(unittest.TestCase):
    def test_explicit_request_wins(self):
        with patch.dict(os.environ, {NUM_THREADS_ENV: "8"}, clear=True):
            self.assertEqual(get_num_threads(3), 3)

    def test_falls_back_to_env(self):
        with patch.dict(os.environ, {NUM_THREADS_ENV: "4"}, clear=True):
            self.assertEqual(get_num_threads(0), 4)
            self.assertEqual(get_num_threads(None), 4)

    def test_defaults_to_one(self):
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(get_num_threads(0), 1)

    def test_ignores_garbage_env(self):
        with patch.dict(os.environ, {NUM_THREADS_ENV: "many"}, clear=True):
            with self.assertLogs("dmflow.utils.envs", level="WARNING") as log_ctx:
                self.assertEqual(get_num_threads(0), 1)
        self.assertTrue(any("not an integer" in entry for entry in log_ctx.output))

    def test_ignores_non_positive_env(self):
        with patch.dict(os.environ, {NUM_THREADS_ENV: "-2"}, clear=True):
            with self.assertLogs("dmflow.utils.envs", level="WARNING") as log_ctx:
                self.assertEqual(get_num_threads(0), 1)
        self.assertTrue(any("must be positive" in entry for entry in log_ctx.output))
