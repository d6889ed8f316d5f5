import json
import os
import tempfile
import unittest

from dmflow.scenarios.results import ResultRow, binomial_ci95, metadata_path, read_csv, write_csv, write_metadata
from dmflow.utils.constants import CSV_COLUMNS


class ResultsTest(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmpdir.cleanup)
        self.path = os.path.join(self.tmpdir.name, "out", "results.csv")

    def test_write_and_read(self):
        rows = [
            ResultRow("ber_vs_snr", "wfrft_coop", "snr_db", 10.0, None, None, "ber.bob1", 0.125, 800, 0.02),
            ResultRow("power_vs_rate", "an_dm", "rate", 1.0, "beta1", 0.5, "required_power", 0.5),
        ]
        self.assertEqual(write_csv(rows, self.path), 2)
        with open(self.path, encoding="utf-8") as f:
            text = f.read()
        self.assertTrue(text.startswith(",".join(CSV_COLUMNS) + "\n"))
        self.assertNotIn("\r", text)
        parsed = read_csv(self.path)
        self.assertEqual(parsed[0]["metric"], "ber.bob1")
        self.assertEqual(parsed[0]["param2_name"], "")
        self.assertEqual(float(parsed[0]["value"]), 0.125)
        self.assertEqual(parsed[1]["n"], "0")
        self.assertEqual(parsed[1]["param2"], "0.5")

    def test_converged_is_not_written(self):
        row = ResultRow("ber_vs_snr", "an_dm", "snr_db", 0.0, None, None, "ber.bob1", 0.1, converged=False)
        self.assertEqual(len(row.as_csv_fields()), len(CSV_COLUMNS))

    def test_metadata_sidecar(self):
        os.makedirs(os.path.dirname(self.path))
        path = write_metadata(self.path, {"seed": 3, "experiment": "secrecy_map"})
        self.assertEqual(path, metadata_path(self.path))
        self.assertTrue(str(path).endswith("results.csv.meta.json"))
        with open(path, encoding="utf-8") as f:
            self.assertEqual(json.load(f)["seed"], 3)

    def test_binomial_ci95(self):
        self.assertEqual(binomial_ci95(0, 0), 0.0)
        self.assertAlmostEqual(binomial_ci95(50, 100), 1.96 * 0.05)
