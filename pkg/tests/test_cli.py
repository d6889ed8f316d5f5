import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from dmflow.cli import main
from dmflow.scenarios.results import metadata_path, read_csv


class CliTest(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp_dir = self._tmp.name
        self.out = os.path.join(self.tmp_dir, "results", "out.csv")

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name: str, content: str) -> str:
        path = os.path.join(self.tmp_dir, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(content)
        return path

    def test_missing_or_unknown_experiment(self):
        for argv in ([], ["ber_vs_time"], ["--out", self.out]):
            stderr = io.StringIO()
            with redirect_stderr(stderr):
                self.assertEqual(main(argv), 2)
            self.assertIn("usage: sim <experiment>", stderr.getvalue())
            self.assertIn("experiment must be one of ber_vs_snr", stderr.getvalue())
        self.assertFalse(os.path.exists(self.out))

    def test_help(self):
        stdout = io.StringIO()
        with redirect_stdout(stdout):
            self.assertEqual(main(["--help"]), 0)
        self.assertIn("Experiments: ber_vs_snr", stdout.getvalue())

    def test_malformed_option_value(self):
        stderr = io.StringIO()
        with redirect_stderr(stderr):
            self.assertEqual(main(["power_vs_rate", "--seed", "abc", "--out", self.out]), 2)
        self.assertIn("usage: sim <experiment>", stderr.getvalue())

    def test_unknown_option(self):
        self.assertEqual(main(["power_vs_rate", "--bogus", "1", "--out", self.out]), 2)
        self.assertFalse(os.path.exists(self.out))

    def test_invalid_option_value(self):
        self.assertEqual(main(["power_vs_rate", "--target_ber", "0.7", "--out", self.out]), 2)

    def test_bad_scenario_file(self):
        config = self.write("bad.yaml", "n_elements: -1\n")
        self.assertEqual(main(["secrecy_vs_snr", "--config", config, "--out", self.out]), 2)

    def test_coincident_bobs(self):
        config = self.write(
            "coincident.yaml",
            "bob2:\n  range_km: 150\n  angle_deg: 50\n",
        )
        self.assertEqual(main(["power_vs_rate", "--config", config, "--out", self.out]), 2)

    def test_secrecy_vs_snr(self):
        code = main(
            ["secrecy_vs_snr", "--snr_grid_db", "10", "--eve_sets", "scenario", "--out", self.out, "--disable_tqdm"]
        )
        self.assertEqual(code, 0)

        rows = read_csv(self.out)
        self.assertEqual(
            list(rows[0].keys()),
            ["experiment", "scheme", "param1_name", "param1", "param2_name", "param2", "metric", "value", "n", "ci95"],
        )
        self.assertTrue(all(row["experiment"] == "secrecy_vs_snr" for row in rows))
        self.assertIn("secrecy_rate@reference", {row["metric"] for row in rows})

        with open(metadata_path(self.out), encoding="utf-8") as f:
            metadata = json.load(f)
        self.assertEqual(metadata["experiment"], "secrecy_vs_snr")
        self.assertEqual(metadata["eve_set"], "reference")
        self.assertEqual(metadata["rows"], len(rows))
        self.assertTrue(metadata["converged"])
        self.assertIn("numpy", metadata["versions"])

    def test_json_run_options(self):
        options = self.write(
            "run.json",
            json.dumps({"out": self.out, "target_rates": "1,2", "scheme": "an_dm", "disable_tqdm": True}),
        )
        self.assertEqual(main(["power_vs_rate", options]), 0)
        metrics = {row["metric"] for row in read_csv(self.out)}
        self.assertEqual(metrics, {"required_power", "required_power_db"})

    def test_non_converged_ber_points(self):
        code = main(
            [
                "ber_vs_snr",
                "--snr_grid_db", "30",
                "--scheme", "wfrft_coop",
                "--min_symbols", "10000",
                "--max_symbols", "10000",
                "--trial_uses", "600",
                "--out", self.out,
                "--disable_tqdm",
            ]
        )
        self.assertEqual(code, 3)
        self.assertTrue(os.path.exists(self.out))
        with open(metadata_path(self.out), encoding="utf-8") as f:
            self.assertFalse(json.load(f)["converged"])
