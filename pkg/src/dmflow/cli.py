#!/usr/bin/env python
"""
Command line entry point::

    sim <experiment> [--config scenario.yaml] [--seed 0] [--out results.csv]
        [--scheme wfrft_coop|wfrft_inde|an_dm] [--probe with_key|without_key] [--threads N] ...
    sim <experiment> run_options.json

Exit codes: 0 on success, 2 on a configuration error, 3 when a BER point did not reach
its error target (the CSV is still written).
"""

import logging
import os
import sys
from dataclasses import asdict
from typing import Optional

from transformers import HfArgumentParser

from dmflow.args import ExperimentArguments, ExperimentSpec, MonteCarloArguments
from dmflow.pipeline.auto_pipeline import AutoPipeline
from dmflow.scenarios.results import write_csv, write_metadata
from dmflow.scenarios.scenario import Scenario, load_scenario
from dmflow.utils.constants import EXIT_CONFIG_ERROR, EXIT_NONCONVERGENCE, EXIT_OK, EXPERIMENTS
from dmflow.utils.errors import ConfigurationError, DegenerateBaselineError, IllConditionedGeometryError
from dmflow.utils.versioning import get_runtime_versions

logger = logging.getLogger(__name__)

MONTE_CARLO_NOTE = "Monte Carlo sample counts are dmflow defaults unless set on the command line."


def _configure_logging():
    logging.basicConfig(
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        datefmt="%m/%d/%Y %H:%M:%S",
        handlers=[logging.StreamHandler(sys.stdout)],
        level=logging.INFO,
    )


def make_parser() -> HfArgumentParser:
    return HfArgumentParser(
        (ExperimentArguments, MonteCarloArguments),
        prog="sim",
        usage="sim <experiment> [options] | sim <experiment> run_options.json",
        description=f"Experiments: {', '.join(EXPERIMENTS)}.",
    )


def parse_arguments(argv: list[str]) -> tuple[ExperimentArguments, MonteCarloArguments]:
    parser = make_parser()
    if len(argv) == 1 and argv[0].endswith(".json"):
        return parser.parse_json_file(json_file=os.path.abspath(argv[0]))
    return parser.parse_args_into_dataclasses(args=argv)


def build_spec(experiment: str, argv: list[str]) -> ExperimentSpec:
    exp_args, mc_args = parse_arguments(argv)
    logging.getLogger().setLevel(exp_args.log_level.upper())
    scenario = load_scenario(exp_args.config) if exp_args.config else Scenario.default()
    return ExperimentSpec(experiment=experiment, scenario=scenario, arguments=exp_args, monte_carlo=mc_args)


def run_metadata(spec: ExperimentSpec, argv: list[str], n_rows: int, converged: bool) -> dict:
    return {
        "experiment": spec.experiment,
        "seed": spec.seed,
        "schemes": list(spec.schemes),
        "config": spec.arguments.config,
        "eve_set": spec.scenario.eve_set,
        "monte_carlo": {**asdict(spec.monte_carlo), "note": MONTE_CARLO_NOTE},
        "versions": get_runtime_versions(),
        "command": ["sim", spec.experiment, *argv],
        "rows": n_rows,
        "converged": converged,
    }


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    _configure_logging()
    experiment, options = (argv[0], argv[1:]) if argv else (None, [])
    if experiment in ("-h", "--help"):
        make_parser().print_help()
        return EXIT_OK

    try:
        if experiment not in EXPERIMENTS:
            make_parser().error(f"experiment must be one of {', '.join(EXPERIMENTS)}, got {experiment}")
        spec = build_spec(experiment, options)
    except SystemExit as e:
        # argparse has already printed the usage.
        return EXIT_OK if not e.code else EXIT_CONFIG_ERROR
    except ValueError as e:
        # ConfigurationError, IllConditionedGeometryError and argument validation all land here.
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR

    try:
        rows = AutoPipeline.get_pipeline(experiment, spec).run()
    except (ConfigurationError, DegenerateBaselineError, IllConditionedGeometryError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR

    converged = all(row.converged for row in rows)
    write_csv(rows, spec.arguments.out)
    write_metadata(spec.arguments.out, run_metadata(spec, options, len(rows), converged))
    if not converged:
        lagging = sorted({row.metric for row in rows if not row.converged})
        logger.warning(f"{len(lagging)} BER metric(s) did not reach their error target: {', '.join(lagging)}")
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
