#!/usr/bin/env python
"""Return an experiment pipeline automatically based on its name."""

from dmflow.pipeline.ber_mapper import BerMapper
from dmflow.pipeline.ber_simulator import BerSimulator
from dmflow.pipeline.property_checker import PropertyChecker
from dmflow.pipeline.robustness_evaluator import RobustnessEvaluator
from dmflow.pipeline.secrecy_evaluator import PowerRateEvaluator, SecrecyEvaluator
from dmflow.pipeline.secrecy_mapper import SecrecyMapper
from dmflow.utils.constants import (
    BER_VS_ANGLE,
    BER_VS_RANGE,
    BER_VS_SNR,
    POWER_VS_RATE,
    PROPERTY_SUITE,
    ROBUSTNESS_ALPHA,
    ROBUSTNESS_LOCATION,
    SECRECY_MAP,
    SECRECY_VS_SNR,
)

PIPELINE_MAPPING = {
    BER_VS_SNR: BerSimulator,
    BER_VS_ANGLE: BerMapper,
    BER_VS_RANGE: BerMapper,
    SECRECY_VS_SNR: SecrecyEvaluator,
    SECRECY_MAP: SecrecyMapper,
    ROBUSTNESS_LOCATION: RobustnessEvaluator,
    ROBUSTNESS_ALPHA: RobustnessEvaluator,
    PROPERTY_SUITE: PropertyChecker,
    POWER_VS_RATE: PowerRateEvaluator,
}


class AutoPipeline:
    """
    The class designed to return an experiment pipeline automatically based on its name.
    """

    @classmethod
    def get_pipeline(self, pipeline_name, spec, *args, **kwargs):
        if pipeline_name not in PIPELINE_MAPPING:
            raise NotImplementedError(f'Pipeline "{pipeline_name}" is not supported')

        pipeline = PIPELINE_MAPPING[pipeline_name](spec, *args, **kwargs)
        return pipeline
