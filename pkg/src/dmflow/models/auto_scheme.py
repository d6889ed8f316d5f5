#!/usr/bin/env python
"""Automatically get the scheme class from its name."""

from dmflow.models.an_dm_scheme import AnDmScheme
from dmflow.models.cooperative_scheme import CooperativeScheme
from dmflow.models.independent_scheme import IndependentScheme
from dmflow.utils.constants import AN_DM, WFRFT_COOP, WFRFT_INDE

SCHEME_MAPPING = {
    WFRFT_COOP: CooperativeScheme,
    WFRFT_INDE: IndependentScheme,
    AN_DM: AnDmScheme,
}


class AutoScheme:
    @classmethod
    def get_scheme(self, scheme_name, scenario, *args, **kwargs):
        if scheme_name not in SCHEME_MAPPING:
            raise NotImplementedError(f'Scheme "{scheme_name}" is not supported')
        return SCHEME_MAPPING[scheme_name](scenario, *args, **kwargs)
