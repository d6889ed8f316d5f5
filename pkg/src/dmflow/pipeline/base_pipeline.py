#!/usr/bin/env python
"""BasePipeline."""


class BasePipeline:
    pass
