import pytest


def pytest_configure(config: pytest.Config):
    config.addinivalue_line("markers", "slow: marks tests as slow")
    config.addinivalue_line("markers", "dmflow_core: tests for the core simulation chain")
    config.addinivalue_line("markers", "dothis: mark for dev to do the specified tests only")
