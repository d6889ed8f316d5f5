import logging
import os
from typing import Optional

logger = logging.getLogger(__name__)

__all__ = [
    "get_num_threads",
    "NUM_THREADS_ENV",
]

NUM_THREADS_ENV = "DMFLOW_NUM_THREADS"


def get_num_threads(requested: Optional[int] = None) -> int:
    """Resolve the Monte Carlo worker count.

    An explicit positive ``requested`` wins, then ``DMFLOW_NUM_THREADS``, then 1.
    """
    if requested is not None and requested > 0:
        return requested

    env_value = os.environ.get(NUM_THREADS_ENV)
    if env_value:
        try:
            num_threads = int(env_value)
        except ValueError:
            logger.warning(f"Ignoring {NUM_THREADS_ENV}={env_value!r}: not an integer.")
            return 1
        if num_threads > 0:
            return num_threads
        logger.warning(f"Ignoring {NUM_THREADS_ENV}={env_value!r}: must be positive.")
    return 1
