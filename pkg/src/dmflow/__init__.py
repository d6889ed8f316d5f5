from .version import __version__ as internal_version

__version__ = internal_version

from transformers.utils.versions import require_version

from dmflow import args, dsp, metrics, models, pipeline, scenarios, utils

require_version(
    "numpy>=1.23.0",
    "To fix: from the dmflow repository root, run `pip install -r requirements.txt` or `pip install -e .`",
)
require_version(
    "scipy>=1.9.0",
    "To fix: from the dmflow repository root, run `pip install -r requirements.txt` or `pip install -e .`",
)

__all__ = ["args", "dsp", "metrics", "models", "pipeline", "scenarios", "utils"]
