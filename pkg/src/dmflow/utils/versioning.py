import logging
import sys
from importlib import metadata
from typing import Optional

logger = logging.getLogger(__name__)


def get_python_version():
    return sys.version_info


def get_package_version(package_name: str) -> Optional[str]:
    try:
        return metadata.version(package_name)
    except metadata.PackageNotFoundError:
        return None


def get_runtime_versions(packages: tuple[str, ...] = ("dmflow", "numpy", "scipy", "transformers")) -> dict:
    """Versions recorded next to every result file."""
    versions = {"python": ".".join(str(part) for part in get_python_version()[:3])}
    for package_name in packages:
        versions[package_name] = get_package_version(package_name)
    return versions
