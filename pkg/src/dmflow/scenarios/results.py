#!/usr/bin/env python
"""Result rows, their CSV serialization and the run metadata sidecar."""

import csv
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from dmflow.utils.constants import CSV_COLUMNS

logger = logging.getLogger(__name__)


@dataclass
class ResultRow:
    """
    One line of the result CSV.

    ``param1``/``param2`` are the sweep coordinates (``None`` when absent), ``n`` the
    number of compared bits (0 for closed-form values) and ``ci95`` the 95 % half-width.
    ``converged`` is not written to the CSV; it tells the CLI whether a BER point met
    its error target.
    """

    experiment: str
    scheme: str
    param1_name: Optional[str]
    param1: Optional[float]
    param2_name: Optional[str]
    param2: Optional[float]
    metric: str
    value: float
    n: int = 0
    ci95: float = 0.0
    converged: bool = True

    def as_csv_fields(self) -> list[str]:
        return [_format(getattr(self, column)) for column in CSV_COLUMNS]


def binomial_ci95(errors: int, total: int) -> float:
    """``1.96 sqrt(p (1 - p) / n)`` with ``p = errors / total``."""
    if total <= 0:
        return 0.0
    p = errors / total
    return float(1.96 * np.sqrt(p * (1.0 - p) / total))


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        # repr round-trips exactly.
        return repr(float(value))
    return str(value)


def write_csv(rows: Iterable[ResultRow], path: Union[str, Path]) -> int:
    """Write ``rows`` with a header line, UTF-8 and LF line endings. Returns the row count."""
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv_fields())
            count += 1
    logger.info(f"Wrote {count} rows to {path}")
    return count


def read_csv(path: Union[str, Path]) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def metadata_path(csv_path: Union[str, Path]) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + ".meta.json")


def write_metadata(csv_path: Union[str, Path], metadata: dict) -> Path:
    """Write ``<csv>.meta.json`` next to the result file."""
    path = metadata_path(csv_path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(metadata, f, indent=2, sort_keys=True, default=_json_default)
        f.write("\n")
    logger.info(f"Wrote run metadata to {path}")
    return path


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, "__dataclass_fields__"):
        return asdict(value)
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")
