#!/usr/bin/env python
"""
Symmetrical multi-carrier frequency diverse array (FDA).

Element ``n`` in ``-N..N`` radiates ``L`` carriers, carrier ``l`` offset by
``delta_f * ln[(|n| + 1)^p (l + 1)]`` from ``f0``. The offsets make the array
response depend on range as well as angle. Steering vectors are normalized to unit
norm and ordered element-major (``n`` outer, ``l`` inner).
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from dmflow.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

# Keeps every carrier within 1 % of f0.
MAX_RELATIVE_OFFSET = 0.01


def _wrap_angle(angle: float) -> float:
    wrapped = float(np.remainder(angle + np.pi, 2 * np.pi) - np.pi)
    return np.pi if wrapped == -np.pi else wrapped


@dataclass(frozen=True)
class Location:
    """Polar position of a receiver relative to the array center.

    ``angle_rad`` is wrapped into ``(-pi, pi]``.
    """

    range_m: float
    angle_rad: float

    def __post_init__(self):
        if not np.isfinite(self.range_m) or self.range_m <= 0:
            raise ValueError(f"range must be positive, got {self.range_m} m")
        if not np.isfinite(self.angle_rad):
            raise ValueError(f"angle must be finite, got {self.angle_rad} rad")
        object.__setattr__(self, "range_m", float(self.range_m))
        object.__setattr__(self, "angle_rad", _wrap_angle(self.angle_rad))

    @classmethod
    def from_km_deg(cls, range_km: float, angle_deg: float) -> "Location":
        return cls(range_m=range_km * 1e3, angle_rad=np.deg2rad(angle_deg))

    @property
    def range_km(self) -> float:
        return self.range_m / 1e3

    @property
    def angle_deg(self) -> float:
        return float(np.rad2deg(self.angle_rad))

    def offset(self, delta_range_m: float = 0.0, delta_angle_rad: float = 0.0) -> "Location":
        return Location(self.range_m + delta_range_m, self.angle_rad + delta_angle_rad)


@dataclass
class FdaConfig:
    """
    Array geometry and frequency plan.

    Parameters
    ------------
    n_half : int
        ``N``; the array has ``2N + 1`` elements.
    n_carriers : int
        ``L`` carriers per element.
    f0 : float
        Central carrier frequency in Hz.
    delta_f : float
        Constant frequency increment in Hz.
    p : float
        Increment control factor.
    d : float, optional
        Element spacing in meters, half the central wavelength when omitted.
    c : float
        Propagation speed in m/s.
    t_obs : float
        Time instant at which steering vectors are evaluated, in seconds.
    """

    n_half: int = 8
    n_carriers: int = 7
    f0: float = 10e9
    delta_f: float = 2e3
    p: float = 1.0
    d: Optional[float] = None
    c: float = SPEED_OF_LIGHT
    t_obs: float = 0.0

    def __post_init__(self):
        if self.d is None:
            self.d = self.c / (2 * self.f0) if self.f0 > 0 and self.c > 0 else 0.0
        self.validate()

    def validate(self):
        if isinstance(self.n_half, bool) or int(self.n_half) != self.n_half or self.n_half < 0:
            raise ConfigurationError(f"must be a non-negative integer, got {self.n_half}", key="n_half")
        if isinstance(self.n_carriers, bool) or int(self.n_carriers) != self.n_carriers or self.n_carriers < 1:
            raise ConfigurationError(f"must be a positive integer, got {self.n_carriers}", key="n_carriers")
        if not self.f0 > 0:
            raise ConfigurationError(f"must be positive, got {self.f0}", key="f0")
        if not self.c > 0:
            raise ConfigurationError(f"must be positive, got {self.c}", key="c")
        # d = 0 is accepted: it collapses the array to a single point, useful to isolate range dependence.
        if not self.d >= 0:
            raise ConfigurationError(f"must be non-negative, got {self.d}", key="d")
        if not (np.isfinite(self.delta_f) and np.isfinite(self.p) and np.isfinite(self.t_obs)):
            raise ConfigurationError("delta_f, p and t_obs must be finite", key="delta_f")

        offsets = self.frequency_offsets()
        max_offset = float(np.max(np.abs(offsets)))
        if max_offset >= MAX_RELATIVE_OFFSET * self.f0:
            raise ConfigurationError(
                f"largest frequency increment {max_offset:.6g} Hz must stay below f0/100 = "
                f"{MAX_RELATIVE_OFFSET * self.f0:.6g} Hz",
                key="delta_f",
            )

    @property
    def n_elements(self) -> int:
        return 2 * self.n_half + 1

    @property
    def dimension(self) -> int:
        return self.n_elements * self.n_carriers

    @property
    def element_indices(self) -> np.ndarray:
        return np.arange(-self.n_half, self.n_half + 1)

    def frequency_offsets(self) -> np.ndarray:
        """``(2N+1, L)`` matrix of ``delta_f * ln[(|n|+1)^p (l+1)]``."""
        n = np.abs(self.element_indices)[:, None]
        l = np.arange(self.n_carriers)[None, :]  # noqa: E741
        return self.delta_f * (self.p * np.log(n + 1.0) + np.log(l + 1.0))

    def replace(self, **changes) -> "FdaConfig":
        return replace(self, **changes)


def frequency_increment(cfg: FdaConfig, n: int, l: int) -> float:  # noqa: E741
    """Frequency offset of carrier ``l`` on element ``n``."""
    if not -cfg.n_half <= n <= cfg.n_half:
        raise IndexError(f"element index {n} outside [-{cfg.n_half}, {cfg.n_half}]")
    if not 0 <= l < cfg.n_carriers:
        raise IndexError(f"carrier index {l} outside [0, {cfg.n_carriers - 1}]")
    return float(cfg.delta_f * np.log((abs(n) + 1.0) ** cfg.p * (l + 1.0)))


def steering_matrix_from_arrays(cfg: FdaConfig, ranges_m, angles_rad) -> np.ndarray:
    """Steering vectors for parallel arrays of ranges and angles, one column each."""
    cfg.validate()
    ranges_m = np.atleast_1d(np.asarray(ranges_m, dtype=float))
    angles_rad = np.atleast_1d(np.asarray(angles_rad, dtype=float))
    if ranges_m.shape != angles_rad.shape or ranges_m.ndim != 1:
        raise ValueError("ranges and angles must be 1-D arrays of equal length")
    if ranges_m.size == 0:
        raise ValueError("At least one location is required")

    offsets = cfg.frequency_offsets().reshape(-1)
    n = np.repeat(cfg.element_indices, cfg.n_carriers).astype(float)
    range_phase = 2 * np.pi * offsets[:, None] * (cfg.t_obs - ranges_m[None, :] / cfg.c)
    angle_phase = 2 * np.pi * cfg.f0 * cfg.d / cfg.c * n[:, None] * np.sin(angles_rad)[None, :]
    return np.exp(1j * (range_phase + angle_phase)) / np.sqrt(cfg.dimension)


def steering_matrix(cfg: FdaConfig, locs: Sequence[Location]) -> np.ndarray:
    """``(2N+1)L x K`` matrix whose column ``k`` is the steering vector of ``locs[k]``."""
    if len(locs) == 0:
        raise ValueError("steering_matrix needs at least one location")
    ranges = [loc.range_m for loc in locs]
    angles = [loc.angle_rad for loc in locs]
    return steering_matrix_from_arrays(cfg, ranges, angles)


def steering_vector(cfg: FdaConfig, loc: Location) -> np.ndarray:
    return steering_matrix(cfg, [loc])[:, 0]
