#!/usr/bin/env python
"""
Scenario description and its YAML loader.

A scenario file is a flat mapping of dotted keys (``bob1.range_km: 150``); nested
mappings (``bob1: {range_km: 150}``) are accepted and flattened. Every key that is
absent takes the default three-Bob, two-Eve setup from :mod:`dmflow.utils.constants`.
"""

import logging
import math
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import yaml

from dmflow.dsp.fda import FdaConfig, Location, steering_matrix
from dmflow.dsp.precoding import AnDmConfig, Precoder, build_precoder
from dmflow.dsp.psk import PskAlphabet
from dmflow.dsp.wfrft import WfrftParams
from dmflow.utils.constants import (
    DEFAULT_BETA1,
    DEFAULT_BOBS,
    DEFAULT_CARRIERS_PER_ELEMENT,
    DEFAULT_COND_LIMIT,
    DEFAULT_COOP_ALPHA,
    DEFAULT_DELTA_F_HZ,
    DEFAULT_F0_HZ,
    DEFAULT_MV,
    DEFAULT_N_ELEMENTS,
    DEFAULT_NV,
    DEFAULT_P,
    DEFAULT_PS,
    DEFAULT_SNR_DB,
    DEFAULT_T_OBS_S,
    EVE_SETS,
)
from dmflow.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_EVE_SET = "reference"


@dataclass
class BobProfile:
    """
    One legitimate receiver.

    Parameters
    ------------
    location : Location
    alphabet : PskAlphabet
    wfrft : WfrftParams
        ``(alpha_k, M_V, N_V)`` used on this Bob's path by the independent scheme.
    block_len : int
        ``Q_k``, the WFRFT block length of this Bob's path.
    """

    location: Location
    alphabet: PskAlphabet
    wfrft: WfrftParams
    block_len: int

    def __post_init__(self):
        if isinstance(self.block_len, bool) or int(self.block_len) != self.block_len or self.block_len < 1:
            raise ValueError(f"block_len must be a positive integer, got {self.block_len}")
        self.block_len = int(self.block_len)


@dataclass
class Scenario:
    """
    Everything an experiment needs to know about the link.

    Parameters
    ------------
    fda : FdaConfig
    bobs : list of BobProfile
    eves : list of Location
    ps : float
        Signal power after precoding.
    noise_var : float
        AWGN variance, shared by Bobs and Eves.
    an_baseline : AnDmConfig
    coop_wfrft : WfrftParams
        The parameters shared by all Bobs in the cooperative scheme.
    cond_limit : float
        Precoder conditioning limit.
    eve_set : str
        Label of the Eve set, used in metric names.
    """

    fda: FdaConfig = field(default_factory=FdaConfig)
    bobs: list[BobProfile] = field(default_factory=list)
    eves: list[Location] = field(default_factory=list)
    ps: float = DEFAULT_PS
    noise_var: float = DEFAULT_PS / 10 ** (DEFAULT_SNR_DB / 10)
    an_baseline: AnDmConfig = field(default_factory=AnDmConfig)
    coop_wfrft: WfrftParams = field(default_factory=lambda: WfrftParams(DEFAULT_COOP_ALPHA, DEFAULT_MV, DEFAULT_NV))
    cond_limit: float = DEFAULT_COND_LIMIT
    eve_set: str = DEFAULT_EVE_SET

    def __post_init__(self):
        if len(self.bobs) < 1:
            raise ConfigurationError("at least one Bob is required", key="n_bobs")
        if not self.ps > 0:
            raise ConfigurationError(f"must be positive, got {self.ps}", key="ps")
        if not self.noise_var > 0:
            raise ConfigurationError(f"must be positive, got {self.noise_var}", key="noise_var")

    @classmethod
    def default(cls) -> "Scenario":
        return scenario_from_mapping({})

    @property
    def n_bobs(self) -> int:
        return len(self.bobs)

    @property
    def n_eves(self) -> int:
        return len(self.eves)

    @property
    def bob_locations(self) -> list[Location]:
        return [bob.location for bob in self.bobs]

    @property
    def block_lcm(self) -> int:
        return math.lcm(*(bob.block_len for bob in self.bobs))

    @property
    def snr(self) -> float:
        return self.ps / self.noise_var

    @cached_property
    def precoder(self) -> Precoder:
        return build_precoder(steering_matrix(self.fda, self.bob_locations), self.cond_limit)

    def with_noise_var(self, noise_var: float) -> "Scenario":
        return replace(self, noise_var=noise_var)

    def with_snr_db(self, snr_db: float) -> "Scenario":
        return self.with_noise_var(self.ps / 10 ** (snr_db / 10))

    def with_eves(self, eves: list[Location], eve_set: str) -> "Scenario":
        return replace(self, eves=list(eves), eve_set=eve_set)

    def single_parameter(self) -> "Scenario":
        """The same scenario with every WFRFT reduced to its single-parameter form."""
        bobs = [replace(bob, wfrft=bob.wfrft.single_parameter()) for bob in self.bobs]
        return replace(self, bobs=bobs, coop_wfrft=self.coop_wfrft.single_parameter())


_GLOBAL_KEYS = {
    "f0_hz": "float",
    "delta_f_hz": "float",
    "n_elements": "int",
    "carriers_per_element": "int",
    "p": "float",
    "spacing_m": "float",
    "t_obs_s": "float",
    "ps": "float",
    "snr_db": "float",
    "noise_var": "float",
    "beta1": "float",
    "mv": "int4",
    "nv": "int4",
    "coop_alpha": "float",
    "cond_limit": "float",
    "n_bobs": "int",
    "n_eves": "int",
    "eve_set": "str",
}
_BOB_KEYS = {"range_km": "float", "angle_deg": "float", "modulation": "modulation", "alpha": "float", "q": "int"}
_EVE_KEYS = {"range_km": "float", "angle_deg": "float"}
_INDEXED_KEY = re.compile(r"^(bob|eve)(\d+)\.(\w+)$")


def _coerce(key: str, kind: str, value, line: Optional[int]):
    try:
        if kind == "float":
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if kind == "int":
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise TypeError
            return int(float(value))
        if kind == "int4":
            if isinstance(value, str):
                value = [elem.strip() for elem in value.split(",")]
            values = [int(elem) for elem in value]
            if len(values) != 4:
                raise ConfigurationError(f"must hold exactly 4 integers, got {len(values)}", key=key, line=line)
            return tuple(values)
        if kind == "modulation":
            return PskAlphabet.from_name(value)
        if kind == "str":
            return str(value)
    except ConfigurationError:
        raise
    except (TypeError, ValueError, OverflowError) as e:
        detail = f" ({e})" if str(e) else ""
        raise ConfigurationError(f"cannot read {value!r} as {kind}{detail}", key=key, line=line) from e
    raise ValueError(f"Unknown value kind {kind}")


def _key_lines(text: str) -> dict[str, int]:
    """1-based line of every (flattened) key in a YAML document."""
    lines = {}

    def walk(node, prefix: str):
        if not isinstance(node, yaml.MappingNode):
            return
        for key_node, value_node in node.value:
            key = f"{prefix}{key_node.value}"
            lines[key] = key_node.start_mark.line + 1
            walk(value_node, f"{key}.")

    walk(yaml.compose(text, Loader=yaml.SafeLoader), "")
    return lines


def _flatten(mapping: dict, prefix: str = "") -> dict[str, Any]:
    flat = {}
    for key, value in mapping.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        else:
            flat[name] = value
    return flat


def load_scenario(path: Union[str, Path]) -> Scenario:
    """
    Read a scenario file.

    Parameters
    ------------
    path : str or Path
        YAML file; an empty file gives the default scenario.

    Returns
    ------------
    Scenario

    Raises
    ------------
    ConfigurationError
        On YAML syntax errors (with the line), unknown keys, mistyped values and
        invariant violations (with the key).
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read scenario file {path}: {e}") from e

    try:
        raw = yaml.safe_load(text)
        lines = _key_lines(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigurationError(f"invalid YAML: {problem}", line=line) from e

    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"scenario file must hold a mapping, got {type(raw).__name__}", line=1)
    logger.info(f"Loading scenario from {path}")
    return scenario_from_mapping(raw, lines=lines)


def scenario_from_mapping(raw: dict, lines: Optional[dict[str, int]] = None) -> Scenario:
    """Build a :class:`Scenario` from a (possibly nested) mapping of config keys."""
    lines = lines or {}
    flat = _flatten({str(k): v for k, v in raw.items()})

    values: dict[str, Any] = {}
    bob_values: dict[int, dict[str, Any]] = {}
    eve_values: dict[int, dict[str, Any]] = {}
    for key, value in flat.items():
        line = lines.get(key)
        if key in _GLOBAL_KEYS:
            values[key] = _coerce(key, _GLOBAL_KEYS[key], value, line)
            continue
        match = _INDEXED_KEY.match(key)
        if match is None:
            raise ConfigurationError("unknown key", key=key, line=line)
        kind, index, attribute = match.group(1), int(match.group(2)), match.group(3)
        schema = _BOB_KEYS if kind == "bob" else _EVE_KEYS
        if attribute not in schema or index < 1:
            raise ConfigurationError("unknown key", key=key, line=line)
        target = bob_values if kind == "bob" else eve_values
        target.setdefault(index, {})[attribute] = _coerce(key, schema[attribute], value, line)

    fda = _build_fda(values)
    mv = values.get("mv", DEFAULT_MV)
    nv = values.get("nv", DEFAULT_NV)
    bobs = _build_bobs(values, bob_values, mv, nv)
    eves, eve_set = _build_eves(values, eve_values)

    ps = values.get("ps", DEFAULT_PS)
    if not ps > 0:
        raise ConfigurationError(f"must be positive, got {ps}", key="ps")
    if "noise_var" in values:
        noise_var = values["noise_var"]
        if "snr_db" in values:
            logger.warning("Both noise_var and snr_db are set, snr_db is ignored.")
    else:
        noise_var = ps / 10 ** (values.get("snr_db", DEFAULT_SNR_DB) / 10)

    try:
        an_baseline = AnDmConfig(beta1=values.get("beta1", DEFAULT_BETA1))
    except ValueError as e:
        raise ConfigurationError(str(e), key="beta1") from e
    coop_alpha = values.get("coop_alpha", DEFAULT_COOP_ALPHA)
    try:
        coop_wfrft = WfrftParams(coop_alpha, mv, nv)
    except ValueError as e:
        raise ConfigurationError(str(e), key="coop_alpha") from e

    scenario = Scenario(
        fda=fda,
        bobs=bobs,
        eves=eves,
        ps=ps,
        noise_var=noise_var,
        an_baseline=an_baseline,
        coop_wfrft=coop_wfrft,
        cond_limit=values.get("cond_limit", DEFAULT_COND_LIMIT),
        eve_set=eve_set,
    )
    # Near-coincident Bobs surface here rather than mid-experiment.
    _ = scenario.precoder
    return scenario


def _build_fda(values: dict) -> FdaConfig:
    n_elements = values.get("n_elements", DEFAULT_N_ELEMENTS)
    if n_elements < 1 or n_elements % 2 == 0:
        raise ConfigurationError(f"must be a positive odd integer, got {n_elements}", key="n_elements")
    # FdaConfig attribute -> scenario file key
    file_keys = {
        "n_half": "n_elements",
        "f0": "f0_hz",
        "delta_f": "delta_f_hz",
        "n_carriers": "carriers_per_element",
        "p": "p",
        "d": "spacing_m",
        "t_obs": "t_obs_s",
    }
    try:
        return FdaConfig(
            n_half=(n_elements - 1) // 2,
            n_carriers=values.get("carriers_per_element", DEFAULT_CARRIERS_PER_ELEMENT),
            f0=values.get("f0_hz", DEFAULT_F0_HZ),
            delta_f=values.get("delta_f_hz", DEFAULT_DELTA_F_HZ),
            p=values.get("p", DEFAULT_P),
            d=values.get("spacing_m"),
            t_obs=values.get("t_obs_s", DEFAULT_T_OBS_S),
        )
    except ConfigurationError as e:
        file_key = file_keys.get(e.key, e.key)
        message = str(e).split(": ", 1)[-1]
        raise ConfigurationError(message, key=file_key) from e


def _build_bobs(values: dict, bob_values: dict[int, dict], mv, nv) -> list[BobProfile]:
    n_bobs = values.get("n_bobs", max([len(DEFAULT_BOBS), *bob_values.keys()]))
    if n_bobs < 1:
        raise ConfigurationError(f"must be at least 1, got {n_bobs}", key="n_bobs")
    extra = sorted(index for index in bob_values if index > n_bobs)
    if extra:
        raise ConfigurationError(f"bob{extra[0]} is configured but n_bobs is {n_bobs}", key="n_bobs")

    bobs = []
    for index in range(1, n_bobs + 1):
        settings = dict(DEFAULT_BOBS[index - 1]) if index <= len(DEFAULT_BOBS) else {}
        overrides = bob_values.get(index, {})
        for required in ("range_km", "angle_deg"):
            if required not in settings and required not in overrides:
                raise ConfigurationError("required for Bobs beyond the default three", key=f"bob{index}.{required}")
        settings.setdefault("modulation", "qpsk")
        settings.setdefault("alpha", DEFAULT_COOP_ALPHA)
        settings.setdefault("q", 4)
        settings.update(overrides)

        location = _location(settings, f"bob{index}")
        alphabet = settings["modulation"]
        if not isinstance(alphabet, PskAlphabet):
            alphabet = PskAlphabet.from_name(alphabet)
        try:
            wfrft = WfrftParams(settings["alpha"], mv, nv)
        except ValueError as e:
            raise ConfigurationError(str(e), key=f"bob{index}.alpha") from e
        try:
            bobs.append(BobProfile(location, alphabet, wfrft, settings["q"]))
        except ValueError as e:
            raise ConfigurationError(str(e), key=f"bob{index}.q") from e
    return bobs


def _build_eves(values: dict, eve_values: dict[int, dict]) -> tuple[list[Location], str]:
    eve_set = values.get("eve_set", DEFAULT_EVE_SET)
    if eve_set not in EVE_SETS:
        raise ConfigurationError(f'unknown Eve set "{eve_set}", choose from {sorted(EVE_SETS)}', key="eve_set")
    base = EVE_SETS[eve_set]
    n_eves = values.get("n_eves", max([len(base), *eve_values.keys()]))
    if n_eves < 0:
        raise ConfigurationError(f"must be non-negative, got {n_eves}", key="n_eves")
    extra = sorted(index for index in eve_values if index > n_eves)
    if extra:
        raise ConfigurationError(f"eve{extra[0]} is configured but n_eves is {n_eves}", key="n_eves")

    eves = []
    for index in range(1, n_eves + 1):
        settings = dict(base[index - 1]) if index <= len(base) else {}
        settings.update(eve_values.get(index, {}))
        for required in ("range_km", "angle_deg"):
            if required not in settings:
                raise ConfigurationError(f"required for Eves beyond the {eve_set} set", key=f"eve{index}.{required}")
        eves.append(_location(settings, f"eve{index}"))
    if eve_values:
        eve_set = "scenario"
    return eves, eve_set


def _location(settings: dict, prefix: str) -> Location:
    try:
        return Location.from_km_deg(settings["range_km"], settings["angle_deg"])
    except ValueError as e:
        key = f"{prefix}.range_km" if "range" in str(e) else f"{prefix}.angle_deg"
        raise ConfigurationError(str(e), key=key) from e


def eve_set_locations(name: str) -> list[Location]:
    """Locations of a named Eve set (``reference``, ``random9`` or their union)."""
    if name not in EVE_SETS:
        raise ValueError(f'Unknown Eve set "{name}", choose from {sorted(EVE_SETS)}')
    return [Location.from_km_deg(eve["range_km"], eve["angle_deg"]) for eve in EVE_SETS[name]]


def grid_locations(ranges_km, angles_deg) -> tuple[np.ndarray, np.ndarray]:
    """Flattened (range, angle) pairs in SI units for a ``ranges x angles`` grid, range-major."""
    ranges_m, angles_rad = np.meshgrid(np.asarray(ranges_km, float) * 1e3, np.deg2rad(angles_deg), indexing="ij")
    return ranges_m.reshape(-1), angles_rad.reshape(-1)
