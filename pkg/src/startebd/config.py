"""Strict parsing of TOML run configs into typed objects.

Sections: [model], [generator], [evolution], [output], [sweep].  Unknown
keys or sections are rejected before any computation.  All values are in
units of the spin coupling (times in its inverse).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

import numpy as np

from .errors import ConfigError
from .linalg import TruncationPolicy
from .model import ModelConfig, SimilarityGenerator
from .trotter import EvolutionConfig

__all__ = ["RunConfig", "parse_config", "load_config"]

_MODEL_KEYS = {"delta", "eta", "omega_c", "temperature", "omega_max", "n_modes", "fock_dim"}
_GENERATOR_KEYS = {"preset", "beta", "direction"}
_EVOLUTION_KEYS = {"dt", "t_final", "threshold", "max_bond", "record_stride", "hard_bond_cap"}
_OUTPUT_KEYS = {"prefix"}
_SWEEP_KEYS = {"betas"}
_SECTIONS = {"model", "generator", "evolution", "output", "sweep"}


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig
    generator: SimilarityGenerator
    evolution: EvolutionConfig
    output_prefix: str | None = None
    sweep_betas: tuple[float, ...] | None = None


def _check_keys(section: str, table: dict, allowed: set[str]):
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}"
        )


def _number(table: dict, key: str, default):
    v = table.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key} must be a number, got {v!r}")
    return v


def _integer(table: dict, key: str, default):
    v = table.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{key} must be an integer, got {v!r}")
    return v


def _parse_model(table: dict) -> ModelConfig:
    _check_keys("model", table, _MODEL_KEYS)
    return ModelConfig(
        delta=float(_number(table, "delta", 1.0)),
        eta=float(_number(table, "eta", 4.0)),
        omega_c=float(_number(table, "omega_c", 1.0)),
        temperature=float(_number(table, "temperature", 2.0)),
        omega_max=float(_number(table, "omega_max", 12.7324)),
        n_modes=_integer(table, "n_modes", 100),
        fock_dim=_integer(table, "fock_dim", 6),
    )


def _parse_generator(table: dict) -> SimilarityGenerator:
    _check_keys("generator", table, _GENERATOR_KEYS)
    beta = float(_number(table, "beta", 0.0))
    if "direction" in table and "preset" in table:
        raise ConfigError("give either generator.preset or generator.direction, not both")
    if "direction" in table:
        entries = table["direction"]
        if not (isinstance(entries, list) and len(entries) == 4):
            raise ConfigError(
                "generator.direction must be [d00, d11, re_offdiag, im_offdiag]"
            )
        d00, d11, re01, im01 = (float(v) for v in entries)
        direction = np.array(
            [[d00, re01 + 1j * im01], [re01 - 1j * im01, d11]], dtype=np.complex128
        )
        return SimilarityGenerator(beta=beta, direction=direction)
    preset = table.get("preset", "sigma_z")
    if not isinstance(preset, str):
        raise ConfigError(f"generator.preset must be a string, got {preset!r}")
    return SimilarityGenerator.from_preset(preset, beta)


def _parse_evolution(table: dict) -> EvolutionConfig:
    _check_keys("evolution", table, _EVOLUTION_KEYS)
    if "t_final" not in table:
        raise ConfigError("evolution.t_final is required")
    max_bond = table.get("max_bond")
    if max_bond is not None:
        max_bond = _integer(table, "max_bond", None)
        if max_bond == 0:
            max_bond = None
    policy = TruncationPolicy(
        threshold=float(_number(table, "threshold", 1e-5)), max_bond=max_bond
    )
    try:
        return EvolutionConfig(
            t_final=float(_number(table, "t_final", None)),
            dt=float(_number(table, "dt", 0.005)),
            policy=policy,
            record_stride=_integer(table, "record_stride", 10),
            hard_bond_cap=_integer(table, "hard_bond_cap", 512),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _parse_sweep(table: dict) -> tuple[float, ...]:
    _check_keys("sweep", table, _SWEEP_KEYS)
    betas = table.get("betas")
    if not isinstance(betas, list) or not betas:
        raise ConfigError("sweep.betas must be a nonempty list of numbers")
    values = []
    for b in betas:
        if isinstance(b, bool) or not isinstance(b, (int, float)) or not math.isfinite(b):
            raise ConfigError(f"sweep beta {b!r} is not a finite number")
        values.append(float(b))
    if len(set(values)) != len(values):
        raise ConfigError("sweep.betas contains duplicates")
    return tuple(values)


def parse_config(text: str) -> RunConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    unknown = set(data) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    for name in _SECTIONS:
        if name in data and not isinstance(data[name], dict):
            raise ConfigError(f"[{name}] must be a table")
    output = data.get("output", {})
    _check_keys("output", output, _OUTPUT_KEYS)
    prefix = output.get("prefix")
    if prefix is not None and not isinstance(prefix, str):
        raise ConfigError(f"output.prefix must be a string, got {prefix!r}")
    sweep = _parse_sweep(data["sweep"]) if "sweep" in data else None
    return RunConfig(
        model=_parse_model(data.get("model", {})),
        generator=_parse_generator(data.get("generator", {})),
        evolution=_parse_evolution(data.get("evolution", {})),
        output_prefix=prefix,
        sweep_betas=sweep,
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
