"""Experiment configuration: a YAML file mapped onto dataclasses."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Mapping

import yaml

from .strategies import STRATEGY_KINDS, MixtureConfig


class ConfigError(ValueError):
    """A configuration file or value that cannot be used."""


@dataclass
class SyntheticSpec:
    """Synthetic environment: per-engine click probability and position decay."""

    probs: dict[str, float]
    decay: list[float]
    prefixes: list[str] = field(default_factory=lambda: ["q"])

    @classmethod
    def from_dict(cls, data: Mapping) -> "SyntheticSpec":
        _reject_unknown(data, cls, "synthetic")
        if "probs" not in data or "decay" not in data:
            raise ConfigError("synthetic requires both probs and decay")
        return cls(
            probs=dict(data["probs"]),
            decay=[float(x) for x in data["decay"]],
            prefixes=[str(p) for p in data.get("prefixes", ["q"])],
        )


@dataclass
class ExperimentConfig:
    """Everything a run needs: data source, strategy, sizes, and seeds."""

    log: str | None = None
    tuples: str | None = None
    strategy: str = "ranked"
    assignment: list[str] | None = None
    baseline: str = "popularity"
    display_size: int = 5
    prior: tuple[float, float] = (1.0, 1.0)
    seed: int = 0
    episodes: int = 10_000
    repeats: int = 1
    min_prefix_len: int = 1
    max_prefix_len: int | None = None
    half_life_days: float = 7.0
    ttl_seconds: float = 120.0
    expire_updates: bool = True
    synthetic: SyntheticSpec | None = None

    def mixture(self) -> MixtureConfig:
        return MixtureConfig(
            display_size=self.display_size,
            prior=(float(self.prior[0]), float(self.prior[1])),
            seed=self.seed,
        )

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExperimentConfig":
        _reject_unknown(data, cls, "config")
        kwargs = dict(data)
        if "prior" in kwargs:
            prior = kwargs["prior"]
            if not isinstance(prior, (list, tuple)) or len(prior) != 2:
                raise ConfigError("prior must be a pair of numbers")
            kwargs["prior"] = (float(prior[0]), float(prior[1]))
        if "synthetic" in kwargs and kwargs["synthetic"] is not None:
            kwargs["synthetic"] = SyntheticSpec.from_dict(kwargs["synthetic"])
        if "assignment" in kwargs and kwargs["assignment"] is not None:
            kwargs["assignment"] = [str(e) for e in kwargs["assignment"]]
        config = cls(**kwargs)
        if config.strategy not in STRATEGY_KINDS:
            raise ConfigError(
                f"unknown strategy {config.strategy!r}; choose from {STRATEGY_KINDS}"
            )
        if config.display_size < 1:
            raise ConfigError("display_size must be at least 1")
        if config.episodes < 1 or config.repeats < 1:
            raise ConfigError("episodes and repeats must be positive")
        return config


def _reject_unknown(data: Mapping, cls, where: str) -> None:
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")


def load_config(path: str | Path) -> ExperimentConfig:
    """Read a YAML mapping into an ExperimentConfig, rejecting unknown keys."""
    raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    if raw is None:
        raw = {}
    if not isinstance(raw, Mapping):
        raise ConfigError(f"{path}: top level must be a mapping")
    return ExperimentConfig.from_dict(raw)
