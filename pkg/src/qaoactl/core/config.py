from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from qaoactl.core.errors import ConfigError
from qaoactl.core.models import (
    PERIODIC_BOX,
    SYMMETRIC_BOX,
    CoefficientRule,
    ExperimentConfig,
    ExperimentKind,
    MHSettings,
    OptimizerSettings,
)
from qaoactl.core.paths import OUTPUT_DIR


class Settings(BaseSettings):
    """Process-wide knobs, read from QAOACTL_* environment variables or a .env file."""

    log_level: str = "INFO"
    output_dir: Path = OUTPUT_DIR
    brute_force_limit: int = Field(24, ge=1)
    spectrum_limit: int = Field(20, ge=1)
    statevector_limit: int = Field(24, ge=1)
    workers: int = Field(1, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="QAOACTL_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )


@lru_cache
def get_settings() -> Settings:
    return Settings()


def default_experiment_config(kind: ExperimentKind, **overrides: object) -> ExperimentConfig:
    if kind == "mwvc":
        base = ExperimentConfig(kind="mwvc")
    elif kind == "mvc-warmstart":
        base = ExperimentConfig(
            kind="mvc-warmstart",
            problem="mvc",
            sizes=[10],
            edge_prob=0.6,
            cases_per_size=30,
            depths=[1],
            n_inits=10,
            init_domain=PERIODIC_BOX,
            coeff_rule=CoefficientRule(kind="fixed", a=2.0, b=1.0),
            optimizer=OptimizerSettings(method="descent", eta=0.1, iters=200),
            mh=MHSettings(descent_eta=1e-3),
        )
    elif kind == "local-minima":
        base = ExperimentConfig(
            kind="local-minima",
            problem="mvc",
            sizes=[10],
            edge_probs=[0.2, 0.4, 0.6, 0.8],
            cases_per_size=20,
            depths=[1],
            n_inits=20,
            init_domain=PERIODIC_BOX,
            coeff_rule=CoefficientRule(kind="fixed", a=2.0, b=1.0),
            optimizer=OptimizerSettings(method="descent", eta=0.1, iters=200),
        )
    else:
        raise ConfigError(f"Unknown experiment kind: {kind}")
    if not overrides:
        return base
    try:
        return ExperimentConfig.model_validate({**base.model_dump(), **overrides})
    except ValidationError as exc:
        raise ConfigError(f"Invalid experiment overrides: {exc}") from exc


def load_experiment_config(config_path: Path, kind: ExperimentKind | None = None) -> ExperimentConfig:
    """Read an ExperimentConfig JSON file; missing fields fall back to the kind's defaults."""
    if not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}")
    try:
        raw = json.loads(config_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Invalid JSON in {config_path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"Expected a JSON object in {config_path}")

    resolved = kind or raw.get("kind", "mwvc")
    if kind is not None and raw.get("kind", kind) != kind:
        raise ConfigError(f"{config_path} describes a '{raw['kind']}' experiment, not '{kind}'")
    base = default_experiment_config(resolved)
    try:
        return ExperimentConfig.model_validate({**base.model_dump(), **raw, "kind": resolved})
    except ValidationError as exc:
        raise ConfigError(f"Invalid experiment config {config_path}: {exc}") from exc


__all__ = [
    "PERIODIC_BOX",
    "SYMMETRIC_BOX",
    "Settings",
    "default_experiment_config",
    "get_settings",
    "load_experiment_config",
]
