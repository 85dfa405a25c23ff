"""Run configuration."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError

# Config file search paths (in order of precedence, last wins)
CONFIG_SEARCH_PATHS = [
    Path.home() / ".ric" / "config.yaml",  # User-level defaults
    Path(".ric.yaml"),  # Project-level overrides
]

LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

SUBCOMMANDS = ("gen-data", "train", "sample", "eval", "check", "dod", "corrupt")


def _env_jobs() -> int:
    raw = os.environ.get("RIC_JOBS", "1")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"RIC_JOBS must be an integer, got {raw!r}") from None


@dataclass
class RicConfig:
    """
    Settings shared by every subcommand.

    Precedence (lowest to highest):
    1. Defaults
    2. ~/.ric/config.yaml
    3. .ric.yaml (project root)
    4. Explicit --config file
    5. Environment variables (RIC_LOG, RIC_JOBS)
    6. Command-line flags (applied by the CLI)
    """
    # Logging level name
    log_level: str = field(
        default_factory=lambda: os.environ.get("RIC_LOG", "warn").lower()
    )

    # Worker threads where a module supports them
    jobs: int = field(default_factory=_env_jobs)

    # Per-subcommand flag defaults, keyed by subcommand then flag dest
    commands: dict[str, dict[str, Any]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.log_level not in LOG_LEVELS:
            raise ConfigError(
                f"Unknown log level {self.log_level!r}; choose from error, warn, info, debug"
            )
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        unknown = sorted(set(self.commands) - set(SUBCOMMANDS))
        if unknown:
            raise ConfigError(f"Unknown subcommand sections in config: {unknown}")

    @property
    def logging_level(self) -> int:
        return LOG_LEVELS[self.log_level]

    def defaults_for(self, command: str) -> dict[str, Any]:
        """Flag defaults for a subcommand, with dashes in keys mapped to underscores."""
        return {k.replace("-", "_"): v for k, v in self.commands.get(command, {}).items()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RicConfig:
        """Create config from dictionary; environment variables beat file values."""
        commands = {k: v for k, v in data.items() if k in SUBCOMMANDS}
        for name, section in commands.items():
            if not isinstance(section, dict):
                raise ConfigError(f"Config section {name!r} must be a mapping")
        unknown = sorted(set(data) - set(SUBCOMMANDS) - {"log_level", "jobs"})
        if unknown:
            raise ConfigError(f"Unknown config keys: {unknown}")
        try:
            jobs = int(os.environ.get("RIC_JOBS", data.get("jobs", 1)))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"jobs must be an integer: {e}") from e
        return cls(
            log_level=str(os.environ.get("RIC_LOG", data.get("log_level", "warn"))).lower(),
            jobs=jobs,
            commands=commands,
        )

    @classmethod
    def from_yaml(cls, path: str | Path) -> RicConfig:
        """Load config from YAML file."""
        return cls.from_dict(_read_yaml(path))

    @classmethod
    def load(cls, config_file: str | Path | None = None) -> RicConfig:
        """
        Load config with auto-discovery.

        Search order (last wins):
        1. ~/.ric/config.yaml
        2. .ric.yaml
        3. Explicit config_file argument
        4. Environment variables always override file values
        """
        merged: dict[str, Any] = {}

        # Load from default paths
        for path in CONFIG_SEARCH_PATHS:
            if path.exists():
                _merge(merged, _read_yaml(path))

        # Load explicit config file
        if config_file:
            _merge(merged, _read_yaml(config_file))

        return cls.from_dict(merged)


def _read_yaml(path: str | Path) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def _merge(base: dict[str, Any], update: dict[str, Any]) -> None:
    """Merge update into base; subcommand sections merge key by key."""
    for key, value in update.items():
        if key in SUBCOMMANDS and isinstance(value, dict) and isinstance(base.get(key), dict):
            base[key] = {**base[key], **value}
        else:
            base[key] = value
