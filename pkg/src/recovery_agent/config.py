"""Configuration management for recovery-agent."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from recovery_agent.utils.logger import get_logger
from recovery_agent.utils.paths import expand_path, get_app_config_dir, get_app_data_dir, get_reports_dir

__all__ = [
    "BudgetConfig",
    "Config",
    "ReasonerConfig",
    "RecoveryConfig",
    "get_default_config",
    "load_config",
]

logger = get_logger(__name__)


@dataclass
class ReasonerConfig:
    """Reasoner backend configuration."""

    backend: str = "scripted"
    endpoint: str = "http://localhost:8000/v1/chat/completions"
    model: str = "gpt-4o"
    api_key_env: str = "RECOVERY_AGENT_API_KEY"
    wire_format: str = "openai"
    timeout: float = 60.0
    temperature: float = 0.0
    max_tokens: int = 1024
    max_retries: int = 3
    retry_backoff: float = 1.0
    max_in_flight: int = 4


@dataclass
class BudgetConfig:
    """Per-episode action and failure limits."""

    max_actions: int = 1000
    max_failures: int = 30
    failure_counting: str = "per_action"


@dataclass
class RecoveryConfig:
    """Bounds on the recovery chain."""

    max_chains_per_subgoal: int = 2
    max_stage4_rounds: int = 2
    max_depth: int = 2


@dataclass
class Config:
    """Global configuration for recovery-agent."""

    reasoner: ReasonerConfig = field(default_factory=ReasonerConfig)
    budgets: BudgetConfig = field(default_factory=BudgetConfig)
    recovery: RecoveryConfig = field(default_factory=RecoveryConfig)
    seed: int = 0
    workers: int = 1
    reports_dir: Path = field(default_factory=get_reports_dir)
    log_level: str = "info"
    log_file: Path = field(default_factory=lambda: get_app_data_dir() / "recovery-agent.log")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Config:
        """Create Config from a dictionary.

        Args:
            data: Dictionary with configuration values.

        Returns:
            Config instance with values from the dictionary.
        """
        reasoner = _section(ReasonerConfig, data.get("reasoner"))
        budgets = _section(BudgetConfig, data.get("budgets"))
        recovery = _section(RecoveryConfig, data.get("recovery"))

        reports_str = data.get("reports_dir")
        log_file_str = data.get("log_file")

        return cls(
            reasoner=reasoner,
            budgets=budgets,
            recovery=recovery,
            seed=int(data.get("seed", 0)),
            workers=int(data.get("workers", 1)),
            reports_dir=expand_path(reports_str) if reports_str else get_reports_dir(),
            log_level=data.get("log_level", "info"),
            log_file=expand_path(log_file_str) if log_file_str else get_app_data_dir() / "recovery-agent.log",
        )


def _section(section_cls: Any, values: dict[str, Any] | None) -> Any:
    """Build a nested section, ignoring unknown keys with a warning."""
    if not values:
        return section_cls()
    known = {f.name for f in fields(section_cls)}
    unknown = sorted(set(values) - known)
    if unknown:
        logger.warning(f"Ignoring unknown {section_cls.__name__} keys: {', '.join(unknown)}")
    return section_cls(**{k: v for k, v in values.items() if k in known})


def get_default_config() -> Config:
    """Get the default configuration.

    Returns:
        Config instance with default values.
    """
    return Config()


def load_config(config_path: Path | None = None) -> Config:
    """Load configuration from file or return defaults.

    Args:
        config_path: Path to configuration file. If None, uses default location.

    Returns:
        Config instance loaded from file or with default values.
    """
    if config_path is None:
        config_path = get_app_config_dir() / "config.yaml"

    if not config_path.exists():
        logger.debug(f"Config file not found at {config_path}, using defaults")
        return get_default_config()

    try:
        with config_path.open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        logger.debug(f"Loaded configuration from {config_path}")
        return Config.from_dict(data)
    except yaml.YAMLError as e:
        logger.warning(f"Failed to parse config file {config_path}: {e}, using defaults")
        return get_default_config()
    except Exception as e:
        logger.warning(f"Error loading config file {config_path}: {e}, using defaults")
        return get_default_config()
