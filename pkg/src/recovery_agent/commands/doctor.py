"""System diagnostics command for recovery-agent."""

from __future__ import annotations

import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

from recovery_agent.config import Config
from recovery_agent.corpus import ScenarioCorpus, default_corpus
from recovery_agent.planner import load_demonstrations
from recovery_agent.reasoner.base import ReasonerError, TemplateId, validate_reply
from recovery_agent.search import load_search_examples
from recovery_agent.templates import TEMPLATE_FILES, TemplateSlotError, get_template_engine
from recovery_agent.utils.logger import get_logger
from recovery_agent.utils.paths import get_app_config_dir
from recovery_agent.validation import (
    ValidationStatus,
    validate_config_file,
    validate_endpoint,
    validate_episode_file,
)

__all__ = ["DoctorCommandError", "run_doctor"]

logger = get_logger(__name__)

MIN_POOL_SIZE = 3


class DoctorCommandError(Exception):
    """Raised when a doctor command operation fails."""


def run_doctor(
    config: Config,
    config_path: Path | None = None,
    corpus: ScenarioCorpus | None = None,
    verify_endpoint: bool = True,
) -> dict[str, Any]:
    """Check the installation, the configuration and the reasoner endpoint.

    Args:
        config: Current Config instance.
        config_path: Config file to check; defaults to the user config location.
        corpus: Scenario corpus to check; defaults to shipped plus user scenarios.
        verify_endpoint: Contact the HTTP endpoint when the http backend is configured.

    Returns:
        Dictionary with check results: {
            "checks": [{"name": str, "status": str, "message": str, "details": str}],
            "passed": int,
            "failed": int,
            "warnings": int,
        }

    Raises:
        DoctorCommandError: If a check itself crashes.
    """
    runners: list[Callable[[], dict[str, str]]] = [
        _check_python_version,
        lambda: _check_config_file(config_path or get_app_config_dir() / "config.yaml"),
        _check_templates,
        _check_demonstrations,
        _check_search_examples,
        lambda: _check_corpus(corpus or default_corpus()),
        lambda: _check_endpoint(config, verify_endpoint),
    ]
    checks: list[dict[str, str]] = []
    for run_check in runners:
        try:
            checks.append(run_check())
        except Exception as e:
            raise DoctorCommandError(f"Diagnostics aborted: {e}") from e

    passed = sum(1 for c in checks if c["status"] == "PASS")
    failed = sum(1 for c in checks if c["status"] == "FAIL")
    warnings = sum(1 for c in checks if c["status"] == "WARNING")
    logger.debug(f"Doctor: {passed} passed, {failed} failed, {warnings} warnings")

    return {"checks": checks, "passed": passed, "failed": failed, "warnings": warnings}


def _check(name: str, status: str, message: str, details: str = "") -> dict[str, str]:
    return {"name": name, "status": status, "message": message, "details": details}


def _check_python_version() -> dict[str, str]:
    """Check if Python version is >= 3.10."""
    version_info = sys.version_info
    version_str = f"{version_info.major}.{version_info.minor}.{version_info.micro}"
    if version_info >= (3, 10):
        return _check("Python Version", "PASS", f"Python {version_str}", "Python 3.10+ is installed")
    return _check("Python Version", "FAIL", f"Python {version_str} (requires >= 3.10)", "Upgrade to 3.10 or higher")


def _check_config_file(path: Path) -> dict[str, str]:
    """Check if the config file exists and parses."""
    is_valid, status, message = validate_config_file(path)
    if not is_valid:
        return _check("Config File", "FAIL", str(path), message)
    if status == ValidationStatus.WARNING:
        return _check("Config File", "INFO", "Not found (using defaults)", f"No user config at {path}")
    return _check("Config File", "PASS", str(path), "Config file is valid YAML")


def _check_templates() -> dict[str, str]:
    """Check that every prompt template loads."""
    engine = get_template_engine()
    try:
        counts = {template_id: len(engine.slots(template_id)) for template_id in TEMPLATE_FILES}
    except (TemplateSlotError, OSError) as e:
        return _check("Prompt Templates", "FAIL", "Cannot load templates", str(e))
    except Exception as e:
        return _check("Prompt Templates", "FAIL", "Cannot parse templates", str(e))
    details = ", ".join(f"{t} ({n} slots)" for t, n in counts.items())
    return _check("Prompt Templates", "PASS", f"{len(counts)} templates", details)


def _check_demonstrations() -> dict[str, str]:
    """Check that the planner pool loads and every output validates."""
    try:
        pool = load_demonstrations()
    except Exception as e:
        return _check("Demonstration Pool", "FAIL", "Cannot load pool", str(e))
    if len(pool) < MIN_POOL_SIZE:
        return _check("Demonstration Pool", "FAIL", f"{len(pool)} entries", f"Need at least {MIN_POOL_SIZE}")
    for demo in pool:
        try:
            validate_reply(TemplateId.PLAN, demo.output)
        except ReasonerError as e:
            return _check("Demonstration Pool", "FAIL", f"Invalid output in {demo.name or 'unnamed entry'}", str(e))
    return _check("Demonstration Pool", "PASS", f"{len(pool)} entries", "All outputs match the plan schema")


def _check_search_examples() -> dict[str, str]:
    """Check the fixed search demonstrations."""
    try:
        examples = load_search_examples()
    except Exception as e:
        return _check("Search Examples", "FAIL", "Cannot load examples", str(e))
    if not examples:
        return _check("Search Examples", "WARNING", "No examples", "Search prompts will carry no demonstrations")
    return _check("Search Examples", "PASS", f"{len(examples)} examples")


def _check_corpus(corpus: ScenarioCorpus) -> dict[str, str]:
    """Check that every scenario loads and says what recovery it exercises."""
    ids = corpus.ids()
    if not ids:
        return _check("Scenario Corpus", "WARNING", "No scenarios found")
    errors: list[str] = []
    warnings: list[str] = []
    for scenario_id in ids:
        is_valid, status, message = validate_episode_file(corpus.path_of(scenario_id))
        if not is_valid:
            errors.append(f"{scenario_id}: {message}")
        elif status == ValidationStatus.WARNING:
            warnings.append(message)
    if errors:
        return _check("Scenario Corpus", "FAIL", f"{len(errors)} of {len(ids)} invalid", "; ".join(errors))
    if warnings:
        return _check("Scenario Corpus", "WARNING", f"{len(ids)} scenarios", "; ".join(warnings))
    return _check("Scenario Corpus", "PASS", f"{len(ids)} scenarios")


def _check_endpoint(config: Config, verify: bool) -> dict[str, str]:
    """Check the reasoner backend; only the http backend has an endpoint."""
    reasoner = config.reasoner
    if reasoner.backend != "http":
        return _check("Reasoner Endpoint", "INFO", f"Backend {reasoner.backend}", "No endpoint needed")
    is_valid, status, message = validate_endpoint(reasoner.endpoint, verify=verify)
    if not is_valid:
        return _check("Reasoner Endpoint", "FAIL", reasoner.endpoint, message)
    if status == ValidationStatus.WARNING:
        return _check("Reasoner Endpoint", "WARNING", reasoner.endpoint, message)
    return _check("Reasoner Endpoint", "PASS", reasoner.endpoint, f"model {reasoner.model}")
