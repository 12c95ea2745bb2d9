"""Validators for episode and config documents and reasoner endpoints."""

from __future__ import annotations

from pathlib import Path
from urllib.parse import urlparse

import requests
import yaml

from recovery_agent.harness.episode import EpisodeFileError, load_episode
from recovery_agent.utils.logger import get_logger

__all__ = [
    "ValidationStatus",
    "validate_config_file",
    "validate_endpoint",
    "validate_episode_file",
]

logger = get_logger(__name__)


class ValidationStatus:
    """Validation result status codes."""

    OK = "OK"
    WARNING = "WARNING"
    ERROR = "ERROR"


def validate_episode_file(path: Path) -> tuple[bool, str, str]:
    """Check that a file holds a loadable episode.

    An episode without recovery annotations is valid but reported as a warning,
    since ablation runs cannot tell which stage it exercises.

    Returns:
        Tuple of (is_valid, status, message).
    """
    try:
        spec = load_episode(path)
    except EpisodeFileError as e:
        logger.debug(f"Episode {path} is invalid: {e}")
        return False, ValidationStatus.ERROR, str(e)
    if spec.annotations.needs_recovery and not spec.annotations.requires and not spec.annotations.note:
        return True, ValidationStatus.WARNING, f"{spec.id}: needs recovery but names no stage or note"
    return True, ValidationStatus.OK, f"{spec.id}: {spec.task.task}"


def validate_config_file(path: Path) -> tuple[bool, str, str]:
    """Check that a config file parses as a YAML mapping.

    A missing file is valid; defaults are used.

    Returns:
        Tuple of (is_valid, status, message).
    """
    if not path.exists():
        return True, ValidationStatus.WARNING, f"Not found, using defaults ({path})"
    try:
        with path.open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        return False, ValidationStatus.ERROR, f"Invalid YAML: {e}"
    if data is not None and not isinstance(data, dict):
        return False, ValidationStatus.ERROR, "Expected a mapping at the top level"
    return True, ValidationStatus.OK, str(path)


def validate_endpoint(url: str, verify: bool = False, timeout: int = 5) -> tuple[bool, str, str]:
    """Validate a reasoner endpoint URL and optionally check it answers.

    Args:
        url: Endpoint URL.
        verify: If True, attempt to connect to the endpoint.
        timeout: Connection timeout in seconds for verification.

    Returns:
        Tuple of (is_valid, status, message). Any HTTP response, even 404 or 405,
        counts as reachable; only transport errors fail verification.
    """
    try:
        parsed = urlparse(url)
    except Exception as e:
        logger.debug(f"URL parsing failed for '{url}': {e}")
        return False, ValidationStatus.ERROR, f"Invalid URL format: {e}"

    if parsed.scheme not in ("http", "https"):
        return False, ValidationStatus.ERROR, "URL must use http:// or https://"
    if not parsed.netloc:
        return False, ValidationStatus.ERROR, "URL must include a hostname"

    if verify:
        try:
            logger.debug(f"Checking endpoint reachability: {url}")
            response = requests.head(url, timeout=timeout, allow_redirects=True)
        except requests.RequestException as e:
            logger.warning(f"Endpoint not reachable: {url} - {e}")
            return False, ValidationStatus.ERROR, f"Endpoint not reachable: {e}"
        if response.status_code >= 500:
            return True, ValidationStatus.WARNING, f"Endpoint answered HTTP {response.status_code}"

    if parsed.scheme == "http" and parsed.hostname not in ("localhost", "127.0.0.1", "::1"):
        return True, ValidationStatus.WARNING, "Plain http to a remote host sends the API key unencrypted"
    return True, ValidationStatus.OK, "OK"
