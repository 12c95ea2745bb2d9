"""Platform directories and path helpers."""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Final

from platformdirs import user_config_dir, user_data_dir

__all__ = [
    "APP_NAME",
    "get_app_data_dir",
    "get_app_config_dir",
    "get_reports_dir",
    "get_user_scenarios_dir",
    "get_package_data_path",
    "expand_path",
    "ensure_dir",
]

APP_NAME: Final[str] = "recovery-agent"


def get_app_data_dir() -> Path:
    """Return the application data directory (~/.local/share/recovery-agent)."""
    return Path(user_data_dir(APP_NAME, appauthor=False))


def get_app_config_dir() -> Path:
    """Return the application config directory (~/.config/recovery-agent)."""
    return Path(user_config_dir(APP_NAME, appauthor=False))


def get_reports_dir() -> Path:
    """Return the default directory for suite and ablation reports.

    Returns:
        Path to ~/.local/share/recovery-agent/reports
    """
    return get_app_data_dir() / "reports"


def get_user_scenarios_dir() -> Path:
    """Return the directory searched for user-authored scenarios.

    Returns:
        Path to ~/.local/share/recovery-agent/scenarios
    """
    return get_app_data_dir() / "scenarios"


def get_package_data_path(*parts: str) -> Path:
    """Return a filesystem path to a file shipped inside the package.

    Args:
        *parts: Path components below the package root, e.g. ``("data", "demonstrations.yaml")``.

    Returns:
        Path to the packaged resource.
    """
    resource = resources.files("recovery_agent")
    for part in parts:
        resource = resource.joinpath(part)
    return Path(str(resource))


def expand_path(path: str | Path) -> Path:
    """Expand and resolve a path, handling ~.

    Args:
        path: Path string or Path object to expand.

    Returns:
        Absolute, normalized Path object.
    """
    return Path(path).expanduser().resolve()


def ensure_dir(path: Path, mode: int = 0o755) -> Path:
    """Ensure a directory exists.

    Args:
        path: Directory path.
        mode: Permission mode for creation (default: 0o755).

    Returns:
        The directory path.

    Raises:
        OSError: If directory creation fails.
    """
    path.mkdir(parents=True, exist_ok=True, mode=mode)
    return path
