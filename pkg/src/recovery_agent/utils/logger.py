"""Logging configuration for recovery-agent.

Records emitted while an episode runs carry the episode id, so the output of
concurrent suite workers can be told apart.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from pathlib import Path
from typing import Final

__all__ = ["ROOT_LOGGER", "EpisodeFilter", "episode_scope", "get_logger", "level_for", "setup_logging"]

ROOT_LOGGER: Final[str] = "recovery_agent"
LOG_FORMAT: Final[str] = "[%(asctime)s] [%(levelname)s] %(name)s%(episode)s: %(message)s"
DATE_FORMAT: Final[str] = "%Y-%m-%d %H:%M:%S"

_current_episode: ContextVar[str | None] = ContextVar("recovery_agent_episode", default=None)


class EpisodeFilter(logging.Filter):
    """Attach ``episode`` (`` [id]`` or empty) to every record."""

    def filter(self, record: logging.LogRecord) -> bool:
        episode = _current_episode.get()
        record.episode = f" [{episode}]" if episode else ""
        return True


@contextmanager
def episode_scope(episode_id: str) -> Iterator[None]:
    """Tag log records emitted in this thread with ``episode_id``."""
    token = _current_episode.set(episode_id)
    try:
        yield
    finally:
        _current_episode.reset(token)


def level_for(verbose: int, quiet: bool, configured: str) -> int:
    """Console level from CLI flags, falling back to the configured level name.

    ``-q`` shows errors only, ``-v`` INFO and ``-vv`` DEBUG. Unknown names map to WARNING.
    """
    if quiet:
        return logging.ERROR
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    level = logging.getLevelName(configured.upper())
    return level if isinstance(level, int) else logging.WARNING


def setup_logging(
    level: int = logging.INFO,
    log_file: Path | None = None,
    console: bool = True,
    file_level: int = logging.DEBUG,
) -> None:
    """Configure the package logger.

    Calling this again replaces the previous handlers.

    Args:
        level: Console logging level (default: INFO).
        log_file: Optional log file; parent directories are created.
        console: Whether to log to stderr (default: True).
        file_level: File logging level (default: DEBUG).
    """
    root_logger = logging.getLogger(ROOT_LOGGER)
    root_logger.setLevel(logging.DEBUG)
    root_logger.handlers.clear()

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
    handlers: list[logging.Handler] = []
    if console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        handlers.append(console_handler)
    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(file_level)
        handlers.append(file_handler)

    for handler in handlers:
        handler.setFormatter(formatter)
        handler.addFilter(EpisodeFilter())
        root_logger.addHandler(handler)


def get_logger(name: str) -> logging.Logger:
    """Get a logger under the package namespace.

    Args:
        name: Logger name, usually ``__name__`` of the caller.

    Returns:
        Logger instance.
    """
    if not name.startswith(ROOT_LOGGER):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)
