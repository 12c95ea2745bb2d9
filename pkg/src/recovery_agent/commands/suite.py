"""Implementation of the suite and ablate commands."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from recovery_agent.corpus import ScenarioCorpus, default_corpus
from recovery_agent.harness.episode import EpisodeConfig, EpisodeFileError, EpisodeSpec
from recovery_agent.harness.report import write_report
from recovery_agent.harness.suite import run_ablation_matrix, run_suite
from recovery_agent.utils.logger import get_logger

__all__ = ["SuiteCommandError", "ablate_command", "load_suite", "suite_command"]

logger = get_logger(__name__)


class SuiteCommandError(Exception):
    """Raised when the suite or ablate command fails."""


def load_suite(directory: Path | None = None) -> list[EpisodeSpec]:
    """Load every episode of a directory, or the default corpus.

    Raises:
        SuiteCommandError: If the directory is missing, empty or holds an invalid file.
    """
    if directory is not None and not directory.is_dir():
        raise SuiteCommandError(f"Not a directory: {directory}")
    corpus = ScenarioCorpus([directory]) if directory is not None else default_corpus()
    try:
        specs = corpus.load_all()
    except EpisodeFileError as e:
        raise SuiteCommandError(str(e)) from e
    if not specs:
        raise SuiteCommandError(f"No episodes found in {directory or 'the scenario corpus'}")
    logger.info(f"Loaded {len(specs)} episodes")
    return specs


def _write(report: dict[str, Any], out: Path | None, output_format: str | None) -> str | None:
    if out is None:
        return None
    path = write_report(report, out, output_format)
    logger.info(f"Wrote report to {path}")
    return str(path)


def suite_command(
    episode_config: EpisodeConfig,
    directory: Path | None = None,
    workers: int = 1,
    out: Path | None = None,
    output_format: str | None = None,
) -> dict[str, Any]:
    """Run every episode once under one configuration.

    Returns:
        Dictionary with ``report`` and ``out`` (written path or None).

    Raises:
        SuiteCommandError: If the episodes cannot be loaded.
    """
    specs = load_suite(directory)
    report = run_suite(specs, episode_config, workers)
    return {"report": report, "out": _write(report, out, output_format)}


def ablate_command(
    episode_config: EpisodeConfig,
    directory: Path | None = None,
    workers: int = 1,
    out: Path | None = None,
    output_format: str | None = None,
) -> dict[str, Any]:
    """Run every episode under each ablation row.

    The stage flags of ``episode_config`` are ignored; each row sets its own.

    Returns:
        Dictionary with ``report`` and ``out`` (written path or None).

    Raises:
        SuiteCommandError: If the episodes cannot be loaded.
    """
    specs = load_suite(directory)
    report = run_ablation_matrix(specs, episode_config, workers)
    return {"report": report, "out": _write(report, out, output_format)}
