"""Implementation of the run command."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path
from typing import Any

from recovery_agent.config import Config
from recovery_agent.corpus import ScenarioNotFoundError, default_corpus
from recovery_agent.harness.episode import EpisodeConfig, EpisodeFileError, EpisodeSpec, load_episode, run_episode
from recovery_agent.harness.report import write_report
from recovery_agent.recovery import StageFlags
from recovery_agent.utils.logger import get_logger

__all__ = ["RunCommandError", "build_episode_config", "resolve_episode", "run_episode_command"]

logger = get_logger(__name__)


class RunCommandError(Exception):
    """Raised when the run command fails."""


def build_episode_config(
    config: Config,
    stages: str = "all",
    search: bool = True,
    backend: str | None = None,
    endpoint: str | None = None,
    model: str | None = None,
    max_actions: int | None = None,
    max_failures: int | None = None,
    seed: int | None = None,
    trace_dir: Path | None = None,
) -> EpisodeConfig:
    """Merge command-line overrides into the loaded configuration.

    Raises:
        ValueError: On an unknown stage name or backend, or a non-positive budget.
    """
    flags = StageFlags.parse(stages, search=search)
    reasoner = config.reasoner
    if backend is not None:
        if backend not in ("scripted", "http"):
            raise ValueError(f"Unknown reasoner backend: {backend!r}")
        reasoner = replace(reasoner, backend=backend)
    if endpoint is not None:
        reasoner = replace(reasoner, endpoint=endpoint)
    if model is not None:
        reasoner = replace(reasoner, model=model)
    for name, value in (("max-actions", max_actions), ("max-failures", max_failures)):
        if value is not None and value <= 0:
            raise ValueError(f"--{name} must be positive, got {value}")
    return EpisodeConfig(
        stages=flags,
        reasoner=reasoner,
        budgets=config.budgets,
        recovery=config.recovery,
        max_actions=max_actions,
        max_failures=max_failures,
        seed=config.seed if seed is None else seed,
        trace_dir=trace_dir,
    )


def resolve_episode(episode: str) -> EpisodeSpec:
    """Load an episode from a file path or a corpus scenario id.

    Raises:
        RunCommandError: If neither a readable file nor a known scenario matches.
    """
    path = Path(episode)
    try:
        if path.exists():
            return load_episode(path)
        return default_corpus().get(episode)
    except (EpisodeFileError, ScenarioNotFoundError) as e:
        raise RunCommandError(str(e)) from e


def run_episode_command(
    episode: str,
    episode_config: EpisodeConfig,
    out: Path | None = None,
    output_format: str | None = None,
) -> dict[str, Any]:
    """Run one episode.

    Args:
        episode: Episode file path or scenario id.
        episode_config: Effective run configuration.
        out: Optional file to write the result to.
        output_format: ``json`` or ``yaml``; inferred from ``out`` when omitted.

    Returns:
        Dictionary with ``result`` (the episode result) and ``out`` (written path or None).

    Raises:
        RunCommandError: If the episode cannot be loaded or the run crashes.
    """
    spec = resolve_episode(episode)
    try:
        result = run_episode(spec, episode_config)
    except Exception as e:
        raise RunCommandError(f"Episode {spec.id} crashed: {e}") from e

    written = None
    if out is not None:
        written = write_report(
            {"configuration": episode_config.to_dict(), "episode": result.to_dict()}, out, output_format
        )
        logger.info(f"Wrote episode result to {written}")
    return {"result": result.to_dict(), "out": str(written) if written else None}
