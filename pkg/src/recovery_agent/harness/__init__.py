"""Episode runner, metrics, suites and reports."""

from __future__ import annotations

from recovery_agent.harness.episode import (
    EpisodeConfig,
    EpisodeFileError,
    EpisodeResult,
    EpisodeSpec,
    load_episode,
    run_episode,
)
from recovery_agent.harness.metrics import MetricsError, compute_plw
from recovery_agent.harness.suite import ABLATIONS, run_ablation_matrix, run_suite

__all__ = [
    "ABLATIONS",
    "EpisodeConfig",
    "EpisodeFileError",
    "EpisodeResult",
    "EpisodeSpec",
    "MetricsError",
    "compute_plw",
    "load_episode",
    "run_ablation_matrix",
    "run_episode",
    "run_suite",
]
