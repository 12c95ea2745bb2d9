"""Run many episodes, optionally across the ablation matrix."""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Any, Final

from recovery_agent.harness.episode import EpisodeConfig, EpisodeResult, EpisodeSpec, crashed_result, run_episode
from recovery_agent.harness.report import REPORT_SCHEMA_VERSION, build_report
from recovery_agent.planner import Demonstration, load_demonstrations
from recovery_agent.recovery import StageFlags
from recovery_agent.search import SearchExample, load_search_examples
from recovery_agent.utils.logger import get_logger

__all__ = ["ABLATIONS", "run_ablation_matrix", "run_episodes", "run_suite"]

logger = get_logger(__name__)

ABLATIONS: Final[tuple[tuple[str, StageFlags], ...]] = (
    ("full", StageFlags()),
    ("w/o s1", StageFlags(s1=False)),
    ("w/o s2", StageFlags(s2=False)),
    ("w/o s3", StageFlags(s3=False)),
    ("w/o s4", StageFlags(s4=False)),
    ("w/o s2&4", StageFlags(s2=False, s4=False)),
    ("w/o search", StageFlags(search=False)),
    ("none", StageFlags(s1=False, s2=False, s3=False, s4=False)),
)


def _guarded(
    spec: EpisodeSpec,
    config: EpisodeConfig,
    pool: Sequence[Demonstration],
    search_examples: Sequence[SearchExample],
) -> EpisodeResult:
    try:
        return run_episode(spec, config, pool=pool, search_examples=search_examples)
    except Exception as e:
        logger.error(f"Episode {spec.id} crashed: {e}")
        return crashed_result(spec, e)


def run_episodes(specs: Sequence[EpisodeSpec], config: EpisodeConfig, workers: int = 1) -> list[EpisodeResult]:
    """Run episodes concurrently; results keep the input order.

    Args:
        specs: Episodes to run.
        config: Shared run configuration; each episode gets its own reasoner.
        workers: Thread pool size.

    Returns:
        One result per spec. A crashing episode yields a ``crash`` result.
    """
    pool = load_demonstrations()
    search_examples = load_search_examples()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = [executor.submit(_guarded, spec, config, pool, search_examples) for spec in specs]
        results = [future.result() for future in futures]
    successes = sum(1 for r in results if r.success)
    logger.info(f"Ran {len(results)} episodes with stages {config.stages.label}: {successes} succeeded")
    return results


def run_suite(specs: Sequence[EpisodeSpec], config: EpisodeConfig, workers: int = 1) -> dict[str, Any]:
    """Run a suite and build its report.

    Raises:
        ValueError: If no episodes are given.
    """
    if not specs:
        raise ValueError("A suite needs at least one episode")
    results = run_episodes(specs, config, workers)
    return build_report(results, {**config.to_dict(), "workers": workers})


def run_ablation_matrix(specs: Sequence[EpisodeSpec], config: EpisodeConfig, workers: int = 1) -> dict[str, Any]:
    """Run every ablation row over the same episodes.

    Returns:
        Report with one entry under ``rows`` per ablation, in matrix order.

    Raises:
        ValueError: If no episodes are given.
    """
    if not specs:
        raise ValueError("A suite needs at least one episode")
    rows = []
    for name, flags in ABLATIONS:
        logger.info(f"Ablation row {name}")
        row_config = replace(config, stages=flags)
        report = build_report(run_episodes(specs, row_config, workers), row_config.to_dict())
        rows.append({"name": name, **{k: v for k, v in report.items() if k != "schema_version"}})
    configuration = {k: v for k, v in config.to_dict().items() if k != "stages"}
    return {"schema_version": REPORT_SCHEMA_VERSION, "configuration": {**configuration, "workers": workers}, "rows": rows}
