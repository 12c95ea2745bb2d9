"""Success, goal-condition and path-length-weighted metrics."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from statistics import fmean
from typing import TYPE_CHECKING, Any, Final

from recovery_agent.tasks import TASK_NAMES

if TYPE_CHECKING:
    from recovery_agent.harness.episode import EpisodeResult

__all__ = [
    "SPLITS",
    "EpisodeMetrics",
    "MetricsError",
    "MetricsReport",
    "aggregate",
    "compute_plw",
    "per_split",
    "per_task",
    "stage_flow",
]

SPLITS: Final[tuple[str, ...]] = ("seen", "unseen")


class MetricsError(Exception):
    """Raised on invalid metric inputs."""


def compute_plw(m: float, reference_length: int, actions_taken: int) -> float:
    """Path-length weighted version of a rate.

    Args:
        m: Rate in [0, 1].
        reference_length: Length of the reference trajectory, positive.
        actions_taken: Actions the agent emitted.

    Returns:
        ``m * L* / max(L*, L^)``; exactly ``m`` when the agent was not longer.

    Raises:
        MetricsError: If any input is out of range.
    """
    if reference_length <= 0:
        raise MetricsError(f"reference_length must be positive, got {reference_length}")
    if actions_taken < 0:
        raise MetricsError(f"actions_taken must be non-negative, got {actions_taken}")
    if not 0.0 <= m <= 1.0:
        raise MetricsError(f"rate must be within [0, 1], got {m}")
    if actions_taken <= reference_length:
        return m
    return m * reference_length / actions_taken


@dataclass(frozen=True)
class EpisodeMetrics:
    """Metrics of one episode."""

    success: bool
    goal_ratio: float
    plw_sr: float
    plw_gc: float

    @classmethod
    def from_result(cls, result: EpisodeResult) -> EpisodeMetrics:
        """Extract the metric fields of a result."""
        return cls(result.success, result.goal_ratio, result.plw_sr, result.plw_gc)


@dataclass(frozen=True)
class MetricsReport:
    """Aggregate rates over a set of episodes.

    ``failure_reasons`` counts failed subgoal executions by reason over all episodes.
    """

    episodes: int
    successes: int
    sr: float
    gc: float
    plw_sr: float
    plw_gc: float
    failure_reasons: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Serialize for reports."""
        return {
            "episodes": self.episodes,
            "successes": self.successes,
            "sr": self.sr,
            "gc": self.gc,
            "plw_sr": self.plw_sr,
            "plw_gc": self.plw_gc,
            "failure_reasons": self.failure_shares(),
        }

    def failure_shares(self) -> dict[str, dict[str, float | int]]:
        """Reason -> count and share of all failures, most frequent first."""
        total = sum(self.failure_reasons.values())
        ranked = sorted(self.failure_reasons.items(), key=lambda item: (-item[1], item[0]))
        return {reason: {"count": count, "share": count / total} for reason, count in ranked}


def aggregate(results: Iterable[EpisodeResult]) -> MetricsReport:
    """Average per-episode metrics; GC is the mean of per-episode ratios."""
    collected = list(results)
    metrics = [EpisodeMetrics.from_result(r) for r in collected]
    reasons: Counter[str] = Counter()
    for result in collected:
        reasons.update(result.failure_reasons)
    if not metrics:
        return MetricsReport(0, 0, 0.0, 0.0, 0.0, 0.0)
    successes = sum(1 for m in metrics if m.success)
    return MetricsReport(
        episodes=len(metrics),
        successes=successes,
        sr=successes / len(metrics),
        gc=fmean(m.goal_ratio for m in metrics),
        plw_sr=fmean(m.plw_sr for m in metrics),
        plw_gc=fmean(m.plw_gc for m in metrics),
        failure_reasons=dict(reasons),
    )


def per_task(results: Sequence[EpisodeResult]) -> dict[str, MetricsReport]:
    """Aggregate per task, in task-list order, listing only tasks that occur."""
    order = {name: index for index, name in enumerate(TASK_NAMES)}
    tasks = sorted({r.task for r in results}, key=lambda t: (order.get(t, len(order)), t))
    return {task: aggregate(r for r in results if r.task == task) for task in tasks}


def per_split(results: Sequence[EpisodeResult]) -> dict[str, MetricsReport]:
    """Aggregate per corpus split, seen before unseen, listing only splits that occur."""
    order = {name: index for index, name in enumerate(SPLITS)}
    splits = sorted({r.split for r in results}, key=lambda s: (order.get(s, len(order)), s))
    return {split: aggregate(r for r in results if r.split == split) for split in splits}


def stage_flow(results: Iterable[EpisodeResult]) -> dict[str, Any]:
    """Sum stage-flow counters and express them as fractions of all plan subgoals."""
    totals: dict[str, int] = {}
    for result in results:
        for key, value in result.stage_flow.items():
            totals[key] = totals.get(key, 0) + value
    plan_subgoals = totals.get("plan_subgoals", 0)
    fractions = {
        key: (totals.get(key, 0) / plan_subgoals if plan_subgoals else 0.0)
        for key in ("failed_subgoals", "stage1", "stage2", "stage3")
    }
    return {"counts": totals, "fractions": fractions}
