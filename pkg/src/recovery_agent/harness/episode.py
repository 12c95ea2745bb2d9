"""Episode files and the single-episode pipeline."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Final

import yaml

from recovery_agent.config import BudgetConfig, ReasonerConfig, RecoveryConfig
from recovery_agent.executor.executor import Executor
from recovery_agent.executor.trace import Budget, BudgetExhausted
from recovery_agent.harness.metrics import SPLITS, compute_plw
from recovery_agent.planner import Demonstration, Dialogue, PlanError, generate_plan, load_demonstrations
from recovery_agent.reasoner.base import Reasoner
from recovery_agent.recovery import PlanRunner, RecoveryChain, StageFlags, StageFlow
from recovery_agent.search import SearchExample, load_search_examples, search_for
from recovery_agent.tasks import TaskSpec, TaskSpecError, evaluate_goals
from recovery_agent.utils.logger import episode_scope, get_logger
from recovery_agent.world.loader import WorldSpecError, load_world, load_world_file
from recovery_agent.world.state import WorldState

__all__ = [
    "ANNOTATION_STAGES",
    "EPISODE_SCHEMA_VERSION",
    "TERMINATIONS",
    "Annotations",
    "EpisodeConfig",
    "EpisodeFileError",
    "EpisodeResult",
    "EpisodeSpec",
    "create_reasoner",
    "crashed_result",
    "load_episode",
    "run_episode",
]

logger = get_logger(__name__)

EPISODE_SCHEMA_VERSION: Final[int] = 1
ANNOTATION_STAGES: Final[tuple[str, ...]] = ("stage1", "stage2", "stage3", "stage4", "search")
TERMINATIONS: Final[tuple[str, ...]] = ("completed", "max_actions", "max_failures", "plan_error", "crash")


class EpisodeFileError(Exception):
    """Raised when an episode file cannot be loaded."""


@dataclass(frozen=True)
class Annotations:
    """Which recovery capabilities an episode needs."""

    requires: tuple[str, ...] = ()
    needs_recovery: bool = False
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        """Serialize for listings and reports."""
        return {"requires": list(self.requires), "needs_recovery": self.needs_recovery, "note": self.note}


@dataclass(frozen=True)
class EpisodeSpec:
    """A parsed episode file."""

    id: str
    title: str
    task: TaskSpec
    reference_length: int
    dialogue: Dialogue
    world: Mapping[str, Any]
    planner_reply: Mapping[str, Any] | None = None
    annotations: Annotations = field(default_factory=Annotations)
    budgets: Mapping[str, int] = field(default_factory=dict)
    split: str = "seen"
    path: Path | None = None

    def build_world(self) -> WorldState:
        """Load a fresh copy of the initial world."""
        return load_world(self.world)


@dataclass
class EpisodeConfig:
    """How to run an episode.

    ``max_actions`` and ``max_failures`` override the episode file's budgets, which in
    turn override ``budgets``.
    """

    stages: StageFlags = field(default_factory=StageFlags)
    reasoner: ReasonerConfig = field(default_factory=ReasonerConfig)
    budgets: BudgetConfig = field(default_factory=BudgetConfig)
    recovery: RecoveryConfig = field(default_factory=RecoveryConfig)
    max_actions: int | None = None
    max_failures: int | None = None
    task_override: TaskSpec | None = None
    seed: int = 0
    trace_dir: Path | None = None

    def budget_for(self, spec: EpisodeSpec) -> Budget:
        """Resolve the effective budget of an episode."""
        max_actions = self.max_actions or spec.budgets.get("max_actions") or self.budgets.max_actions
        max_failures = self.max_failures or spec.budgets.get("max_failures") or self.budgets.max_failures
        return Budget(int(max_actions), int(max_failures), self.budgets.failure_counting)

    def to_dict(self) -> dict[str, Any]:
        """Serialize the parts that affect results."""
        return {
            "stages": self.stages.to_dict(),
            "backend": self.reasoner.backend,
            "model": self.reasoner.model if self.reasoner.backend == "http" else None,
            "max_actions": self.max_actions or self.budgets.max_actions,
            "max_failures": self.max_failures or self.budgets.max_failures,
            "failure_counting": self.budgets.failure_counting,
            "max_chains_per_subgoal": self.recovery.max_chains_per_subgoal,
            "max_stage4_rounds": self.recovery.max_stage4_rounds,
            "max_depth": self.recovery.max_depth,
            "seed": self.seed,
        }


@dataclass
class EpisodeResult:
    """Outcome and metrics of one episode."""

    episode_id: str
    task: str
    success: bool
    satisfied: int
    total: int
    actions_taken: int
    failed_actions: int
    reference_length: int
    plw_sr: float
    plw_gc: float
    termination: str
    error: str | None = None
    plan: list[str] = field(default_factory=list)
    recoveries: list[dict[str, Any]] = field(default_factory=list)
    stage_flow: dict[str, int] = field(default_factory=lambda: StageFlow().to_dict())
    stage4_rounds: int = 0
    split: str = "seen"
    failure_reasons: dict[str, int] = field(default_factory=dict)

    @property
    def goal_ratio(self) -> float:
        """Satisfied over total goal conditions."""
        return self.satisfied / self.total if self.total else 0.0

    def to_dict(self) -> dict[str, Any]:
        """Serialize with stable field names."""
        return {
            "episode_id": self.episode_id,
            "task": self.task,
            "success": self.success,
            "satisfied": self.satisfied,
            "total": self.total,
            "actions_taken": self.actions_taken,
            "failed_actions": self.failed_actions,
            "reference_length": self.reference_length,
            "plw_sr": self.plw_sr,
            "plw_gc": self.plw_gc,
            "termination": self.termination,
            "error": self.error,
            "plan": list(self.plan),
            "recoveries": list(self.recoveries),
            "stage_flow": dict(self.stage_flow),
            "stage4_rounds": self.stage4_rounds,
            "split": self.split,
            "failure_reasons": dict(self.failure_reasons),
        }


def _require(data: Mapping[str, Any], key: str, path: Path | None) -> Any:
    if key not in data:
        raise EpisodeFileError(f"{path or 'episode'}: {key}: field is required")
    return data[key]


def _load_annotations(data: Any) -> Annotations:
    if not data:
        return Annotations()
    requires = tuple(str(r) for r in data.get("requires", []) or [])
    unknown = set(requires) - set(ANNOTATION_STAGES)
    if unknown:
        raise EpisodeFileError(f"annotations.requires: unknown entries {sorted(unknown)}")
    return Annotations(requires, bool(data.get("needs_recovery", bool(requires))), str(data.get("note", "")))


def load_episode(path: Path) -> EpisodeSpec:
    """Load and validate an episode file.

    Args:
        path: Episode YAML file.

    Returns:
        Parsed EpisodeSpec; the world is validated eagerly.

    Raises:
        EpisodeFileError: If the file or any of its parts is invalid.
    """
    try:
        with path.open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise EpisodeFileError(f"Cannot read episode file {path}: {e}") from e
    if not isinstance(data, Mapping):
        raise EpisodeFileError(f"{path}: expected a mapping")
    version = data.get("schema_version", EPISODE_SCHEMA_VERSION)
    if version != EPISODE_SCHEMA_VERSION:
        raise EpisodeFileError(f"{path}: schema_version: unsupported version {version!r}")

    try:
        task = TaskSpec.from_dict(_require(data, "task", path))
        dialogue = Dialogue.from_list(_require(data, "dialogue", path))
    except (TaskSpecError, ValueError, AttributeError) as e:
        raise EpisodeFileError(f"{path}: {e}") from e

    world_data = _require(data, "world", path)
    try:
        if isinstance(world_data, str):
            world_path = (path.parent / world_data).resolve()
            load_world_file(world_path)
            with world_path.open("r", encoding="utf-8") as f:
                world_data = yaml.safe_load(f)
        else:
            load_world(world_data)
    except (WorldSpecError, OSError, yaml.YAMLError) as e:
        raise EpisodeFileError(f"{path}: world: {e}") from e

    reference_length = _require(data, "reference_length", path)
    if not isinstance(reference_length, int) or reference_length <= 0:
        raise EpisodeFileError(f"{path}: reference_length: expected a positive integer")
    budgets = data.get("budgets") or {}
    if not isinstance(budgets, Mapping) or set(budgets) - {"max_actions", "max_failures"}:
        raise EpisodeFileError(f"{path}: budgets: expected max_actions and/or max_failures")
    split = data.get("split", SPLITS[0])
    if split not in SPLITS:
        raise EpisodeFileError(f"{path}: split: expected one of {', '.join(SPLITS)}, got {split!r}")

    return EpisodeSpec(
        id=str(data.get("id") or path.stem),
        title=str(data.get("title", "")),
        task=task,
        reference_length=reference_length,
        dialogue=dialogue,
        world=world_data,
        planner_reply=data.get("planner_reply"),
        annotations=_load_annotations(data.get("annotations")),
        budgets={k: int(v) for k, v in budgets.items()},
        split=split,
        path=path,
    )


def create_reasoner(config: ReasonerConfig) -> Reasoner:
    """Build the configured reasoner backend.

    Raises:
        ValueError: On an unknown backend name.
    """
    if config.backend == "scripted":
        from recovery_agent.reasoner.scripted import ScriptedReasoner

        return ScriptedReasoner()
    if config.backend == "http":
        from recovery_agent.reasoner.http import HttpReasoner

        return HttpReasoner(config)
    raise ValueError(f"Unknown reasoner backend: {config.backend!r}")


def crashed_result(spec: EpisodeSpec, error: BaseException) -> EpisodeResult:
    """Result recorded for an episode that raised unexpectedly."""
    return EpisodeResult(
        episode_id=spec.id,
        task=spec.task.task,
        success=False,
        satisfied=0,
        total=0,
        actions_taken=0,
        failed_actions=0,
        reference_length=spec.reference_length,
        plw_sr=0.0,
        plw_gc=0.0,
        termination="crash",
        error=f"{type(error).__name__}: {error}",
        split=spec.split,
    )


def run_episode(
    spec: EpisodeSpec,
    config: EpisodeConfig | None = None,
    reasoner: Reasoner | None = None,
    pool: Sequence[Demonstration] | None = None,
    search_examples: Sequence[SearchExample] | None = None,
) -> EpisodeResult:
    """Explore, plan, execute with recovery and score one episode.

    Args:
        spec: Episode to run.
        config: Stages, backend and budgets.
        reasoner: Backend to use instead of building one from ``config``.
        pool: Demonstration pool for plan retrieval.
        search_examples: Fixed search demonstrations.

    Returns:
        EpisodeResult; budget exhaustion and plan errors are reported, not raised.
    """
    with episode_scope(spec.id):
        return _run_episode(spec, config or EpisodeConfig(), reasoner, pool, search_examples)


def _run_episode(
    spec: EpisodeSpec,
    config: EpisodeConfig,
    reasoner: Reasoner | None,
    pool: Sequence[Demonstration] | None,
    search_examples: Sequence[SearchExample] | None,
) -> EpisodeResult:
    reasoner = reasoner or create_reasoner(config.reasoner)
    pool = load_demonstrations() if pool is None else pool
    search_examples = load_search_examples() if search_examples is None else search_examples
    goal_task = config.task_override or spec.task

    world = spec.build_world()
    executor = Executor(world, config.budget_for(spec), seed=config.seed or world.rng_seed)
    termination = "completed"
    error: str | None = None
    plan_text: list[str] = []
    runner: PlanRunner | None = None
    logger.info(f"Started: {goal_task.describe()} (stages {config.stages.label})")

    try:
        executor.explore_initial()
        try:
            plan = generate_plan(spec.dialogue, reasoner, pool, spec.planner_reply)
        except PlanError as e:
            termination, error = "plan_error", str(e)
            logger.warning(f"Plan rejected: {e}")
        else:
            plan_text = [str(s) for s in plan.subgoals]
            if config.stages.search:
                locations = plan.object_locations
                executor.search = lambda ref: search_for(ref, locations, reasoner, search_examples)
            runner = PlanRunner(executor, RecoveryChain(reasoner, config.stages), plan.task, config.recovery, goal_task)
            runner.run(plan.subgoals)
    except BudgetExhausted as e:
        termination = e.reason
        logger.info(f"Stopped: {e}")

    if config.trace_dir is not None:
        executor.trace.write_jsonl(config.trace_dir / f"{spec.id}.jsonl")

    satisfied, total = evaluate_goals(goal_task, executor.world)
    success = termination == "completed" and satisfied == total
    ratio = satisfied / total if total else 0.0
    actions = executor.trace.actions_taken
    flow = runner.flow if runner is not None else StageFlow()
    result = EpisodeResult(
        episode_id=spec.id,
        task=goal_task.task,
        success=success,
        satisfied=satisfied,
        total=total,
        actions_taken=actions,
        failed_actions=executor.trace.failed_actions,
        reference_length=spec.reference_length,
        plw_sr=compute_plw(1.0 if success else 0.0, spec.reference_length, actions),
        plw_gc=compute_plw(ratio, spec.reference_length, actions),
        termination=termination,
        error=error,
        plan=plan_text,
        recoveries=[r.to_dict() for r in runner.recoveries] if runner is not None else [],
        stage_flow=flow.to_dict(),
        stage4_rounds=flow.stage4_rounds,
        split=spec.split,
        failure_reasons=dict(executor.trace.subgoal_failures),
    )
    logger.info(
        f"Finished: {'success' if success else 'failure'} ({satisfied}/{total}), "
        f"{actions} actions, {result.failed_actions} failed, {termination}"
    )
    return result
