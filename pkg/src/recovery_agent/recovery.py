"""Conditional multi-stage failure recovery.

Stages 1 to 3 run while the plan executes and each only fires on the previous stage's
answer: importance, then missing preconditions, then a workaround. Stage 4 reflects on
the finished plan when goal conditions remain unmet.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Final

from recovery_agent.config import RecoveryConfig
from recovery_agent.executor.executor import Executor
from recovery_agent.executor.subgoal import Subgoal
from recovery_agent.reasoner.base import OracleContext, Reasoner, ReasonerError, ReasonerRequest, TemplateId
from recovery_agent.scene import SceneFact, build_scene, render_scene
from recovery_agent.tasks import TaskSpec, evaluate_goals
from recovery_agent.utils.logger import get_logger
from recovery_agent.world.state import FailureReason

__all__ = [
    "DEFAULT_JUSTIFICATION",
    "STATUSES",
    "FailureContext",
    "PlanRunner",
    "RecoveryChain",
    "RecoveryDecision",
    "RecoveryRecord",
    "StageFlags",
    "StageFlow",
    "StageRecord",
    "Verdict",
    "render_history",
]

logger = get_logger(__name__)

STATUSES: Final[tuple[str, ...]] = ("pending", "succeeded", "failed", "skipped", "replaced")
DEFAULT_JUSTIFICATION: Final[str] = "it is part of the plan for the task"
_STAGE_NAMES: Final[tuple[str, ...]] = ("s1", "s2", "s3", "s4")


@dataclass(frozen=True)
class StageFlags:
    """Which recovery stages and whether object search are enabled."""

    s1: bool = True
    s2: bool = True
    s3: bool = True
    s4: bool = True
    search: bool = True

    @classmethod
    def parse(cls, stages: str, search: bool = True) -> StageFlags:
        """Build flags from a comma-separated list such as ``s1,s3``.

        ``all`` enables every stage, ``none`` or an empty string disables them all.

        Raises:
            ValueError: On an unknown stage name.
        """
        text = stages.strip().lower()
        if text == "all":
            return cls(search=search)
        names = {part.strip() for part in text.split(",") if part.strip() and part.strip() != "none"}
        unknown = names - set(_STAGE_NAMES)
        if unknown:
            raise ValueError(f"Unknown stage(s): {', '.join(sorted(unknown))}")
        return cls(*(name in names for name in _STAGE_NAMES), search=search)

    @property
    def label(self) -> str:
        """Short form such as ``s1,s2,s3,s4``."""
        enabled = [name for name in _STAGE_NAMES if getattr(self, name)]
        return ",".join(enabled) or "none"

    def to_dict(self) -> dict[str, bool]:
        """Serialize for reports."""
        return {name: getattr(self, name) for name in (*_STAGE_NAMES, "search")}


class Verdict(str, Enum):
    """What the plan runner should do with a failed subgoal."""

    SKIP = "skip"
    RETRY_AFTER = "retry_after"
    REPLACE_WITH = "replace_with"
    GIVE_UP = "give_up"


def render_history(plan: Iterable[tuple[Subgoal, str]]) -> str:
    """Render one ``<subgoal> - <status>`` line per plan step."""
    return "\n".join(f"{subgoal} - {status}" for subgoal, status in plan)


@dataclass
class FailureContext:
    """Everything the stage prompts need about one failure."""

    task: TaskSpec
    plan: list[tuple[Subgoal, str]]
    failing_subgoal: Subgoal
    scene: list[SceneFact]
    failure_reason: FailureReason | None = None
    stage1_justification: str | None = None
    oracle: OracleContext = field(default_factory=OracleContext)

    def slots(self, with_justification: bool) -> dict[str, str]:
        """Slot values shared by the stage 1 to 3 prompts."""
        slots = {
            "TASK": self.task.describe(),
            "EXECUTION_HISTORY": render_history(self.plan),
            "FAILING_SUBGOAL": str(self.failing_subgoal),
            "SCENE_REPRESENTATION": render_scene(self.scene),
        }
        if with_justification:
            slots["JUSTIFICATION_FROM_STAGE_1"] = self.stage1_justification or DEFAULT_JUSTIFICATION
        return slots


@dataclass(frozen=True)
class StageRecord:
    """One stage that fired and what it answered."""

    stage: int
    reply: dict[str, Any]


@dataclass(frozen=True)
class RecoveryDecision:
    """Outcome of one pass through stages 1 to 3."""

    verdict: Verdict
    steps: tuple[Subgoal, ...] = ()
    stage_trace: tuple[StageRecord, ...] = ()

    @property
    def stages(self) -> list[int]:
        """Stages that fired, in order."""
        return [record.stage for record in self.stage_trace]


class RecoveryChain:
    """Runs the recovery stages against a reasoner.

    Disabled stages return their pass-through value and are left out of the stage trace.
    Reasoner errors fall back to the same pass-through values.
    """

    def __init__(self, reasoner: Reasoner, flags: StageFlags | None = None) -> None:
        """Initialize the chain.

        Args:
            reasoner: Backend answering the stage prompts.
            flags: Enabled stages.
        """
        self.reasoner = reasoner
        self.flags = flags or StageFlags()

    def _ask(self, template_id: TemplateId, slots: dict[str, str], oracle: OracleContext) -> dict[str, Any]:
        return self.reasoner.complete(ReasonerRequest(template_id, slots, oracle)).parsed

    def stage1_importance(self, ctx: FailureContext) -> tuple[bool, str]:
        """Ask whether the failing subgoal matters; stores the justification in ``ctx``."""
        try:
            reply = self._ask(TemplateId.STAGE1, ctx.slots(with_justification=False), ctx.oracle)
        except ReasonerError as e:
            logger.warning(f"Stage 1 failed for {ctx.failing_subgoal}, assuming important: {e}")
            return True, DEFAULT_JUSTIFICATION
        justification = reply["justification"] or DEFAULT_JUSTIFICATION
        ctx.stage1_justification = justification
        return reply["important"], justification

    def stage2_preconditions(self, ctx: FailureContext) -> tuple[bool, list[Subgoal]]:
        """Ask for subgoals that should have run before the failing one."""
        try:
            reply = self._ask(TemplateId.STAGE2, ctx.slots(with_justification=True), ctx.oracle)
        except ReasonerError as e:
            logger.warning(f"Stage 2 failed for {ctx.failing_subgoal}, assuming nothing missing: {e}")
            return False, []
        return reply["missing"], list(reply["actions"])

    def stage3_workaround(self, ctx: FailureContext) -> list[Subgoal]:
        """Ask for subgoals that achieve the same effect another way."""
        try:
            reply = self._ask(TemplateId.STAGE3, ctx.slots(with_justification=True), ctx.oracle)
        except ReasonerError as e:
            logger.warning(f"Stage 3 failed for {ctx.failing_subgoal}: {e}")
            return []
        return list(reply["solution"])

    def stage4_post_execution(
        self, task: TaskSpec, plan: list[tuple[Subgoal, str]], scene: list[SceneFact], oracle: OracleContext
    ) -> list[Subgoal]:
        """Ask what still has to be done once the plan is exhausted."""
        slots = {
            "TASK": task.describe(),
            "EXECUTION_HISTORY": render_history(plan),
            "SCENE_REPRESENTATION": render_scene(scene),
        }
        try:
            reply = self._ask(TemplateId.STAGE4, slots, oracle)
        except ReasonerError as e:
            logger.warning(f"Stage 4 failed: {e}")
            return []
        return list(reply["solution"])

    def run_recovery(self, ctx: FailureContext) -> RecoveryDecision:
        """Chain stages 1 to 3 for a failed subgoal.

        Args:
            ctx: Failure context, built right after the failure.

        Returns:
            RecoveryDecision with the verdict and the stages that fired.
        """
        trace: list[StageRecord] = []
        if self.flags.s1:
            important, justification = self.stage1_importance(ctx)
            trace.append(StageRecord(1, {"important": important, "justification": justification}))
            if not important:
                return RecoveryDecision(Verdict.SKIP, (), tuple(trace))

        if self.flags.s2:
            missing, prefix = self.stage2_preconditions(ctx)
            trace.append(StageRecord(2, {"missing": missing, "actions": [str(s) for s in prefix]}))
            if missing and prefix:
                return RecoveryDecision(Verdict.RETRY_AFTER, tuple(prefix), tuple(trace))

        if self.flags.s3:
            steps = self.stage3_workaround(ctx)
            trace.append(StageRecord(3, {"solution": [str(s) for s in steps]}))
            if steps:
                return RecoveryDecision(Verdict.REPLACE_WITH, tuple(steps), tuple(trace))

        return RecoveryDecision(Verdict.GIVE_UP, (), tuple(trace))


@dataclass(frozen=True)
class RecoveryRecord:
    """One recovery chain or stage-4 round, for the episode report."""

    subgoal: str
    depth: int
    verdict: str
    stages: tuple[int, ...]
    steps: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        """Serialize for reports."""
        return {
            "subgoal": self.subgoal,
            "depth": self.depth,
            "verdict": self.verdict,
            "stages": list(self.stages),
            "steps": list(self.steps),
        }


@dataclass
class StageFlow:
    """How many plan subgoals reached each stage."""

    plan_subgoals: int = 0
    failed_subgoals: int = 0
    stage1: int = 0
    stage2: int = 0
    stage3: int = 0
    stage4_rounds: int = 0

    def to_dict(self) -> dict[str, int]:
        """Serialize for reports."""
        return {
            "plan_subgoals": self.plan_subgoals,
            "failed_subgoals": self.failed_subgoals,
            "stage1": self.stage1,
            "stage2": self.stage2,
            "stage3": self.stage3,
            "stage4_rounds": self.stage4_rounds,
        }


class PlanRunner:
    """Executes a plan, routing failures through the recovery chain.

    ``BudgetExhausted`` from the executor propagates to the caller.
    """

    def __init__(
        self,
        executor: Executor,
        chain: RecoveryChain,
        task: TaskSpec,
        config: RecoveryConfig | None = None,
        goal_task: TaskSpec | None = None,
    ) -> None:
        """Initialize the runner.

        Args:
            executor: Executor owning the episode's world.
            chain: Recovery chain.
            task: Task as the agent understood it; shown in prompts.
            config: Bounds on chains per subgoal, stage-4 rounds and nesting.
            goal_task: Task whose goal conditions gate stage 4; defaults to ``task``.
        """
        self.executor = executor
        self.chain = chain
        self.task = task
        self.goal_task = goal_task or task
        self.config = config or RecoveryConfig()
        self.plan: list[list[Any]] = []
        self.mentioned: list[Subgoal] = []
        self.recoveries: list[RecoveryRecord] = []
        self.flow = StageFlow()
        self._reached: set[tuple[int, int]] = set()

    # -- contexts --------------------------------------------------------------------

    def _statuses(self) -> list[tuple[Subgoal, str]]:
        return [(subgoal, status) for subgoal, status in self.plan]

    def _scene(self) -> list[SceneFact]:
        return build_scene(self.executor.memory, self.mentioned, self.executor.world.agent.held_object)

    def _oracle(self, failing: Subgoal | None = None, reason: FailureReason | None = None) -> OracleContext:
        executor = self.executor
        return OracleContext(
            task=self.task,
            plan=tuple(self._statuses()),
            failing_subgoal=failing,
            failure_reason=reason,
            memory=executor.memory.snapshot(),
            held=executor.world.agent.held_object,
            agent_cell=executor.world.agent.cell,
            aliases=dict(executor.aliases),
        )

    def failure_context(self, subgoal: Subgoal, reason: FailureReason | None) -> FailureContext:
        """Build a fresh failure context for the current state."""
        return FailureContext(
            task=self.task,
            plan=self._statuses(),
            failing_subgoal=subgoal,
            scene=self._scene(),
            failure_reason=reason,
            oracle=self._oracle(subgoal, reason),
        )

    # -- execution -------------------------------------------------------------------

    def run(self, plan: Sequence[Subgoal]) -> None:
        """Run every plan subgoal, then the stage-4 loop."""
        self.plan = [[subgoal, "pending"] for subgoal in plan]
        self.mentioned = list(plan)
        self.flow.plan_subgoals = len(self.plan)
        for index in range(len(self.plan)):
            self.plan[index][1] = self._run(self.plan[index][0], depth=0, index=index)
        self.reflect()

    def _register_aliases(self, failed: Subgoal, steps: Sequence[Subgoal]) -> None:
        if not steps or steps[0].verb != failed.verb:
            return
        for old, new in zip(failed.args, steps[0].args, strict=True):
            if old != new:
                logger.info(f"Substituting {new} for {old}")
                self.executor.aliases[old] = new

    def _note_stages(self, index: int | None, stages: Iterable[int]) -> None:
        if index is None:
            return
        for stage in stages:
            if (index, stage) in self._reached:
                continue
            self._reached.add((index, stage))
            if stage == 1:
                self.flow.stage1 += 1
            elif stage == 2:
                self.flow.stage2 += 1
            elif stage == 3:
                self.flow.stage3 += 1

    def _run(self, subgoal: Subgoal, depth: int, index: int | None = None) -> str:
        """Execute one subgoal with recovery; returns its final status."""
        if subgoal not in self.mentioned:
            self.mentioned.append(subgoal)
        outcome = self.executor.execute_subgoal(subgoal)
        if outcome.success:
            return "succeeded"
        if index is not None:
            self.flow.failed_subgoals += 1
            self.plan[index][1] = "failed"
        if depth > self.config.max_depth:
            return "failed"

        reason = outcome.reason
        for _ in range(self.config.max_chains_per_subgoal):
            decision = self.chain.run_recovery(self.failure_context(subgoal, reason))
            self._note_stages(index, decision.stages)
            self.recoveries.append(
                RecoveryRecord(
                    subgoal=str(subgoal),
                    depth=depth,
                    verdict=decision.verdict.value,
                    stages=tuple(decision.stages),
                    steps=tuple(str(s) for s in decision.steps),
                )
            )
            logger.info(f"Recovery for {subgoal}: {decision.verdict.value} (stages {decision.stages})")

            if decision.verdict == Verdict.SKIP:
                return "skipped"
            if decision.verdict == Verdict.GIVE_UP:
                return "failed"
            if decision.verdict == Verdict.REPLACE_WITH:
                self._register_aliases(subgoal, decision.steps)
                results = [self._run(step, depth + 1) for step in decision.steps]
                return "replaced" if all(r != "failed" for r in results) else "failed"

            for step in decision.steps:
                self._run(step, depth + 1)
            outcome = self.executor.execute_subgoal(subgoal)
            if outcome.success:
                return "succeeded"
            reason = outcome.reason
        return "failed"

    def _goals_unmet(self) -> bool:
        satisfied, total = evaluate_goals(self.goal_task, self.executor.world)
        return satisfied < total

    def _budget_left(self) -> bool:
        executor = self.executor
        return (
            executor.trace.actions_taken < executor.budget.max_actions
            and executor.trace.charged_failures < executor.budget.max_failures
        )

    def reflect(self) -> int:
        """Run the stage-4 loop after the plan; returns the number of rounds."""
        rounds = 0
        while self.chain.flags.s4 and rounds < self.config.max_stage4_rounds:
            if not self._goals_unmet() or not self._budget_left():
                break
            steps = self.chain.stage4_post_execution(self.task, self._statuses(), self._scene(), self._oracle())
            rounds += 1
            self.flow.stage4_rounds += 1
            self.recoveries.append(RecoveryRecord("<post-execution>", 0, "reflect", (4,), tuple(str(s) for s in steps)))
            logger.info(f"Stage 4 round {rounds}: {len(steps)} steps")
            if not steps:
                break
            self.mentioned.extend(s for s in steps if s not in self.mentioned)
            start = len(self.plan)
            self.plan.extend([step, "pending"] for step in steps)
            for offset, step in enumerate(steps):
                self.plan[start + offset][1] = self._run(step, depth=1)
        return rounds
