"""Execution trace and the episode action/failure budgets."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Final

from recovery_agent.world.state import ActionOutcome, LowLevelAction

__all__ = ["FAILURE_COUNTING_MODES", "Budget", "BudgetExhausted", "ExecutionTrace", "TraceRecord"]

FAILURE_COUNTING_MODES: Final[tuple[str, ...]] = ("per_action", "per_subgoal")


class BudgetExhausted(Exception):
    """Raised when the episode runs out of actions or failures."""

    def __init__(self, reason: str) -> None:
        """Initialize with ``max_actions`` or ``max_failures``."""
        super().__init__(f"Budget exhausted: {reason}")
        self.reason = reason


@dataclass(frozen=True)
class TraceRecord:
    """One emitted low-level action."""

    step: int
    action: str
    target: str | None
    success: bool
    reason: str | None
    subgoal: str | None


@dataclass
class ExecutionTrace:
    """Every low-level action of an episode in order.

    ``failed_actions`` counts every failure outcome; ``charged_failures`` counts the
    failures charged to the budget, which differ only under per-subgoal counting.
    ``subgoal_failures`` counts failed subgoal executions by reason.
    """

    records: list[TraceRecord] = field(default_factory=list)
    failed_actions: int = 0
    charged_failures: int = 0
    subgoal_failures: Counter[str] = field(default_factory=Counter)

    @property
    def actions_taken(self) -> int:
        """Number of actions emitted so far."""
        return len(self.records)

    def record(
        self, action: LowLevelAction, outcome: ActionOutcome, subgoal: str | None, charge: bool = True
    ) -> TraceRecord:
        """Append one action and update counters."""
        entry = TraceRecord(
            step=len(self.records) + 1,
            action=action.kind.value,
            target=action.target,
            success=outcome.success,
            reason=outcome.reason.value if outcome.reason else None,
            subgoal=subgoal,
        )
        self.records.append(entry)
        if not outcome.success:
            self.failed_actions += 1
            if charge:
                self.charged_failures += 1
        return entry

    def to_jsonl(self) -> str:
        """Render one JSON object per line."""
        return "".join(json.dumps(asdict(r), sort_keys=True) + "\n" for r in self.records)

    def write_jsonl(self, path: Path) -> None:
        """Write the trace export to a file."""
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_jsonl(), encoding="utf-8")


@dataclass(frozen=True)
class Budget:
    """Episode limits on emitted actions and failed actions."""

    max_actions: int = 1000
    max_failures: int = 30
    failure_counting: str = "per_action"

    def __post_init__(self) -> None:
        """Validate the limits."""
        if self.max_actions <= 0 or self.max_failures <= 0:
            raise ValueError("Budgets must be positive")
        if self.failure_counting not in FAILURE_COUNTING_MODES:
            raise ValueError(f"failure_counting must be one of {', '.join(FAILURE_COUNTING_MODES)}")

    @property
    def per_action(self) -> bool:
        """True when every failed low-level action is charged."""
        return self.failure_counting == "per_action"

    def before_action(self, trace: ExecutionTrace) -> None:
        """Raise if no further action may be emitted."""
        if trace.actions_taken >= self.max_actions:
            raise BudgetExhausted("max_actions")

    def after_failure(self, trace: ExecutionTrace) -> None:
        """Raise once the failure budget is used up."""
        if trace.charged_failures >= self.max_failures:
            raise BudgetExhausted("max_failures")
