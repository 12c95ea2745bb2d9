"""Subgoal execution: memory, navigation, budgets and traces."""

from __future__ import annotations

from recovery_agent.executor.executor import Executor, SubgoalOutcome
from recovery_agent.executor.memory import MemoryEntry, ObjectMemory, believed_world
from recovery_agent.executor.subgoal import Subgoal, SubgoalParseError, Verb, parse_subgoal
from recovery_agent.executor.trace import Budget, BudgetExhausted, ExecutionTrace, TraceRecord

__all__ = [
    "Budget",
    "BudgetExhausted",
    "ExecutionTrace",
    "Executor",
    "MemoryEntry",
    "ObjectMemory",
    "Subgoal",
    "SubgoalOutcome",
    "SubgoalParseError",
    "TraceRecord",
    "Verb",
    "believed_world",
    "parse_subgoal",
]
