"""Symbolic household world: state types, spec loading and the step function."""

from __future__ import annotations

from recovery_agent.world.loader import WorldSpecError, load_world, load_world_file
from recovery_agent.world.sim import check_invariants, is_reachable, is_visible, step, visible_objects
from recovery_agent.world.state import (
    ActionKind,
    ActionOutcome,
    AgentState,
    FailureReason,
    LowLevelAction,
    ObjectInstance,
    ObjectProperties,
    WorldState,
)

__all__ = [
    "ActionKind",
    "ActionOutcome",
    "AgentState",
    "FailureReason",
    "LowLevelAction",
    "ObjectInstance",
    "ObjectProperties",
    "WorldSpecError",
    "WorldState",
    "check_invariants",
    "is_reachable",
    "is_visible",
    "load_world",
    "load_world_file",
    "step",
    "visible_objects",
]
