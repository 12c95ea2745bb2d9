"""Pruned textual scene representation used in recovery prompts."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

from recovery_agent.executor.memory import MemoryEntry, ObjectMemory
from recovery_agent.executor.subgoal import Subgoal
from recovery_agent.world.catalog import category_of

__all__ = ["FactKind", "SceneFact", "build_scene", "describe_properties", "join_ids", "relevant_categories", "render_scene"]


class FactKind(str, Enum):
    """Kinds of scene facts, in rendering order."""

    PROPERTY = "property"
    CONTAINMENT = "containment"
    HOLDING = "holding"


@dataclass(frozen=True)
class SceneFact:
    """One parenthesized assertion such as ``(Mug_1 is dirty)``."""

    rendered: str
    kind: FactKind

    def __str__(self) -> str:
        return self.rendered


def join_ids(ids: Iterable[str]) -> str:
    """Join ids as ``A``, ``A and B`` or ``A, B and C``."""
    items = list(ids)
    if len(items) <= 1:
        return "".join(items)
    return f"{', '.join(items[:-1])} and {items[-1]}"


def describe_properties(entry: MemoryEntry) -> list[str]:
    """Return the state phrases shown for an object."""
    props, aff = entry.properties, entry.affordances
    phrases: list[str] = []
    if aff.toggleable and props.is_toggled:
        phrases.append("is toggled on")
    if props.is_sliced:
        phrases.append("is sliced")
    if aff.fillable:
        if props.is_filled_with_water:
            phrases.append("is filled with water")
        elif props.filled_with_coffee:
            phrases.append("is filled with coffee")
        else:
            phrases.append("is not filled with water")
    if aff.dirtyable:
        phrases.append("is clean" if props.is_clean else "is dirty")
    if aff.openable:
        phrases.append("is open" if props.is_open else "is closed")
    if aff.cookable:
        phrases.append("is cooked" if props.is_cooked else "is not cooked")
    return phrases


def relevant_categories(plan: Iterable[Subgoal]) -> set[str]:
    """Categories mentioned by any argument of the plan."""
    return {category_of(arg) for subgoal in plan for arg in subgoal.args}


def build_scene(memory: ObjectMemory, plan: Iterable[Subgoal], held: str | None) -> list[SceneFact]:
    """Build the scene facts for the objects the plan mentions.

    Args:
        memory: Observed objects.
        plan: Current plan, including injected recovery steps.
        held: Object in the agent's hand, if any.

    Returns:
        Facts for relevant objects sorted by id, ending with the holding fact.
    """
    categories = relevant_categories(plan)
    facts: list[SceneFact] = []
    for entry in memory:
        if entry.category not in categories:
            continue
        oid = entry.object_id
        facts.extend(SceneFact(f"({oid} {phrase})", FactKind.PROPERTY) for phrase in describe_properties(entry))
        if entry.parent is not None and oid != held:
            facts.append(SceneFact(f"({oid} in {entry.parent})", FactKind.CONTAINMENT))
        children = [c for c in entry.children if c in memory]
        if children:
            facts.append(SceneFact(f"({oid} contains {join_ids(children)})", FactKind.CONTAINMENT))
    facts.append(SceneFact(f"(agent holding {held or 'nothing'})", FactKind.HOLDING))
    return facts


def render_scene(facts: Iterable[SceneFact]) -> str:
    """Render facts for a prompt slot."""
    return ", ".join(fact.rendered for fact in facts)
