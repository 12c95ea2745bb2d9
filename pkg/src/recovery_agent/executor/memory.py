"""Object memory: the agent's record of every object it has observed."""

from __future__ import annotations

import copy
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from typing import Any

from recovery_agent.world.sim import visible_objects
from recovery_agent.world.state import (
    Affordances,
    AgentState,
    Cell,
    FloorGrid,
    HeightBand,
    ObjectInstance,
    ObjectProperties,
    WorldState,
)

__all__ = ["MemoryEntry", "ObjectMemory", "believed_world"]


@dataclass(frozen=True)
class MemoryEntry:
    """Snapshot of one object as last seen."""

    object_id: str
    category: str
    cell: Cell
    height: HeightBand
    properties: ObjectProperties
    affordances: Affordances
    parent: str | None
    children: tuple[str, ...]
    last_seen_step: int

    def to_dict(self) -> dict[str, Any]:
        """Serialize for oracle contexts and debugging."""
        return {
            "id": self.object_id,
            "category": self.category,
            "cell": list(self.cell),
            "height": self.height.value,
            "properties": vars(self.properties).copy(),
            "parent": self.parent,
            "children": list(self.children),
            "last_seen_step": self.last_seen_step,
        }


class ObjectMemory:
    """Dictionary of observed objects keyed by object id.

    Perception is ground truth, so an entry always equals the world's state at the step
    it was last refreshed.
    """

    def __init__(self) -> None:
        """Create an empty memory."""
        self._entries: dict[str, MemoryEntry] = {}

    def observe(self, world: WorldState, step: int) -> list[str]:
        """Absorb everything currently visible.

        Args:
            world: Current world.
            step: Index of the action that produced this world.

        Returns:
            Ids seen for the first time.
        """
        new_ids: list[str] = []
        for object_id in visible_objects(world):
            obj = world.objects[object_id]
            if object_id not in self._entries:
                new_ids.append(object_id)
            self._entries[object_id] = MemoryEntry(
                object_id=object_id,
                category=obj.category,
                cell=obj.cell,
                height=obj.height,
                properties=copy.copy(obj.properties),
                affordances=obj.affordances,
                parent=obj.parent,
                children=tuple(obj.children),
                last_seen_step=step,
            )
        return new_ids

    def forget(self, object_id: str) -> None:
        """Drop an entry, e.g. after the object was sliced."""
        self._entries.pop(object_id, None)

    def get(self, object_id: str) -> MemoryEntry | None:
        """Return the entry for an id, if known."""
        return self._entries.get(object_id)

    def __contains__(self, object_id: object) -> bool:
        return object_id in self._entries

    def __iter__(self) -> Iterator[MemoryEntry]:
        return iter(sorted(self._entries.values(), key=lambda e: e.object_id))

    def __len__(self) -> int:
        return len(self._entries)

    def instances_of(self, category: str) -> list[MemoryEntry]:
        """Return known instances of a category sorted by id."""
        return [e for e in self if e.category == category]

    def top_level_cells(self, exclude: str | None = None) -> set[Cell]:
        """Cells taken by known parentless objects, ignoring ``exclude`` (the held object)."""
        return {e.cell for e in self._entries.values() if e.parent is None and e.object_id != exclude}

    def ancestors(self, object_id: str) -> list[MemoryEntry]:
        """Known parent chain of an object, innermost first."""
        chain: list[MemoryEntry] = []
        entry = self._entries.get(object_id)
        seen: set[str] = set()
        while entry is not None and entry.parent is not None and entry.parent not in seen:
            seen.add(entry.parent)
            entry = self._entries.get(entry.parent)
            if entry is not None:
                chain.append(entry)
        return chain

    def snapshot(self) -> dict[str, MemoryEntry]:
        """Return a shallow copy of all entries."""
        return dict(self._entries)


def believed_world(entries: Mapping[str, MemoryEntry], cell: Cell, held: str | None) -> WorldState:
    """Rebuild a world from remembered objects only.

    Unobserved objects are absent and observed ones keep their last-seen state. Containment
    follows each child's own entry, so a stale container listing never claims an object
    that was seen elsewhere later.

    Args:
        entries: Memory snapshot keyed by object id.
        cell: Agent cell.
        held: Object in the agent's hand, if any.

    Returns:
        WorldState for goal checks; it is not meant to be stepped.
    """
    objects: dict[str, ObjectInstance] = {}
    for object_id, entry in entries.items():
        parent = entry.parent if entry.parent in entries and object_id != held else None
        objects[object_id] = ObjectInstance(
            id=object_id,
            category=entry.category,
            cell=entry.cell,
            height=entry.height,
            properties=copy.copy(entry.properties),
            affordances=entry.affordances,
            parent=parent,
        )
    for object_id, entry in entries.items():
        container = objects[object_id]
        listed = [c for c in entry.children if c in objects and objects[c].parent == object_id]
        extra = sorted(o.id for o in objects.values() if o.parent == object_id and o.id not in listed)
        container.children = listed + extra
    cells = [o.cell for o in objects.values()] + [cell]
    grid = FloorGrid(width=max(c[0] for c in cells) + 1, height=max(c[1] for c in cells) + 1)
    agent = AgentState(cell=cell, held_object=held if held in objects else None)
    return WorldState(objects=objects, agent=agent, grid=grid)
