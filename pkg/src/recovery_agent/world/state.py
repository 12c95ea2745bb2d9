"""Symbolic world state types shared by the simulator, executor and tasks."""

from __future__ import annotations

import copy
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum
from typing import Final

__all__ = [
    "ActionKind",
    "ActionOutcome",
    "Affordances",
    "AgentState",
    "Cell",
    "FailureReason",
    "FloorGrid",
    "HeightBand",
    "INTERACTIVE_KINDS",
    "LowLevelAction",
    "ObjectInstance",
    "ObjectProperties",
    "WorldState",
    "YAW_VECTORS",
]

Cell = tuple[int, int]

# Yaw 0 faces north, i.e. towards decreasing y.
YAW_VECTORS: Final[dict[int, Cell]] = {0: (0, -1), 90: (1, 0), 180: (0, 1), 270: (-1, 0)}


class HeightBand(str, Enum):
    """Discrete height of an object, each matched by one camera pitch."""

    FLOOR = "floor"
    COUNTER = "counter"
    UPPER = "upper"

    @property
    def pitch(self) -> int:
        """Camera pitch that looks straight at this band."""
        return {"floor": -30, "counter": 0, "upper": 30}[self.value]


class ActionKind(str, Enum):
    """Low-level action kinds understood by the simulator."""

    FORWARD = "Forward"
    BACKWARD = "Backward"
    ROTATE_LEFT = "RotateLeft"
    ROTATE_RIGHT = "RotateRight"
    LOOK_UP = "LookUp"
    LOOK_DOWN = "LookDown"
    STRAFE_LEFT = "StrafeLeft"
    STRAFE_RIGHT = "StrafeRight"
    PICKUP = "Pickup"
    PLACE = "Place"
    OPEN = "Open"
    CLOSE = "Close"
    TOGGLE_ON = "ToggleOn"
    TOGGLE_OFF = "ToggleOff"
    SLICE = "Slice"
    POUR = "Pour"


INTERACTIVE_KINDS: Final[frozenset[ActionKind]] = frozenset({
    ActionKind.PICKUP,
    ActionKind.PLACE,
    ActionKind.OPEN,
    ActionKind.CLOSE,
    ActionKind.TOGGLE_ON,
    ActionKind.TOGGLE_OFF,
    ActionKind.SLICE,
    ActionKind.POUR,
})


class FailureReason(str, Enum):
    """Closed set of reasons an action or subgoal can fail."""

    OBJECT_NOT_FOUND = "object_not_found"
    NOT_IN_RANGE = "not_in_range"
    HOLDING_OTHER_OBJECT = "holding_other_object"
    HAND_EMPTY = "hand_empty"
    NO_KNIFE = "no_knife"
    RECEPTACLE_FULL = "receptacle_full"
    RECEPTACLE_CLOSED = "receptacle_closed"
    ALREADY_OPEN = "already_open"
    ALREADY_CLOSED = "already_closed"
    ALREADY_ON = "already_on"
    ALREADY_OFF = "already_off"
    TOGGLED_ON = "toggled_on"
    NOT_APPLICABLE = "not_applicable"
    BLOCKED = "blocked"
    NO_PATH = "no_path"
    NAVIGATION_FAILED = "navigation_failed"


@dataclass(frozen=True)
class Affordances:
    """What can be done with an object."""

    pickupable: bool = False
    receptacle: bool = False
    openable: bool = False
    toggleable: bool = False
    sliceable: bool = False
    fillable: bool = False
    cookable: bool = False
    dirtyable: bool = False
    capacity: int = 3


@dataclass
class ObjectProperties:
    """Mutable state flags of an object."""

    is_toggled: bool = False
    is_sliced: bool = False
    is_filled_with_water: bool = False
    is_clean: bool = True
    is_open: bool = False
    is_cooked: bool = False
    cooked_in_water: bool = False
    filled_with_coffee: bool = False

    @property
    def is_filled(self) -> bool:
        """True when the object holds any liquid."""
        return self.is_filled_with_water or self.filled_with_coffee


@dataclass
class ObjectInstance:
    """A single object in the room.

    Children are kept in insertion order so that rendered containment lists are stable.
    """

    id: str
    category: str
    cell: Cell
    height: HeightBand
    properties: ObjectProperties = field(default_factory=ObjectProperties)
    affordances: Affordances = field(default_factory=Affordances)
    parent: str | None = None
    children: list[str] = field(default_factory=list)


@dataclass
class AgentState:
    """Pose and hand of the agent."""

    cell: Cell
    yaw: int = 0
    pitch: int = 0
    held_object: str | None = None

    @property
    def facing(self) -> Cell:
        """Unit vector of the current heading."""
        return YAW_VECTORS[self.yaw]


@dataclass(frozen=True)
class FloorGrid:
    """Rectangular floor with static obstacles.

    ``carry_blocked`` cells are passable with an empty hand only.
    """

    width: int
    height: int
    blocked: frozenset[Cell] = frozenset()
    carry_blocked: frozenset[Cell] = frozenset()

    def in_bounds(self, cell: Cell) -> bool:
        """Return True if the cell lies inside the grid."""
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height


@dataclass(frozen=True)
class LowLevelAction:
    """One simulator action; interactive kinds carry exactly one target."""

    kind: ActionKind
    target: str | None = None

    def __post_init__(self) -> None:
        """Validate the target against the action kind."""
        if self.kind in INTERACTIVE_KINDS and not self.target:
            raise ValueError(f"{self.kind.value} requires a target object id")
        if self.kind not in INTERACTIVE_KINDS and self.target is not None:
            raise ValueError(f"{self.kind.value} does not take a target")

    def __str__(self) -> str:
        """Render as ``Kind(target)`` or ``Kind()``."""
        return f"{self.kind.value}({self.target or ''})"


@dataclass
class WorldState:
    """Full symbolic snapshot of one episode's environment."""

    objects: dict[str, ObjectInstance]
    agent: AgentState
    grid: FloorGrid
    rng_seed: int = 0

    def copy(self) -> WorldState:
        """Return a deep, independent copy."""
        return copy.deepcopy(self)

    def get(self, object_id: str) -> ObjectInstance | None:
        """Return the object with the given id, if present."""
        return self.objects.get(object_id)

    def ancestors(self, object_id: str) -> Iterator[ObjectInstance]:
        """Yield the parent chain of an object, innermost first."""
        current = self.objects[object_id].parent
        seen: set[str] = set()
        while current is not None and current not in seen:
            seen.add(current)
            parent = self.objects[current]
            yield parent
            current = parent.parent

    def descendants(self, object_id: str, max_depth: int | None = None) -> list[str]:
        """Return the ids contained in an object, breadth first."""
        result: list[str] = []
        frontier = [(child, 1) for child in self.objects[object_id].children]
        while frontier:
            child, depth = frontier.pop(0)
            result.append(child)
            if max_depth is None or depth < max_depth:
                frontier.extend((grandchild, depth + 1) for grandchild in self.objects[child].children)
        return result

    def root_of(self, object_id: str) -> ObjectInstance:
        """Return the outermost container of an object (the object itself if top-level)."""
        root = self.objects[object_id]
        for ancestor in self.ancestors(object_id):
            root = ancestor
        return root

    def is_hidden(self, object_id: str) -> bool:
        """Return True if any ancestor is a closed openable container."""
        return any(a.affordances.openable and not a.properties.is_open for a in self.ancestors(object_id))

    def is_held_or_carried(self, object_id: str) -> bool:
        """Return True for the held object and anything inside it."""
        held = self.agent.held_object
        if held is None:
            return False
        return object_id == held or self.root_of(object_id).id == held

    def occupied_cells(self) -> frozenset[Cell]:
        """Cells taken by top-level objects that rest on the floor grid."""
        held = self.agent.held_object
        return frozenset(o.cell for o in self.objects.values() if o.parent is None and o.id != held)

    def is_walkable(self, cell: Cell, carrying: bool | None = None) -> bool:
        """Return True if the agent may stand on the cell.

        Args:
            cell: Grid cell to test.
            carrying: Whether the agent carries something; defaults to the current hand state.
        """
        if not self.grid.in_bounds(cell) or cell in self.grid.blocked:
            return False
        if cell in self.occupied_cells():
            return False
        if carrying is None:
            carrying = self.agent.held_object is not None
        return not (carrying and cell in self.grid.carry_blocked)

    def instances_of(self, category: str) -> list[ObjectInstance]:
        """Return all objects of a category sorted by id."""
        return sorted((o for o in self.objects.values() if o.category == category), key=lambda o: o.id)


@dataclass(frozen=True)
class ActionOutcome:
    """Result of one simulator step; ``world`` is unchanged on failure."""

    success: bool
    world: WorldState
    reason: FailureReason | None = None
