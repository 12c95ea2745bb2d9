"""Deterministic step function and perception for the symbolic household world.

Every handler validates against the incoming state first and only copies it once the
action is known to succeed, so a failed step hands back the very same ``WorldState``.
"""

from __future__ import annotations

from collections.abc import Callable
from typing import Final

from recovery_agent.utils.logger import get_logger
from recovery_agent.world.catalog import (
    COFFEE_VESSELS,
    KNIVES,
    SINKS,
    SLICED_CATEGORIES,
    WATER_VESSELS,
    category_of,
    sliced_category,
    traits_for,
)
from recovery_agent.world.state import (
    ActionKind,
    ActionOutcome,
    Affordances,
    Cell,
    FailureReason,
    HeightBand,
    LowLevelAction,
    ObjectInstance,
    ObjectProperties,
    WorldState,
)

__all__ = [
    "INTERACTION_RANGE",
    "SLICE_PIECES",
    "VIEW_RANGE",
    "check_invariants",
    "in_view_cone",
    "is_reachable",
    "is_visible",
    "step",
    "visible_objects",
]

logger = get_logger(__name__)

VIEW_RANGE: Final[int] = 6
INTERACTION_RANGE: Final[int] = 2
PITCH_LIMIT: Final[int] = 60
PITCH_TOLERANCE: Final[int] = 30
SLICE_PIECES: Final[int] = 3
COOKING_APPLIANCES: Final[frozenset[str]] = frozenset({"StoveBurner", "Microwave", "Toaster"})

_Result = WorldState | FailureReason


def in_view_cone(world: WorldState, cell: Cell) -> bool:
    """Return True if a cell lies in the agent's 90-degree horizontal view cone and range."""
    agent = world.agent
    fx, fy = agent.facing
    dx, dy = cell[0] - agent.cell[0], cell[1] - agent.cell[1]
    forward = dx * fx + dy * fy
    lateral = -dx * fy + dy * fx
    return forward > 0 and abs(lateral) <= forward and dx * dx + dy * dy <= VIEW_RANGE * VIEW_RANGE


def is_visible(world: WorldState, object_id: str) -> bool:
    """Return True if the agent can currently see the object.

    Args:
        world: Current state.
        object_id: Object to test.

    Returns:
        True for the held object, or for an unoccluded object in the view cone whose
        height band is within one look step of the current pitch.
    """
    obj = world.get(object_id)
    if obj is None:
        return False
    if world.is_hidden(object_id):
        return False
    if world.is_held_or_carried(object_id):
        return True
    if not in_view_cone(world, obj.cell):
        return False
    return abs(world.agent.pitch - obj.height.pitch) <= PITCH_TOLERANCE


def is_reachable(world: WorldState, object_id: str) -> bool:
    """Return True if the object can be interacted with from the current pose."""
    if not is_visible(world, object_id):
        return False
    if world.is_held_or_carried(object_id):
        return True
    obj = world.objects[object_id]
    ax, ay = world.agent.cell
    manhattan = abs(obj.cell[0] - ax) + abs(obj.cell[1] - ay)
    return manhattan <= INTERACTION_RANGE and world.agent.pitch == obj.height.pitch


def visible_objects(world: WorldState) -> list[str]:
    """Return the ids of all currently visible objects, sorted."""
    return sorted(object_id for object_id in world.objects if is_visible(world, object_id))


def step(world: WorldState, action: LowLevelAction) -> ActionOutcome:
    """Apply one low-level action.

    Args:
        world: Current state; never mutated.
        action: Action to apply.

    Returns:
        ActionOutcome with the successor state, or the unchanged state and a reason.
    """
    result = _HANDLERS[action.kind](world, action)
    if isinstance(result, FailureReason):
        logger.debug(f"{action} failed: {result.value}")
        return ActionOutcome(success=False, world=world, reason=result)
    return ActionOutcome(success=True, world=result)


def _offset(cell: Cell, vector: Cell) -> Cell:
    return cell[0] + vector[0], cell[1] + vector[1]


def _relocate(world: WorldState, root_id: str, cell: Cell, height: HeightBand | None = None) -> None:
    for object_id in [root_id, *world.descendants(root_id)]:
        obj = world.objects[object_id]
        obj.cell = cell
        if height is not None:
            obj.height = height


def _move(world: WorldState, vector: Cell) -> _Result:
    target = _offset(world.agent.cell, vector)
    if not world.is_walkable(target):
        return FailureReason.BLOCKED
    new = world.copy()
    new.agent.cell = target
    if new.agent.held_object is not None:
        _relocate(new, new.agent.held_object, target)
    return new


def _forward(world: WorldState, action: LowLevelAction) -> _Result:
    return _move(world, world.agent.facing)


def _backward(world: WorldState, action: LowLevelAction) -> _Result:
    fx, fy = world.agent.facing
    return _move(world, (-fx, -fy))


def _strafe_left(world: WorldState, action: LowLevelAction) -> _Result:
    fx, fy = world.agent.facing
    return _move(world, (fy, -fx))


def _strafe_right(world: WorldState, action: LowLevelAction) -> _Result:
    fx, fy = world.agent.facing
    return _move(world, (-fy, fx))


def _rotate(world: WorldState, delta: int) -> _Result:
    new = world.copy()
    new.agent.yaw = (new.agent.yaw + delta) % 360
    return new


def _rotate_left(world: WorldState, action: LowLevelAction) -> _Result:
    return _rotate(world, -90)


def _rotate_right(world: WorldState, action: LowLevelAction) -> _Result:
    return _rotate(world, 90)


def _look(world: WorldState, delta: int) -> _Result:
    pitch = world.agent.pitch + delta
    if abs(pitch) > PITCH_LIMIT:
        return FailureReason.NOT_APPLICABLE
    new = world.copy()
    new.agent.pitch = pitch
    return new


def _look_up(world: WorldState, action: LowLevelAction) -> _Result:
    return _look(world, 30)


def _look_down(world: WorldState, action: LowLevelAction) -> _Result:
    return _look(world, -30)


def _lookup_target(world: WorldState, action: LowLevelAction) -> ObjectInstance | FailureReason:
    obj = world.get(action.target or "")
    return FailureReason.OBJECT_NOT_FOUND if obj is None else obj


def _pickup(world: WorldState, action: LowLevelAction) -> _Result:
    obj = _lookup_target(world, action)
    if isinstance(obj, FailureReason):
        return obj
    if not obj.affordances.pickupable:
        return FailureReason.NOT_APPLICABLE
    if world.agent.held_object is not None:
        return FailureReason.HOLDING_OTHER_OBJECT
    if world.is_hidden(obj.id):
        return FailureReason.RECEPTACLE_CLOSED
    if not is_reachable(world, obj.id):
        return FailureReason.NOT_IN_RANGE

    new = world.copy()
    target = new.objects[obj.id]
    if target.parent is not None:
        new.objects[target.parent].children.remove(target.id)
        target.parent = None
    new.agent.held_object = target.id
    _relocate(new, target.id, new.agent.cell)
    return new


def _place(world: WorldState, action: LowLevelAction) -> _Result:
    receptacle = _lookup_target(world, action)
    if isinstance(receptacle, FailureReason):
        return receptacle
    if not receptacle.affordances.receptacle:
        return FailureReason.NOT_APPLICABLE
    held = world.agent.held_object
    if held is None:
        return FailureReason.HAND_EMPTY
    if world.is_hidden(receptacle.id):
        return FailureReason.RECEPTACLE_CLOSED
    if receptacle.affordances.openable and not receptacle.properties.is_open:
        return FailureReason.RECEPTACLE_CLOSED
    if not is_reachable(world, receptacle.id):
        return FailureReason.NOT_IN_RANGE
    if world.is_held_or_carried(receptacle.id):
        return FailureReason.NOT_APPLICABLE
    if len(receptacle.children) >= receptacle.affordances.capacity:
        return FailureReason.RECEPTACLE_FULL

    new = world.copy()
    new.objects[held].parent = receptacle.id
    new.objects[receptacle.id].children.append(held)
    new.agent.held_object = None
    root = new.root_of(receptacle.id)
    _relocate(new, held, root.cell, root.height)
    return new


def _open_close(world: WorldState, action: LowLevelAction, opening: bool) -> _Result:
    obj = _lookup_target(world, action)
    if isinstance(obj, FailureReason):
        return obj
    if not obj.affordances.openable:
        return FailureReason.NOT_APPLICABLE
    if world.is_hidden(obj.id):
        return FailureReason.RECEPTACLE_CLOSED
    if not is_reachable(world, obj.id):
        return FailureReason.NOT_IN_RANGE
    if opening and obj.properties.is_open:
        return FailureReason.ALREADY_OPEN
    if opening and obj.properties.is_toggled:
        return FailureReason.TOGGLED_ON
    if not opening and not obj.properties.is_open:
        return FailureReason.ALREADY_CLOSED

    new = world.copy()
    new.objects[obj.id].properties.is_open = opening
    return new


def _open(world: WorldState, action: LowLevelAction) -> _Result:
    return _open_close(world, action, opening=True)


def _close(world: WorldState, action: LowLevelAction) -> _Result:
    return _open_close(world, action, opening=False)


def _wash(world: WorldState, sink: ObjectInstance) -> None:
    for child_id in sink.children:
        child = world.objects[child_id]
        if child.affordances.dirtyable:
            child.properties.is_clean = True
        if child.affordances.fillable:
            child.properties.is_filled_with_water = True
            child.properties.filled_with_coffee = False


def _nearest_sink(world: WorldState, cell: Cell) -> ObjectInstance | None:
    sinks = [o for o in world.objects.values() if o.category in SINKS]
    if not sinks:
        return None
    return min(sinks, key=lambda s: (abs(s.cell[0] - cell[0]) + abs(s.cell[1] - cell[1]), s.id))


def _in_water(world: WorldState, food: ObjectInstance) -> bool:
    """True when the food sits directly in a water vessel that holds water."""
    vessel = world.objects.get(food.parent) if food.parent is not None else None
    return vessel is not None and vessel.category in WATER_VESSELS and vessel.properties.is_filled_with_water


def _apply_toggle_on(world: WorldState, obj: ObjectInstance) -> None:
    if obj.category == "CoffeeMachine":
        for child_id in obj.children:
            cup = world.objects[child_id]
            props = cup.properties
            if cup.category in COFFEE_VESSELS and props.is_clean and not props.is_filled_with_water:
                props.filled_with_coffee = True
    elif obj.category in SINKS:
        _wash(world, obj)
    elif obj.category == "Faucet":
        sink = _nearest_sink(world, obj.cell)
        if sink is not None:
            _wash(world, sink)
    elif obj.category in COOKING_APPLIANCES:
        for object_id in world.descendants(obj.id, max_depth=2):
            food = world.objects[object_id]
            if not food.affordances.cookable:
                continue
            food.properties.is_cooked = True
            if obj.category == "StoveBurner" and _in_water(world, food):
                food.properties.cooked_in_water = True


def _toggle(world: WorldState, action: LowLevelAction, turning_on: bool) -> _Result:
    obj = _lookup_target(world, action)
    if isinstance(obj, FailureReason):
        return obj
    if not obj.affordances.toggleable:
        return FailureReason.NOT_APPLICABLE
    if world.is_hidden(obj.id):
        return FailureReason.RECEPTACLE_CLOSED
    if not is_reachable(world, obj.id):
        return FailureReason.NOT_IN_RANGE
    if turning_on and obj.properties.is_toggled:
        return FailureReason.ALREADY_ON
    if not turning_on and not obj.properties.is_toggled:
        return FailureReason.ALREADY_OFF

    new = world.copy()
    target = new.objects[obj.id]
    target.properties.is_toggled = turning_on
    if turning_on:
        _apply_toggle_on(new, target)
    return new


def _toggle_on(world: WorldState, action: LowLevelAction) -> _Result:
    return _toggle(world, action, turning_on=True)


def _toggle_off(world: WorldState, action: LowLevelAction) -> _Result:
    return _toggle(world, action, turning_on=False)


def _next_free_ids(world: WorldState, category: str, count: int) -> list[str]:
    ids: list[str] = []
    index = 1
    while len(ids) < count:
        candidate = f"{category}_{index}"
        if candidate not in world.objects:
            ids.append(candidate)
        index += 1
    return ids


def _slice(world: WorldState, action: LowLevelAction) -> _Result:
    obj = _lookup_target(world, action)
    if isinstance(obj, FailureReason):
        return obj
    piece_category = sliced_category(obj.category)
    if not obj.affordances.sliceable or piece_category is None:
        return FailureReason.NOT_APPLICABLE
    held = world.agent.held_object
    if held is None or category_of(held) not in KNIVES:
        return FailureReason.NO_KNIFE
    if world.is_hidden(obj.id):
        return FailureReason.RECEPTACLE_CLOSED
    if not is_reachable(world, obj.id):
        return FailureReason.NOT_IN_RANGE

    new = world.copy()
    original = new.objects.pop(obj.id)
    traits = traits_for(piece_category)
    piece_ids = _next_free_ids(new, piece_category, SLICE_PIECES)
    for piece_id in piece_ids:
        new.objects[piece_id] = ObjectInstance(
            id=piece_id,
            category=piece_category,
            cell=original.cell,
            height=original.height,
            properties=ObjectProperties(
                is_sliced=True,
                is_cooked=original.properties.is_cooked and traits.cookable,
                cooked_in_water=original.properties.cooked_in_water and traits.cookable,
            ),
            affordances=Affordances(
                pickupable=traits.pickupable,
                receptacle=traits.receptacle,
                cookable=traits.cookable,
                capacity=traits.capacity,
            ),
            parent=original.parent,
        )
    if original.parent is not None:
        siblings = new.objects[original.parent].children
        position = siblings.index(original.id)
        siblings[position : position + 1] = piece_ids
    return new


def _pour(world: WorldState, action: LowLevelAction) -> _Result:
    target = _lookup_target(world, action)
    if isinstance(target, FailureReason):
        return target
    if not (target.affordances.receptacle or target.affordances.fillable):
        return FailureReason.NOT_APPLICABLE
    held = world.agent.held_object
    if held is None:
        return FailureReason.HAND_EMPTY
    if world.is_hidden(target.id):
        return FailureReason.RECEPTACLE_CLOSED
    if not is_reachable(world, target.id):
        return FailureReason.NOT_IN_RANGE
    if world.is_held_or_carried(target.id):
        return FailureReason.NOT_APPLICABLE
    if not world.objects[held].properties.is_filled:
        return FailureReason.NOT_APPLICABLE

    new = world.copy()
    vessel = new.objects[held].properties
    carried_water = vessel.is_filled_with_water
    vessel.is_filled_with_water = False
    vessel.filled_with_coffee = False
    receiver = new.objects[target.id]
    if carried_water and receiver.affordances.fillable:
        receiver.properties.is_filled_with_water = True
        receiver.properties.filled_with_coffee = False
    return new


_HANDLERS: Final[dict[ActionKind, Callable[[WorldState, LowLevelAction], _Result]]] = {
    ActionKind.FORWARD: _forward,
    ActionKind.BACKWARD: _backward,
    ActionKind.STRAFE_LEFT: _strafe_left,
    ActionKind.STRAFE_RIGHT: _strafe_right,
    ActionKind.ROTATE_LEFT: _rotate_left,
    ActionKind.ROTATE_RIGHT: _rotate_right,
    ActionKind.LOOK_UP: _look_up,
    ActionKind.LOOK_DOWN: _look_down,
    ActionKind.PICKUP: _pickup,
    ActionKind.PLACE: _place,
    ActionKind.OPEN: _open,
    ActionKind.CLOSE: _close,
    ActionKind.TOGGLE_ON: _toggle_on,
    ActionKind.TOGGLE_OFF: _toggle_off,
    ActionKind.SLICE: _slice,
    ActionKind.POUR: _pour,
}


def check_invariants(world: WorldState) -> list[str]:
    """Return a description of every violated state invariant (empty when consistent)."""
    problems: list[str] = []
    seen_children: set[str] = set()
    for obj in world.objects.values():
        if category_of(obj.id) != obj.category:
            problems.append(f"{obj.id}: id prefix does not match category {obj.category}")
        if obj.parent is not None:
            parent = world.objects.get(obj.parent)
            if parent is None:
                problems.append(f"{obj.id}: unknown parent {obj.parent}")
            elif obj.id not in parent.children:
                problems.append(f"{obj.id}: missing from {parent.id}.children")
        for child_id in obj.children:
            child = world.objects.get(child_id)
            if child is None:
                problems.append(f"{obj.id}: unknown child {child_id}")
            elif child.parent != obj.id:
                problems.append(f"{obj.id}: child {child_id} points to {child.parent}")
            if child_id in seen_children:
                problems.append(f"{child_id}: listed under more than one parent")
            seen_children.add(child_id)
        props, aff = obj.properties, obj.affordances
        if props.is_open and not aff.openable:
            problems.append(f"{obj.id}: open but not openable")
        if props.is_toggled and not aff.toggleable:
            problems.append(f"{obj.id}: toggled but not toggleable")
        if props.is_sliced and not aff.sliceable and obj.category not in SLICED_CATEGORIES:
            problems.append(f"{obj.id}: sliced but not sliceable")
        if props.cooked_in_water and not props.is_cooked:
            problems.append(f"{obj.id}: boiled but not cooked")
        if props.is_filled_with_water and props.filled_with_coffee:
            problems.append(f"{obj.id}: holds water and coffee")

    for obj in world.objects.values():
        chain: set[str] = {obj.id}
        current = obj.parent
        cyclic = False
        while current is not None and current in world.objects:
            if current in chain:
                problems.append(f"{obj.id}: containment cycle")
                cyclic = True
                break
            chain.add(current)
            current = world.objects[current].parent
        if obj.parent is not None and not cyclic and current is None:
            root = world.root_of(obj.id)
            if obj.cell != root.cell:
                problems.append(f"{obj.id}: cell differs from its container {root.id}")

    held = world.agent.held_object
    if held is not None:
        obj = world.get(held)
        if obj is None:
            problems.append(f"agent: holds unknown object {held}")
        else:
            if obj.parent is not None:
                problems.append(f"agent: held {held} still has parent {obj.parent}")
            if not obj.affordances.pickupable:
                problems.append(f"agent: held {held} is not pickupable")
    if not world.is_walkable(world.agent.cell, carrying=False):
        problems.append(f"agent: stands on non-walkable cell {world.agent.cell}")
    return problems
