"""Build a WorldState from a world-spec document."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import fields, replace
from pathlib import Path
from typing import Any, Final

import yaml

from recovery_agent.utils.logger import get_logger
from recovery_agent.world.catalog import CATEGORIES, SLICED_CATEGORIES, category_of, is_instance_id, traits_for
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

__all__ = ["WORLD_SCHEMA_VERSION", "WorldSpecError", "load_world", "load_world_file"]

logger = get_logger(__name__)

WORLD_SCHEMA_VERSION: Final[int] = 1

_PROPERTY_NAMES: Final[frozenset[str]] = frozenset(f.name for f in fields(ObjectProperties))
_AFFORDANCE_NAMES: Final[frozenset[str]] = frozenset(f.name for f in fields(Affordances)) - {"capacity"}
_PROPERTY_REQUIRES: Final[dict[str, str]] = {
    "is_open": "openable",
    "is_toggled": "toggleable",
}


class WorldSpecError(Exception):
    """Raised when a world-spec document is invalid."""


def load_world_file(path: Path) -> WorldState:
    """Load a world spec from a YAML or JSON file.

    Args:
        path: Path to the document.

    Returns:
        Loaded WorldState.

    Raises:
        WorldSpecError: If the file cannot be read or the spec is invalid.
    """
    try:
        with path.open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise WorldSpecError(f"Cannot read world spec {path}: {e}") from e
    return load_world(data)


def load_world(spec: Mapping[str, Any]) -> WorldState:
    """Validate a world-spec mapping and build the corresponding state.

    Args:
        spec: Parsed world-spec document.

    Returns:
        WorldState satisfying all containment and placement invariants.

    Raises:
        WorldSpecError: If any field is invalid; the message names the field.
    """
    if not isinstance(spec, Mapping):
        raise WorldSpecError("world spec: expected a mapping")
    version = spec.get("schema_version", WORLD_SCHEMA_VERSION)
    if version != WORLD_SCHEMA_VERSION:
        raise WorldSpecError(f"schema_version: unsupported version {version!r}")

    grid = _load_grid(spec.get("grid"))
    agent_data = spec.get("agent")
    held_id = agent_data.get("held") if isinstance(agent_data, Mapping) else None
    objects = _load_objects(spec.get("objects", []), grid, held_id)
    _link_children(objects)
    _check_acyclic(objects)
    agent = _load_agent(agent_data, objects)
    _propagate_placement(objects)

    world = WorldState(objects=objects, agent=agent, grid=grid, rng_seed=int(spec.get("seed", 0)))
    if not world.is_walkable(agent.cell, carrying=False):
        raise WorldSpecError(f"agent.cell: {list(agent.cell)} is not walkable")
    for obj in objects.values():
        if len(obj.children) > obj.affordances.capacity:
            raise WorldSpecError(f"objects.{obj.id}.children: {len(obj.children)} items exceed capacity")
    logger.debug(f"Loaded world with {len(objects)} objects on a {grid.width}x{grid.height} grid")
    return world


def _cell(value: Any, where: str) -> Cell:
    if not isinstance(value, Sequence) or isinstance(value, str) or len(value) != 2:
        raise WorldSpecError(f"{where}: expected [x, y]")
    try:
        return int(value[0]), int(value[1])
    except (TypeError, ValueError) as e:
        raise WorldSpecError(f"{where}: coordinates must be integers") from e


def _load_grid(data: Any) -> FloorGrid:
    if not isinstance(data, Mapping):
        raise WorldSpecError("grid: expected a mapping with width and height")
    width = data.get("width", 12)
    height = data.get("height", 12)
    if not isinstance(width, int) or not isinstance(height, int) or width <= 0 or height <= 0:
        raise WorldSpecError("grid.width/grid.height: expected positive integers")
    blocked = frozenset(_cell(c, "grid.blocked") for c in data.get("blocked", []))
    carry_blocked = frozenset(_cell(c, "grid.carry_blocked") for c in data.get("carry_blocked", []))
    grid = FloorGrid(width=width, height=height, blocked=blocked, carry_blocked=carry_blocked)
    for cell in blocked | carry_blocked:
        if not grid.in_bounds(cell):
            raise WorldSpecError(f"grid.blocked: {list(cell)} is outside the grid")
    return grid


def _load_objects(items: Any, grid: FloorGrid, held_id: Any) -> dict[str, ObjectInstance]:
    if not isinstance(items, Sequence) or isinstance(items, str):
        raise WorldSpecError("objects: expected a list")
    objects: dict[str, ObjectInstance] = {}
    for index, item in enumerate(items):
        where = f"objects[{index}]"
        if not isinstance(item, Mapping):
            raise WorldSpecError(f"{where}: expected a mapping")
        object_id = item.get("id")
        if not isinstance(object_id, str) or not is_instance_id(object_id):
            raise WorldSpecError(f"{where}.id: expected '<Category>_<k>', got {object_id!r}")
        where = f"objects.{object_id}"
        if object_id in objects:
            raise WorldSpecError(f"{where}.id: duplicate id")
        category = item.get("category", category_of(object_id))
        if category != category_of(object_id):
            raise WorldSpecError(f"{where}.category: {category!r} does not match the id prefix")
        if category not in CATEGORIES:
            raise WorldSpecError(f"{where}.category: unknown category {category!r}")

        traits = traits_for(category)
        affordances = Affordances(
            pickupable=traits.pickupable,
            receptacle=traits.receptacle,
            openable=traits.openable,
            toggleable=traits.toggleable,
            sliceable=traits.sliceable,
            fillable=traits.fillable,
            cookable=traits.cookable,
            dirtyable=traits.dirtyable,
            capacity=traits.capacity,
        )
        overrides = item.get("affordances", {}) or {}
        unknown = set(overrides) - _AFFORDANCE_NAMES
        if unknown:
            raise WorldSpecError(f"{where}.affordances: unknown flags {sorted(unknown)}")
        affordances = replace(affordances, **{k: bool(v) for k, v in overrides.items()})
        if "capacity" in item:
            capacity = item["capacity"]
            if not isinstance(capacity, int) or capacity < 0:
                raise WorldSpecError(f"{where}.capacity: expected a non-negative integer")
            affordances = replace(affordances, capacity=capacity)

        props_data = item.get("properties", {}) or {}
        unknown = set(props_data) - _PROPERTY_NAMES
        if unknown:
            raise WorldSpecError(f"{where}.properties: unknown properties {sorted(unknown)}")
        properties = ObjectProperties(**{k: bool(v) for k, v in props_data.items()})
        for prop, flag in _PROPERTY_REQUIRES.items():
            if getattr(properties, prop) and not getattr(affordances, flag):
                raise WorldSpecError(f"{where}.properties.{prop}: object is not {flag}")
        if category in SLICED_CATEGORIES:
            properties.is_sliced = True
        elif properties.is_sliced and not affordances.sliceable:
            raise WorldSpecError(f"{where}.properties.is_sliced: object is not sliceable")
        if properties.cooked_in_water and not properties.is_cooked:
            raise WorldSpecError(f"{where}.properties.cooked_in_water: requires is_cooked")
        if properties.is_filled_with_water and properties.filled_with_coffee:
            raise WorldSpecError(f"{where}.properties: water and coffee are mutually exclusive")

        try:
            height = HeightBand(item.get("height", traits.height))
        except ValueError as e:
            raise WorldSpecError(f"{where}.height: expected floor, counter or upper") from e

        parent = item.get("parent")
        if parent is not None and not isinstance(parent, str):
            raise WorldSpecError(f"{where}.parent: expected an object id")
        if parent is None and object_id == held_id:
            cell = (0, 0)
        elif parent is None:
            if "cell" not in item:
                raise WorldSpecError(f"{where}.cell: required for top-level objects")
            cell = _cell(item["cell"], f"{where}.cell")
            if not grid.in_bounds(cell):
                raise WorldSpecError(f"{where}.cell: {list(cell)} is outside the grid")
        else:
            cell = (0, 0)

        objects[object_id] = ObjectInstance(
            id=object_id,
            category=category,
            cell=cell,
            height=height,
            properties=properties,
            affordances=affordances,
            parent=parent,
        )
    return objects


def _link_children(objects: dict[str, ObjectInstance]) -> None:
    for obj in objects.values():
        if obj.parent is None:
            continue
        parent = objects.get(obj.parent)
        if parent is None:
            raise WorldSpecError(f"objects.{obj.id}.parent: unknown object {obj.parent!r}")
        if not parent.affordances.receptacle:
            raise WorldSpecError(f"objects.{obj.id}.parent: {parent.id} is not a receptacle")
        parent.children.append(obj.id)


def _check_acyclic(objects: dict[str, ObjectInstance]) -> None:
    for obj in objects.values():
        seen = {obj.id}
        current = obj.parent
        while current is not None:
            if current in seen:
                raise WorldSpecError(f"objects.{obj.id}.parent: containment cycle through {current}")
            seen.add(current)
            current = objects[current].parent


def _propagate_placement(objects: dict[str, ObjectInstance]) -> None:
    for obj in objects.values():
        root = obj
        while root.parent is not None:
            root = objects[root.parent]
        if root is not obj:
            obj.cell = root.cell
            obj.height = root.height


def _load_agent(data: Any, objects: dict[str, ObjectInstance]) -> AgentState:
    if not isinstance(data, Mapping):
        raise WorldSpecError("agent: expected a mapping with a cell")
    cell = _cell(data.get("cell"), "agent.cell")
    yaw = data.get("yaw", 0)
    if yaw not in (0, 90, 180, 270):
        raise WorldSpecError(f"agent.yaw: expected 0, 90, 180 or 270, got {yaw!r}")
    pitch = data.get("pitch", 0)
    if pitch not in (-60, -30, 0, 30, 60):
        raise WorldSpecError(f"agent.pitch: expected a multiple of 30 in [-60, 60], got {pitch!r}")
    held = data.get("held")
    if held is not None:
        obj = objects.get(held)
        if obj is None:
            raise WorldSpecError(f"agent.held: unknown object {held!r}")
        if obj.parent is not None or not obj.affordances.pickupable:
            raise WorldSpecError(f"agent.held: {held} must be a pickupable top-level object")
        obj.cell = cell
    return AgentState(cell=cell, yaw=yaw, pitch=pitch, held_object=held)
