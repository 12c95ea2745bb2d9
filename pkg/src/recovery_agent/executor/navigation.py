"""Breadth-first path planning over the agent's known floor map."""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable
from typing import Final

from recovery_agent.world.state import YAW_VECTORS, Cell

__all__ = ["DIRECTION_ORDER", "distance_map", "neighbours", "plan_path", "yaw_towards"]

# Expansion order north, east, south, west fixes tie-breaking between equal-length paths.
DIRECTION_ORDER: Final[tuple[int, ...]] = (0, 90, 180, 270)


def neighbours(cell: Cell) -> list[Cell]:
    """Return the four neighbours of a cell in N, E, S, W order."""
    return [(cell[0] + YAW_VECTORS[y][0], cell[1] + YAW_VECTORS[y][1]) for y in DIRECTION_ORDER]


def plan_path(start: Cell, goals: Iterable[Cell], is_free: Callable[[Cell], bool]) -> list[Cell] | None:
    """Return the shortest path from start to any goal cell.

    Args:
        start: Current cell, always allowed.
        goals: Acceptable end cells.
        is_free: Whether the agent may enter a cell.

    Returns:
        Cells to step through, excluding start (empty if start is a goal), or None.
    """
    goal_set = set(goals)
    if start in goal_set:
        return []
    previous: dict[Cell, Cell] = {}
    queue: deque[Cell] = deque([start])
    seen = {start}
    while queue:
        cell = queue.popleft()
        for nxt in neighbours(cell):
            if nxt in seen or not is_free(nxt):
                continue
            seen.add(nxt)
            previous[nxt] = cell
            if nxt in goal_set:
                path = [nxt]
                while path[-1] in previous and previous[path[-1]] != start:
                    path.append(previous[path[-1]])
                return path[::-1]
            queue.append(nxt)
    return None


def distance_map(start: Cell, is_free: Callable[[Cell], bool]) -> dict[Cell, int]:
    """Return path lengths from start to every reachable cell."""
    distances = {start: 0}
    queue: deque[Cell] = deque([start])
    while queue:
        cell = queue.popleft()
        for nxt in neighbours(cell):
            if nxt not in distances and is_free(nxt):
                distances[nxt] = distances[cell] + 1
                queue.append(nxt)
    return distances


def yaw_towards(origin: Cell, target: Cell) -> int:
    """Return the yaw that best faces target from origin (dominant axis, N/S on ties)."""
    dx, dy = target[0] - origin[0], target[1] - origin[1]
    if abs(dx) > abs(dy):
        return 90 if dx > 0 else 270
    return 180 if dy > 0 else 0
