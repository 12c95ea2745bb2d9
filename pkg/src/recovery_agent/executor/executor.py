"""Subgoal executor: exploration, navigation, interaction heuristics and compound verbs."""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass
from typing import Final

from recovery_agent.executor.memory import MemoryEntry, ObjectMemory
from recovery_agent.executor.navigation import distance_map, neighbours, plan_path, yaw_towards
from recovery_agent.executor.subgoal import Subgoal, Verb
from recovery_agent.executor.trace import Budget, ExecutionTrace
from recovery_agent.utils.logger import get_logger
from recovery_agent.world.catalog import SINKS, SURFACES, category_of, is_instance_id
from recovery_agent.world.sim import step
from recovery_agent.world.state import (
    YAW_VECTORS,
    ActionKind,
    ActionOutcome,
    Cell,
    FailureReason,
    LowLevelAction,
    WorldState,
)

__all__ = ["ADJUSTMENTS", "Executor", "SearchHook", "SubgoalOutcome"]

logger = get_logger(__name__)

SearchHook = Callable[[str], list[Subgoal]]

# Pose offsets (yaw, pitch, cells forward) relative to the pose of the failed interaction,
# in the order RotateLeft, RotateRight, LookUp, LookDown, Forward, Backward.
ADJUSTMENTS: Final[tuple[tuple[int, int, int], ...]] = (
    (-90, 0, 0),
    (90, 0, 0),
    (0, 30, 0),
    (0, -30, 0),
    (0, 0, 1),
    (0, 0, -1),
)
MAX_SEARCH_DEPTH: Final[int] = 2

_PRIMITIVE_KINDS: Final[dict[Verb, ActionKind]] = {
    Verb.OPEN: ActionKind.OPEN,
    Verb.CLOSE: ActionKind.CLOSE,
    Verb.TOGGLE_ON: ActionKind.TOGGLE_ON,
    Verb.TOGGLE_OFF: ActionKind.TOGGLE_OFF,
    Verb.SLICE: ActionKind.SLICE,
    Verb.PICK_UP: ActionKind.PICKUP,
}


@dataclass(frozen=True)
class SubgoalOutcome:
    """Result of executing one subgoal."""

    subgoal: Subgoal
    success: bool
    reason: FailureReason | None = None
    actions: int = 0


@dataclass(frozen=True)
class _Pose:
    cell: Cell
    yaw: int
    pitch: int


class Executor:
    """Drives one episode's world through subgoals.

    The executor owns the episode's world, object memory and trace. It never raises for
    subgoal failures; only ``BudgetExhausted`` escapes.
    """

    def __init__(
        self,
        world: WorldState,
        budget: Budget | None = None,
        search: SearchHook | None = None,
        memory: ObjectMemory | None = None,
        trace: ExecutionTrace | None = None,
        seed: int = 0,
    ) -> None:
        """Initialize the executor.

        Args:
            world: Initial world state.
            budget: Action and failure limits.
            search: Called with an unresolved reference; returns steps that should reveal it.
            memory: Object memory to extend.
            trace: Trace to append to.
            seed: Orders the exploration quadrants; 0 keeps the fixed order.
        """
        self.world = world
        self.seed = seed
        self.budget = budget or Budget()
        self.search = search
        self.memory = memory or ObjectMemory()
        self.trace = trace or ExecutionTrace()
        self.aliases: dict[str, str] = {}
        self.learned_blocked: set[Cell] = set()
        self._context: str | None = None
        self._search_depth = 0
        self.memory.observe(self.world, self.trace.actions_taken)

    # -- low level -------------------------------------------------------------------

    def _act(self, action: LowLevelAction, charge: bool = True) -> ActionOutcome:
        self.budget.before_action(self.trace)
        outcome = step(self.world, action)
        self.world = outcome.world
        self.trace.record(action, outcome, self._context, charge=charge)
        self.memory.observe(self.world, self.trace.actions_taken)
        if not outcome.success:
            logger.debug(f"{action} failed ({outcome.reason.value if outcome.reason else 'unknown'})")
            self.budget.after_failure(self.trace)
        return outcome

    def _nav_act(self, kind: ActionKind) -> ActionOutcome:
        return self._act(LowLevelAction(kind), charge=self.budget.per_action)

    @property
    def pose(self) -> _Pose:
        """Current cell, yaw and pitch of the agent."""
        agent = self.world.agent
        return _Pose(agent.cell, agent.yaw, agent.pitch)

    def turn_to(self, yaw: int) -> None:
        """Rotate with the fewest actions until facing ``yaw``."""
        diff = (yaw - self.world.agent.yaw) % 360
        if diff == 90:
            self._nav_act(ActionKind.ROTATE_RIGHT)
        elif diff == 270:
            self._nav_act(ActionKind.ROTATE_LEFT)
        elif diff == 180:
            self._nav_act(ActionKind.ROTATE_RIGHT)
            self._nav_act(ActionKind.ROTATE_RIGHT)

    def pitch_to(self, pitch: int) -> None:
        """Look up or down until the camera pitch equals ``pitch``."""
        while self.world.agent.pitch < pitch:
            if not self._nav_act(ActionKind.LOOK_UP).success:
                return
        while self.world.agent.pitch > pitch:
            if not self._nav_act(ActionKind.LOOK_DOWN).success:
                return

    def _assume(self, base: _Pose, offset: tuple[int, int, int]) -> bool:
        """Move into ``base`` shifted by ``offset``; False when a required move fails."""
        dyaw, dpitch, dforward = offset
        fx, fy = YAW_VECTORS[base.yaw]
        want = (base.cell[0] + dforward * fx, base.cell[1] + dforward * fy)
        current = self.world.agent.cell
        if current != want:
            self.turn_to(base.yaw)
            self.pitch_to(base.pitch)
            if want == (current[0] + fx, current[1] + fy):
                moved = self._nav_act(ActionKind.FORWARD).success
            elif want == (current[0] - fx, current[1] - fy):
                moved = self._nav_act(ActionKind.BACKWARD).success
            else:
                moved = self._walk_to_cell(want)
            if not moved:
                return False
        self.turn_to((base.yaw + dyaw) % 360)
        self.pitch_to(base.pitch + dpitch)
        return True

    def _interact(self, kind: ActionKind, target: str) -> FailureReason | None:
        """Attempt an interaction, then the six positioning adjustments."""
        action = LowLevelAction(kind, target)
        outcome = self._act(action)
        if outcome.success:
            return None
        reason = outcome.reason
        base = self.pose
        for offset in ADJUSTMENTS:
            if not self._assume(base, offset):
                continue
            outcome = self._act(action, charge=self.budget.per_action)
            if outcome.success:
                logger.debug(f"{action} succeeded after adjustment {offset}")
                return None
            reason = outcome.reason
        self._assume(base, (0, 0, 0))
        return reason

    # -- navigation ------------------------------------------------------------------

    def is_known_free(self, cell: Cell) -> bool:
        """Whether the agent believes it may step onto a cell."""
        grid = self.world.grid
        if not grid.in_bounds(cell) or cell in grid.blocked or cell in self.learned_blocked:
            return False
        return cell not in self.memory.top_level_cells(exclude=self.world.agent.held_object)

    def _goal_cells(self, entry: MemoryEntry) -> list[Cell]:
        root = self.memory.ancestors(entry.object_id)
        cell = root[-1].cell if root else entry.cell
        return [c for c in neighbours(cell) if c == self.world.agent.cell or self.is_known_free(c)]

    def _follow(self, path: list[Cell]) -> bool:
        for cell in path:
            here = self.world.agent.cell
            self.turn_to(yaw_towards(here, cell))
            if not self._nav_act(ActionKind.FORWARD).success:
                self.learned_blocked.add(cell)
                logger.debug(f"Learned blocked cell {cell}")
                return False
        return True

    def _walk_to_cell(self, goal: Cell) -> bool:
        for _ in range(2):
            path = plan_path(self.world.agent.cell, [goal], self.is_known_free)
            if path is None:
                return False
            if self._follow(path):
                return True
        return False

    def navigate_to(self, object_id: str) -> FailureReason | None:
        """Walk next to a known object and face it, renavigating once on a blocked move.

        Args:
            object_id: Object with a memory entry.

        Returns:
            None on arrival, else ``object_not_found``, ``no_path`` or ``navigation_failed``.
        """
        if self.world.is_held_or_carried(object_id):
            return None
        entry = self.memory.get(object_id)
        if entry is None:
            return FailureReason.OBJECT_NOT_FOUND
        self.pitch_to(0)
        for attempt in range(2):
            path = plan_path(self.world.agent.cell, self._goal_cells(entry), self.is_known_free)
            if path is None:
                return FailureReason.NO_PATH if attempt == 0 else FailureReason.NAVIGATION_FAILED
            if self._follow(path):
                target_cell = self._root_cell(entry)
                self.turn_to(yaw_towards(self.world.agent.cell, target_cell))
                return None
            logger.debug(f"Renavigating to {object_id}")
        return FailureReason.NAVIGATION_FAILED

    def _root_cell(self, entry: MemoryEntry) -> Cell:
        chain = self.memory.ancestors(entry.object_id)
        return chain[-1].cell if chain else entry.cell

    def explore_initial(self) -> list[Cell]:
        """Visit the room centre and the four quadrant centres, turning a full circle at each.

        A non-zero seed shuffles the order of the quadrant centres.

        Returns:
            Waypoints actually visited.
        """
        grid = self.world.grid
        w, h = grid.width, grid.height
        centre = (w // 2, h // 2)
        quadrants = [(w // 4, h // 4), (3 * w // 4, h // 4), (w // 4, 3 * h // 4), (3 * w // 4, 3 * h // 4)]
        if self.seed:
            random.Random(self.seed).shuffle(quadrants)
        visited: list[Cell] = []
        self._context = "explore"
        try:
            for waypoint in [centre, *quadrants]:
                cell = self._nearest_free(waypoint)
                if cell is None:
                    logger.warning(f"No walkable cell near waypoint {waypoint}; skipping")
                    continue
                self.pitch_to(0)
                if not self._walk_to_cell(cell):
                    logger.warning(f"Waypoint {cell} is unreachable; skipping")
                    continue
                for _ in range(4):
                    self._nav_act(ActionKind.ROTATE_RIGHT)
                visited.append(cell)
        finally:
            self._context = None
        logger.debug(f"Exploration visited {len(visited)} waypoints, memory holds {len(self.memory)} objects")
        return visited

    def _nearest_free(self, cell: Cell) -> Cell | None:
        if cell == self.world.agent.cell or self.is_known_free(cell):
            return cell
        grid = self.world.grid
        candidates = [
            (abs(x - cell[0]) + abs(y - cell[1]), y, x)
            for y in range(grid.height)
            for x in range(grid.width)
            if self.is_known_free((x, y))
        ]
        if not candidates:
            return None
        _, y, x = min(candidates)
        return x, y

    # -- reference resolution --------------------------------------------------------

    def _distances(self) -> dict[Cell, int]:
        return distance_map(self.world.agent.cell, self.is_known_free)

    def _path_distance(self, entry: MemoryEntry, distances: dict[Cell, int]) -> float:
        if self.world.is_held_or_carried(entry.object_id):
            return 0
        reach = [distances[c] for c in neighbours(self._root_cell(entry)) if c in distances]
        return min(reach) if reach else float("inf")

    def nearest(self, entries: list[MemoryEntry]) -> MemoryEntry | None:
        """Return the entry closest by path length, ties broken by id."""
        if not entries:
            return None
        distances = self._distances()
        return min(entries, key=lambda e: (self._path_distance(e, distances), e.object_id))

    def _by_category(self, category: str) -> str | None:
        entry = self.nearest(self.memory.instances_of(category))
        return entry.object_id if entry else None

    def resolve(self, reference: str) -> str | None:
        """Resolve an id or bare category to a known object id, searching if needed."""
        reference = self.aliases.get(reference, reference)
        if is_instance_id(reference):
            if reference in self.memory:
                return reference
            if self._run_search(reference) and reference in self.memory:
                return reference
            return self._by_category(category_of(reference))
        found = self._by_category(reference)
        if found is None and self._run_search(reference):
            found = self._by_category(reference)
        return found

    def _run_search(self, reference: str) -> bool:
        if self.search is None or self._search_depth >= MAX_SEARCH_DEPTH:
            return False
        self._search_depth += 1
        try:
            steps = self.search(reference)
            if steps:
                logger.info(f"Searching for {reference}: {', '.join(str(s) for s in steps)}")
            for sub in steps:
                self._dispatch(sub)
        finally:
            self._search_depth -= 1
        return bool(steps)

    # -- subgoals ----------------------------------------------------------------------

    def execute_subgoal(self, subgoal: Subgoal) -> SubgoalOutcome:
        """Expand a subgoal into low-level actions and run them.

        Args:
            subgoal: Subgoal to execute.

        Returns:
            SubgoalOutcome; failure reasons come from the last failing step.
        """
        start = self.trace.actions_taken
        outer = self._context
        self._context = str(subgoal)
        try:
            reason = self._dispatch(subgoal)
        finally:
            self._context = outer
        outcome = SubgoalOutcome(subgoal, reason is None, reason, self.trace.actions_taken - start)
        if reason is not None:
            self.trace.subgoal_failures[reason.value] += 1
        logger.debug(f"{subgoal}: {'ok' if outcome.success else reason.value if reason else 'failed'}")
        return outcome

    def _dispatch(self, subgoal: Subgoal) -> FailureReason | None:
        verb = subgoal.verb
        if verb in (Verb.FIND, Verb.GO_TO):
            target = self.resolve(subgoal.target)
            return FailureReason.OBJECT_NOT_FOUND if target is None else self.navigate_to(target)
        if verb in _PRIMITIVE_KINDS:
            return self._primitive(_PRIMITIVE_KINDS[verb], subgoal.target)
        if verb in (Verb.PLACE, Verb.POUR):
            return self._place_or_pour(subgoal)
        if verb == Verb.CLEAN:
            return self._sink_routine(subgoal.target, pick_after=True)
        if verb == Verb.FILL_WITH_WATER:
            return self._sink_routine(subgoal.target, pick_after=False, require_fillable=True)
        if verb == Verb.EMPTY:
            return self._empty(subgoal.target)
        return self._put_away(subgoal.target)

    def _primitive(self, kind: ActionKind, reference: str) -> FailureReason | None:
        target = self.resolve(reference)
        if target is None:
            return FailureReason.OBJECT_NOT_FOUND
        reason = self.navigate_to(target)
        if reason is not None:
            return reason
        reason = self._interact(kind, target)
        if reason is None and kind == ActionKind.SLICE:
            self.memory.forget(target)
        return reason

    def _holds(self, reference: str) -> bool:
        held = self.world.agent.held_object
        if held is None:
            return False
        reference = self.aliases.get(reference, reference)
        return held == reference or (not is_instance_id(reference) and category_of(held) == reference)

    def _place_or_pour(self, subgoal: Subgoal) -> FailureReason | None:
        kind = ActionKind.PLACE if subgoal.verb == Verb.PLACE else ActionKind.POUR
        if self.world.agent.held_object is not None and not self._holds(subgoal.subject):
            return FailureReason.HOLDING_OTHER_OBJECT
        receptacle = self.resolve(subgoal.target)
        if receptacle is None:
            return FailureReason.OBJECT_NOT_FOUND
        reason = self.navigate_to(receptacle)
        return reason if reason is not None else self._interact(kind, receptacle)

    def _pick(self, object_id: str) -> FailureReason | None:
        if self.world.agent.held_object == object_id:
            return None
        reason = self.navigate_to(object_id)
        return reason if reason is not None else self._interact(ActionKind.PICKUP, object_id)

    def _nearest_sink(self) -> str | None:
        entry = self.nearest([e for e in self.memory if e.category in SINKS])
        return entry.object_id if entry else None

    def _sink_routine(self, reference: str, pick_after: bool, require_fillable: bool = False) -> FailureReason | None:
        target = self.resolve(reference)
        if target is None:
            return FailureReason.OBJECT_NOT_FOUND
        entry = self.memory.get(target)
        if require_fillable and entry is not None and not entry.affordances.fillable:
            return FailureReason.NOT_APPLICABLE
        held = self.world.agent.held_object
        if held is not None and held != target:
            return FailureReason.HOLDING_OTHER_OBJECT
        reason = self._pick(target)
        if reason is not None:
            return reason
        sink = self._nearest_sink()
        if sink is None:
            return FailureReason.OBJECT_NOT_FOUND
        reason = self.navigate_to(sink) or self._interact(ActionKind.PLACE, sink)
        if reason is not None:
            return reason
        sink_entry = self.memory.get(sink)
        if sink_entry is not None and sink_entry.properties.is_toggled:
            reason = self._interact(ActionKind.TOGGLE_OFF, sink)
            if reason is not None:
                return reason
        reason = self._interact(ActionKind.TOGGLE_ON, sink) or self._interact(ActionKind.TOGGLE_OFF, sink)
        if reason is not None:
            return reason
        return self._interact(ActionKind.PICKUP, target) if pick_after else None

    def _empty(self, reference: str) -> FailureReason | None:
        target = self.resolve(reference)
        if target is None:
            return FailureReason.OBJECT_NOT_FOUND
        entry = self.memory.get(target)
        if entry is None:
            return FailureReason.OBJECT_NOT_FOUND
        if entry.children:
            for child in entry.children:
                if self.world.agent.held_object not in (None, child):
                    return FailureReason.HOLDING_OTHER_OBJECT
                reason = self._pick(child) or self._put_away(child, exclude=target)
                if reason is not None:
                    return reason
            return None
        if entry.properties.is_filled:
            held = self.world.agent.held_object
            if held is not None and held != target:
                return FailureReason.HOLDING_OTHER_OBJECT
            reason = self._pick(target)
            if reason is not None:
                return reason
            sink = self._nearest_sink()
            if sink is None:
                return FailureReason.OBJECT_NOT_FOUND
            return self.navigate_to(sink) or self._interact(ActionKind.POUR, sink)
        return None

    def _put_away(self, reference: str, exclude: str | None = None) -> FailureReason | None:
        held = self.world.agent.held_object
        if held is None:
            return FailureReason.HAND_EMPTY
        if not self._holds(reference):
            return FailureReason.HOLDING_OTHER_OBJECT
        surfaces = [
            e
            for e in self.memory
            if e.category in SURFACES
            and e.object_id != exclude
            and not self.world.is_held_or_carried(e.object_id)
            and not (e.affordances.openable and not e.properties.is_open)
            and len(e.children) < e.affordances.capacity
        ]
        surface = self.nearest(surfaces)
        if surface is None:
            return FailureReason.OBJECT_NOT_FOUND
        return self.navigate_to(surface.object_id) or self._interact(ActionKind.PLACE, surface.object_id)
