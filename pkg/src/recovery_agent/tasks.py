"""Task templates and their goal conditions.

A task is one of twelve household templates. Goal conditions are grounded against the
instances present in a world and evaluated as pure predicates over a ``WorldState``.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any, Final

from recovery_agent.world.catalog import COFFEE_VESSELS, WATER_VESSELS, sliced_category
from recovery_agent.world.state import ObjectInstance, WorldState

__all__ = [
    "BOIL_POTATO",
    "CLEAN_ALL",
    "GoalCondition",
    "MAKE_COFFEE",
    "MAKE_TOAST",
    "N_COOKED_SLICES",
    "N_SLICES",
    "PREPARE_BREAKFAST",
    "PREPARE_SALAD",
    "PREPARE_SANDWICH",
    "PUT_ALL_IN_ONE",
    "PUT_ALL_ON_ANY",
    "TASK_NAMES",
    "TaskParams",
    "TaskSpec",
    "TaskSpecError",
    "WATER_PLANT",
    "canonical_task_name",
    "evaluate_goals",
    "goal_conditions_for",
]

WATER_PLANT: Final[str] = "Water plant"
BOIL_POTATO: Final[str] = "Boil potato"
MAKE_COFFEE: Final[str] = "Make coffee"
MAKE_TOAST: Final[str] = "Make plate of toast"
CLEAN_ALL: Final[str] = "Clean N Object"
PUT_ALL_ON_ANY: Final[str] = "Put N Object on any Receptacle"
N_SLICES: Final[str] = "N slices of Object in Receptacle"
PUT_ALL_IN_ONE: Final[str] = "Put N Object in one Receptacle"
N_COOKED_SLICES: Final[str] = "N cooked Object slices in Receptacle"
PREPARE_BREAKFAST: Final[str] = "Prepare breakfast"
PREPARE_SANDWICH: Final[str] = "Prepare sandwich"
PREPARE_SALAD: Final[str] = "Prepare salad"

TASK_NAMES: Final[tuple[str, ...]] = (
    WATER_PLANT,
    BOIL_POTATO,
    MAKE_COFFEE,
    MAKE_TOAST,
    CLEAN_ALL,
    PUT_ALL_ON_ANY,
    N_SLICES,
    PUT_ALL_IN_ONE,
    N_COOKED_SLICES,
    PREPARE_BREAKFAST,
    PREPARE_SANDWICH,
    PREPARE_SALAD,
)

# Vocabulary-list spellings and per-task report names, lowercased.
_ALIASES: Final[dict[str, str]] = {
    "clean all x": CLEAN_ALL,
    "put all x on y": PUT_ALL_ON_ANY,
    "put all x on any y": PUT_ALL_ON_ANY,
    "n slices of x in y": N_SLICES,
    "put all x in one y": PUT_ALL_IN_ONE,
    "n cooked x slices in y": N_COOKED_SLICES,
    "n cooked slices of x in y": N_COOKED_SLICES,
    "boil a potato": BOIL_POTATO,
    "make breakfast": PREPARE_BREAKFAST,
    "make sandwich": PREPARE_SANDWICH,
    "make salad": PREPARE_SALAD,
}

_REQUIRED_PARAMS: Final[dict[str, tuple[str, ...]]] = {
    CLEAN_ALL: ("object",),
    PUT_ALL_ON_ANY: ("object", "receptacle"),
    N_SLICES: ("n", "object", "receptacle"),
    PUT_ALL_IN_ONE: ("object", "receptacle"),
    N_COOKED_SLICES: ("n", "object", "receptacle"),
}


class TaskSpecError(Exception):
    """Raised when a task name or its parameters are invalid."""


def canonical_task_name(name: str) -> str:
    """Map a task name or alias onto its canonical spelling.

    Args:
        name: Task name in any accepted spelling, case-insensitive.

    Returns:
        Canonical task name.

    Raises:
        TaskSpecError: If the name is not a known task.
    """
    key = " ".join(name.split()).lower()
    for canonical in TASK_NAMES:
        if canonical.lower() == key:
            return canonical
    if key in _ALIASES:
        return _ALIASES[key]
    raise TaskSpecError(f"Unknown task: {name!r}")


@dataclass(frozen=True)
class TaskParams:
    """Template slots; unused slots stay None."""

    n: int | None = None
    object: str | None = None
    receptacle: str | None = None

    @classmethod
    def from_dict(cls, data: Mapping[str, Any] | None) -> TaskParams:
        """Build from a mapping using either ``N/Object/Receptacle`` or lowercase keys."""
        if not data:
            return cls()
        lowered = {str(k).lower(): v for k, v in data.items()}
        raw_n = lowered.get("n")
        n: int | None
        if raw_n in (None, ""):
            n = None
        else:
            try:
                n = int(raw_n)
            except (TypeError, ValueError) as e:
                raise TaskSpecError(f"task_params.N: expected an integer, got {raw_n!r}") from e
        return cls(n=n, object=lowered.get("object") or None, receptacle=lowered.get("receptacle") or None)

    def to_dict(self) -> dict[str, Any]:
        """Return the slots under their template names."""
        return {"N": self.n, "Object": self.object or "", "Receptacle": self.receptacle or ""}


@dataclass(frozen=True)
class TaskSpec:
    """A task template together with its parameters."""

    task: str
    params: TaskParams = field(default_factory=TaskParams)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> TaskSpec:
        """Build and validate a task spec from ``{task, params}``.

        Raises:
            TaskSpecError: If the task is unknown or a required slot is missing.
        """
        if "task" not in data:
            raise TaskSpecError("task: field is required")
        spec = cls(
            task=canonical_task_name(str(data["task"])),
            params=TaskParams.from_dict(data.get("params") or data.get("task_params")),
        )
        spec.validate()
        return spec

    def validate(self) -> None:
        """Check that the template's slots are filled.

        Raises:
            TaskSpecError: If a required slot is empty.
        """
        for slot in _REQUIRED_PARAMS.get(self.task, ()):
            value = getattr(self.params, slot)
            if value is None:
                raise TaskSpecError(f"{self.task}: parameter {slot!r} is required")
            if slot == "n" and value < 1:
                raise TaskSpecError(f"{self.task}: N must be positive")

    @property
    def is_parameterized(self) -> bool:
        """True for templates that carry slots."""
        return self.task in _REQUIRED_PARAMS

    def describe(self) -> str:
        """Render the task for prompts, e.g. ``N slices of Object in Receptacle (N=1, Object=Lettuce, ...)``."""
        if not self.is_parameterized:
            return self.task
        slots = []
        if self.params.n is not None:
            slots.append(f"N={self.params.n}")
        if self.params.object:
            slots.append(f"Object={self.params.object}")
        if self.params.receptacle:
            slots.append(f"Receptacle={self.params.receptacle}")
        return f"{self.task} ({', '.join(slots)})"

    def to_dict(self) -> dict[str, Any]:
        """Serialize for reports and episode files."""
        return {"task": self.task, "params": self.params.to_dict()}


@dataclass(frozen=True)
class GoalCondition:
    """One predicate that must hold for task success.

    ``kind``, ``subject``, ``target`` and ``count`` describe the predicate structurally so
    that reflection can plan against it; ``check`` evaluates it.
    """

    description: str
    kind: str
    subject: str
    check: Callable[[WorldState], bool] = field(compare=False, repr=False)
    target: str | None = None
    count: int = 1


def _clean(world: WorldState, object_id: str) -> bool:
    obj = world.get(object_id)
    return obj is not None and obj.properties.is_clean


def _is_coffee_ready(obj: ObjectInstance) -> bool:
    return obj.properties.is_clean and obj.properties.filled_with_coffee


def _boiled(world: WorldState) -> bool:
    for potato in world.instances_of("Potato"):
        if not potato.properties.cooked_in_water:
            continue
        for ancestor in world.ancestors(potato.id):
            if ancestor.category in WATER_VESSELS and ancestor.properties.is_filled_with_water:
                return True
    return False


def _pieces_in(world: WorldState, piece_category: str, receptacle_category: str, cooked: bool) -> int:
    best = 0
    for receptacle in world.instances_of(receptacle_category):
        count = sum(
            1
            for child_id in receptacle.children
            if world.objects[child_id].category == piece_category
            and (not cooked or world.objects[child_id].properties.is_cooked)
        )
        best = max(best, count)
    return best


def _toast_on_clean_plate(world: WorldState) -> bool:
    for toast in world.instances_of("BreadSliced"):
        if not toast.properties.is_cooked or toast.parent is None:
            continue
        plate = world.objects[toast.parent]
        if plate.category == "Plate" and plate.properties.is_clean:
            return True
    return False


def _shared_container(world: WorldState, category: str, receptacle: str) -> str | None:
    """Return the receptacle instance holding the most ``category`` objects (ties: lowest id)."""
    counts: dict[str, int] = {}
    for obj in world.instances_of(category):
        for ancestor in world.ancestors(obj.id):
            if ancestor.category == receptacle:
                counts[ancestor.id] = counts.get(ancestor.id, 0) + 1
                break
    if not counts:
        return None
    return min(counts, key=lambda rid: (-counts[rid], rid))


def _in_one(world: WorldState, object_id: str, receptacle: str) -> bool:
    if world.get(object_id) is None:
        return False
    chosen = _shared_container(world, _category(object_id), receptacle)
    return chosen is not None and any(a.id == chosen for a in world.ancestors(object_id))


def _on_any(world: WorldState, object_id: str, receptacle: str) -> bool:
    obj = world.get(object_id)
    return obj is not None and obj.parent is not None and world.objects[obj.parent].category == receptacle


def _category(object_id: str) -> str:
    return object_id.rsplit("_", 1)[0]


def _coffee_conditions() -> list[GoalCondition]:
    vessels = "/".join(sorted(COFFEE_VESSELS, reverse=True))
    return [
        GoalCondition(
            description=f"a {vessels} is clean",
            kind="clean_vessel",
            subject="Mug",
            check=lambda w: any(o.properties.is_clean for c in COFFEE_VESSELS for o in w.instances_of(c)),
        ),
        GoalCondition(
            description=f"a clean {vessels} is filled with coffee",
            kind="coffee",
            subject="Mug",
            check=lambda w: any(_is_coffee_ready(o) for c in COFFEE_VESSELS for o in w.instances_of(c)),
        ),
    ]


def _toast_conditions(slices: int = 1) -> list[GoalCondition]:
    conditions = [
        GoalCondition(
            description="a BreadSliced is toasted",
            kind="toasted",
            subject="BreadSliced",
            check=lambda w: any(b.properties.is_cooked for b in w.instances_of("BreadSliced")),
        ),
        GoalCondition(
            description="a toasted BreadSliced is on a clean Plate",
            kind="toast_on_clean_plate",
            subject="BreadSliced",
            target="Plate",
            check=_toast_on_clean_plate,
        ),
    ]
    for count in range(2, slices + 1):
        conditions.append(_slices_condition("BreadSliced", "Plate", count, cooked=True))
    return conditions


def _slices_condition(piece: str, receptacle: str, count: int, cooked: bool) -> GoalCondition:
    adjective = "cooked " if cooked else ""
    return GoalCondition(
        description=f"at least {count} {adjective}{piece} in a {receptacle}",
        kind="cooked_slices_in" if cooked else "slices_in",
        subject=piece,
        target=receptacle,
        count=count,
        check=lambda w: _pieces_in(w, piece, receptacle, cooked) >= count,
    )


def _per_instance(world: WorldState, category: str, make: Callable[[str], GoalCondition]) -> list[GoalCondition]:
    ids = [o.id for o in world.instances_of(category)]
    if ids:
        return [make(object_id) for object_id in ids]
    # An empty quantifier is unmet, never vacuously true.
    return [
        GoalCondition(
            description=f"at least one {category} is present",
            kind="absent",
            subject=category,
            check=lambda w: False,
        )
    ]


def goal_conditions_for(task: TaskSpec, world: WorldState) -> list[GoalCondition]:
    """Ground a task's goal conditions against the instances in a world.

    Args:
        task: Task to ground.
        world: World whose instances ground the "all X" quantifiers.

    Returns:
        Non-empty list in a fixed order.

    Raises:
        TaskSpecError: If the task is unknown or misses a required slot.
    """
    name = canonical_task_name(task.task)
    params = task.params
    TaskSpec(name, params).validate()

    if name == WATER_PLANT:
        return _per_instance(
            world,
            "HousePlant",
            lambda pid: GoalCondition(
                description=f"{pid} is watered",
                kind="watered",
                subject=pid,
                check=lambda w: (p := w.get(pid)) is not None and p.properties.is_filled_with_water,
            ),
        )
    if name == BOIL_POTATO:
        return [
            GoalCondition(
                description="a Potato is boiled on a StoveBurner in a water-filled vessel",
                kind="boiled",
                subject="Potato",
                target="Pot",
                check=_boiled,
            )
        ]
    if name == MAKE_COFFEE:
        return _coffee_conditions()
    if name == MAKE_TOAST:
        return _toast_conditions()
    if name == CLEAN_ALL:
        category = str(params.object)
        return _per_instance(
            world,
            category,
            lambda oid: GoalCondition(
                description=f"{oid} is clean",
                kind="clean",
                subject=oid,
                check=lambda w: _clean(w, oid),
            ),
        )
    if name == PUT_ALL_ON_ANY:
        category, receptacle = str(params.object), str(params.receptacle)
        return _per_instance(
            world,
            category,
            lambda oid: GoalCondition(
                description=f"{oid} is on a {receptacle}",
                kind="on_any",
                subject=oid,
                target=receptacle,
                check=lambda w: _on_any(w, oid, receptacle),
            ),
        )
    if name == PUT_ALL_IN_ONE:
        category, receptacle = str(params.object), str(params.receptacle)
        return _per_instance(
            world,
            category,
            lambda oid: GoalCondition(
                description=f"{oid} is in the shared {receptacle}",
                kind="in_one",
                subject=oid,
                target=receptacle,
                check=lambda w: _in_one(w, oid, receptacle),
            ),
        )
    if name in (N_SLICES, N_COOKED_SLICES):
        obj = str(params.object)
        piece = sliced_category(obj) or obj
        cooked = name == N_COOKED_SLICES
        return [_slices_condition(piece, str(params.receptacle), i, cooked) for i in range(1, int(params.n or 1) + 1)]
    if name == PREPARE_BREAKFAST:
        return _coffee_conditions() + _toast_conditions()
    if name == PREPARE_SANDWICH:
        return _toast_conditions(slices=2) + [_slices_condition("LettuceSliced", "Plate", 1, cooked=False)]
    if name == PREPARE_SALAD:
        return [
            _slices_condition("LettuceSliced", "Plate", 1, cooked=False),
            _slices_condition("TomatoSliced", "Plate", 1, cooked=False),
        ]
    raise TaskSpecError(f"Unknown task: {task.task!r}")


def evaluate_goals(task: TaskSpec, world: WorldState) -> tuple[int, int]:
    """Count satisfied goal conditions.

    Args:
        task: Task to evaluate.
        world: World to evaluate against.

    Returns:
        ``(satisfied, total)``.
    """
    conditions = goal_conditions_for(task, world)
    satisfied = sum(1 for condition in conditions if condition.check(world))
    return satisfied, len(conditions)
