"""Ground-truth answers for every prompt template.

Each ``answer_*`` function reads the structured ``OracleContext`` attached to a request
and returns the JSON document a competent model would reply with. The scripted backend
serializes these documents and feeds them through the same validation as remote replies.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from typing import Any, Final

from recovery_agent.executor.memory import MemoryEntry, believed_world
from recovery_agent.executor.subgoal import Subgoal, Verb
from recovery_agent.planner import closest_category
from recovery_agent.reasoner.base import OracleContext, ReasonerUnavailable, TemplateId
from recovery_agent.search import scripted_chain
from recovery_agent.tasks import GoalCondition, goal_conditions_for
from recovery_agent.world.catalog import (
    CATEGORIES,
    COFFEE_VESSELS,
    KNIVES,
    SINKS,
    SURFACES,
    WATER_VESSELS,
    category_of,
    is_instance_id,
)
from recovery_agent.world.state import FailureReason, ObjectInstance, WorldState

__all__ = [
    "SUBSTITUTES",
    "SYNONYMS",
    "answer",
    "answer_normalize",
    "answer_plan",
    "answer_search",
    "answer_stage1",
    "answer_stage2",
    "answer_stage3",
    "answer_stage4",
    "missing_preconditions",
    "postcondition_holds",
]

SYNONYMS: Final[dict[str, str]] = {
    "cupboard": "Cabinet",
    "cabinets": "Cabinet",
    "table": "DiningTable",
    "kitchentable": "DiningTable",
    "couch": "Sofa",
    "counter": "CounterTop",
    "countertop": "CounterTop",
    "refrigerator": "Fridge",
    "stove": "StoveBurner",
    "burner": "StoveBurner",
    "oven": "Microwave",
    "tap": "Faucet",
    "coffeemaker": "CoffeeMachine",
    "remote": "RemoteControl",
    "tv": "Television",
    "plant": "HousePlant",
    "trashcan": "GarbageCan",
    "bin": "GarbageCan",
    "sponge": "DishSponge",
    "phone": "CellPhone",
    "glass": "Cup",
    "dish": "Plate",
    "toast": "BreadSliced",
}

SUBSTITUTES: Final[dict[str, tuple[str, ...]]] = {
    "Chair": ("Sofa", "ArmChair"),
    "Cup": ("Mug",),
    "Mug": ("Cup",),
    "Knife": ("ButterKnife",),
    "ButterKnife": ("Knife",),
    "Pot": ("Pan", "Kettle"),
    "Pan": ("Pot",),
    "CounterTop": ("DiningTable", "SideTable"),
    "Faucet": ("Sink",),
    "Sink": ("SinkBasin",),
    "Bowl": ("Plate",),
    "Plate": ("Bowl",),
}

_RELOCATE_REASONS: Final[frozenset[FailureReason]] = frozenset({
    FailureReason.OBJECT_NOT_FOUND,
    FailureReason.NO_PATH,
    FailureReason.NAVIGATION_FAILED,
    FailureReason.NOT_IN_RANGE,
})


# -- memory helpers ---------------------------------------------------------------------


def _distance(ctx: OracleContext, entry: MemoryEntry) -> int:
    if ctx.agent_cell is None:
        return 0
    return abs(entry.cell[0] - ctx.agent_cell[0]) + abs(entry.cell[1] - ctx.agent_cell[1])


def _nearest(ctx: OracleContext, entries: Iterable[MemoryEntry]) -> MemoryEntry | None:
    ranked = sorted(entries, key=lambda e: (_distance(ctx, e), e.object_id))
    return ranked[0] if ranked else None


def _instances(ctx: OracleContext, category: str) -> list[MemoryEntry]:
    return sorted((e for e in ctx.memory.values() if e.category == category), key=lambda e: e.object_id)


def _resolve(ctx: OracleContext, reference: str) -> list[MemoryEntry]:
    reference = ctx.aliases.get(reference, reference)
    if is_instance_id(reference):
        entry = ctx.memory.get(reference)
        return [entry] if entry is not None else []
    return _instances(ctx, reference)


def _holds(ctx: OracleContext, reference: str) -> bool:
    if ctx.held is None:
        return False
    reference = ctx.aliases.get(reference, reference)
    return ctx.held == reference or (not is_instance_id(reference) and category_of(ctx.held) == reference)


def _matches(entry: MemoryEntry | None, reference: str, ctx: OracleContext) -> bool:
    if entry is None:
        return False
    reference = ctx.aliases.get(reference, reference)
    return entry.object_id == reference or (not is_instance_id(reference) and entry.category == reference)


def _closed_ancestor(ctx: OracleContext, entry: MemoryEntry) -> MemoryEntry | None:
    parent = ctx.memory.get(entry.parent) if entry.parent else None
    found: MemoryEntry | None = None
    seen: set[str] = set()
    while parent is not None and parent.object_id not in seen:
        seen.add(parent.object_id)
        if parent.affordances.openable and not parent.properties.is_open:
            found = parent
        parent = ctx.memory.get(parent.parent) if parent.parent else None
    return found


def _is_full(entry: MemoryEntry) -> bool:
    return len(entry.children) >= entry.affordances.capacity


# -- stage 1 ----------------------------------------------------------------------------


def postcondition_holds(subgoal: Subgoal, ctx: OracleContext) -> bool:
    """Whether memory already shows the effect the subgoal is meant to produce."""
    verb = subgoal.verb
    entries = _resolve(ctx, subgoal.subject)
    if verb in (Verb.FIND, Verb.GO_TO):
        return False
    if verb == Verb.PICK_UP:
        return _holds(ctx, subgoal.subject)
    if verb == Verb.PLACE:
        return any(e.parent is not None and _matches(ctx.memory.get(e.parent), subgoal.target, ctx) for e in entries)
    if verb == Verb.OPEN:
        return any(e.properties.is_open for e in entries)
    if verb == Verb.CLOSE:
        return bool(entries) and all(not e.properties.is_open for e in entries)
    if verb == Verb.TOGGLE_ON:
        return any(e.properties.is_toggled for e in entries)
    if verb == Verb.TOGGLE_OFF:
        return bool(entries) and all(not e.properties.is_toggled for e in entries)
    if verb == Verb.SLICE:
        category = category_of(ctx.aliases.get(subgoal.subject, subgoal.subject))
        pieces = _instances(ctx, f"{category}Sliced")
        gone = not entries if is_instance_id(subgoal.subject) else True
        return gone and bool(pieces)
    if verb == Verb.POUR:
        receptacles = _resolve(ctx, subgoal.target)
        return (
            bool(entries)
            and all(not e.properties.is_filled for e in entries)
            and any(r.properties.is_filled_with_water for r in receptacles)
        )
    if verb == Verb.FILL_WITH_WATER:
        return any(e.properties.is_filled_with_water for e in entries)
    if verb == Verb.CLEAN:
        return bool(entries) and all(e.properties.is_clean for e in entries)
    if verb == Verb.EMPTY:
        return bool(entries) and all(not e.children and not e.properties.is_filled for e in entries)
    # Put_away
    return any(
        not _holds(ctx, e.object_id)
        and e.parent is not None
        and (parent := ctx.memory.get(e.parent)) is not None
        and parent.category in SURFACES
        for e in entries
    )


def answer_stage1(ctx: OracleContext) -> dict[str, Any]:
    """Judge whether the failing subgoal still matters."""
    subgoal = _failing(ctx)
    if postcondition_holds(subgoal, ctx):
        return {"important": "no", "justification": f"the effect of {subgoal} already holds in the environment"}
    return {"important": "yes", "justification": f"the task cannot progress until {subgoal} is achieved"}


# -- stage 2 ----------------------------------------------------------------------------


def _knife(ctx: OracleContext) -> list[Subgoal]:
    for planned, _ in ctx.plan:
        for arg in planned.args:
            if category_of(arg) in KNIVES and _resolve(ctx, arg):
                knife = _resolve(ctx, arg)[0].object_id
                return [Subgoal(Verb.GO_TO, (knife,)), Subgoal(Verb.PICK_UP, (knife,))]
    entry = _nearest(ctx, (e for e in ctx.memory.values() if e.category in KNIVES))
    if entry is not None:
        return [Subgoal(Verb.GO_TO, (entry.object_id,)), Subgoal(Verb.PICK_UP, (entry.object_id,))]
    return [Subgoal(Verb.FIND, ("Knife",)), Subgoal(Verb.PICK_UP, ("Knife",))]


def _put_away_held(ctx: OracleContext) -> list[Subgoal]:
    return [Subgoal(Verb.PUT_AWAY, (ctx.held,))] if ctx.held is not None else []


def _full_sink(ctx: OracleContext) -> list[Subgoal]:
    sink = _nearest(ctx, (e for e in ctx.memory.values() if e.category in SINKS))
    if sink is not None and _is_full(sink):
        return [Subgoal(Verb.EMPTY, (sink.object_id,))]
    return []


def missing_preconditions(subgoal: Subgoal, ctx: OracleContext) -> list[Subgoal]:
    """Subgoals that must run before ``subgoal`` can succeed.

    Args:
        subgoal: Failing subgoal.
        ctx: Memory, hand and plan facts.

    Returns:
        Prefix subgoals; empty when no precondition is missing.
    """
    verb = subgoal.verb
    subject = subgoal.subject
    entries = _resolve(ctx, subject)

    if verb == Verb.PICK_UP:
        if ctx.held is not None:
            return _put_away_held(ctx)
        for entry in entries:
            closed = _closed_ancestor(ctx, entry)
            if closed is not None:
                return [Subgoal(Verb.OPEN, (closed.object_id,))]
        return []
    if verb == Verb.PLACE:
        receptacles = _resolve(ctx, subgoal.target)
        if not _holds(ctx, subject):
            prefix = _put_away_held(ctx)
            return prefix + [Subgoal(Verb.PICK_UP, (subject,))]
        for receptacle in receptacles:
            if receptacle.affordances.openable and not receptacle.properties.is_open:
                return [Subgoal(Verb.OPEN, (receptacle.object_id,))]
        if receptacles and all(_is_full(r) for r in receptacles):
            target = receptacles[0].object_id
            return [
                Subgoal(Verb.PUT_AWAY, (subject,)),
                Subgoal(Verb.EMPTY, (target,)),
                Subgoal(Verb.PICK_UP, (subject,)),
            ]
        return []
    if verb == Verb.SLICE:
        if ctx.held is not None and category_of(ctx.held) in KNIVES:
            return []
        return _put_away_held(ctx) + _knife(ctx)
    if verb == Verb.OPEN:
        return [Subgoal(Verb.TOGGLE_OFF, (e.object_id,)) for e in entries[:1] if e.properties.is_toggled]
    if verb == Verb.POUR:
        if not _holds(ctx, subject):
            return _put_away_held(ctx) + [Subgoal(Verb.PICK_UP, (subject,))]
        receptacle = _nearest(ctx, _resolve(ctx, subgoal.target))
        if receptacle is not None and _distance(ctx, receptacle) > 2:
            return [Subgoal(Verb.GO_TO, (receptacle.object_id,))]
        return []
    if verb in (Verb.CLEAN, Verb.FILL_WITH_WATER):
        prefix = [] if ctx.held is None or _holds(ctx, subject) else _put_away_held(ctx)
        return prefix + _full_sink(ctx)
    return []


def answer_stage2(ctx: OracleContext) -> dict[str, Any]:
    """List the missing preconditions of the failing subgoal."""
    actions = missing_preconditions(_failing(ctx), ctx)
    return {"prior required actions": "yes" if actions else "no", "actions": [str(a) for a in actions]}


# -- stage 3 ----------------------------------------------------------------------------


def _culprit(subgoal: Subgoal, ctx: OracleContext) -> str:
    for arg in subgoal.args:
        if not _resolve(ctx, arg):
            return arg
    return subgoal.target


def _substitute(culprit: str, ctx: OracleContext) -> str | None:
    resolved = ctx.aliases.get(culprit, culprit)
    category = category_of(resolved)
    if ctx.failure_reason in _RELOCATE_REASONS:
        same = [e for e in _instances(ctx, category) if e.object_id != resolved]
        if not is_instance_id(resolved) and same:
            nearest = _nearest(ctx, same)
            same = [e for e in same if nearest is None or e.object_id != nearest.object_id]
        other = _nearest(ctx, same)
        if other is not None:
            return other.object_id
    for alternative in SUBSTITUTES.get(category, ()):
        known = _instances(ctx, alternative)
        if known:
            return known[0].object_id
    return None


def answer_stage3(ctx: OracleContext) -> dict[str, Any]:
    """Swap the offending object for an equivalent one, if any is known."""
    subgoal = _failing(ctx)
    culprit = _culprit(subgoal, ctx)
    substitute = _substitute(culprit, ctx)
    if substitute is None:
        return {"solution": []}
    return {"solution": [str(subgoal.replace_arg(culprit, substitute))]}


# -- stage 4 ----------------------------------------------------------------------------


class _ScriptBuilder:
    """Builds corrective scripts from known objects while tracking the hand."""

    def __init__(self, ctx: OracleContext, world: WorldState, conditions: list[GoalCondition]) -> None:
        self.ctx = ctx
        self.world = world
        self.conditions = conditions
        self.hand = ctx.held
        self.claimed: set[str] = set()

    def known(self, category: str) -> list[ObjectInstance]:
        objects = [o for o in self.world.instances_of(category) if o.id in self.ctx.memory]
        return sorted(objects, key=lambda o: (self._distance(o), o.id))

    def _distance(self, obj: ObjectInstance) -> int:
        cell = self.world.root_of(obj.id).cell
        agent = self.ctx.agent_cell or cell
        return abs(cell[0] - agent[0]) + abs(cell[1] - agent[1])

    def first(
        self, categories: Iterable[str], key: Callable[[ObjectInstance], bool] | None = None
    ) -> ObjectInstance | None:
        for category in categories:
            for obj in self.known(category):
                if key is None or key(obj):
                    return obj
        return None

    def pick(self, object_id: str) -> list[Subgoal]:
        if self.hand == object_id:
            return []
        self.hand = object_id
        return [Subgoal(Verb.PICK_UP, (object_id,))]

    def place(self, object_id: str, receptacle: str) -> list[Subgoal]:
        steps = self.pick(object_id) + [Subgoal(Verb.PLACE, (object_id, receptacle))]
        self.hand = None
        return steps

    def clean(self, object_id: str) -> list[Subgoal]:
        self.hand = object_id
        return [Subgoal(Verb.CLEAN, (object_id,))]

    def cycle(self, appliance: ObjectInstance) -> list[Subgoal]:
        steps = [Subgoal(Verb.TOGGLE_OFF, (appliance.id,))] if appliance.properties.is_toggled else []
        return steps + [Subgoal(Verb.TOGGLE_ON, (appliance.id,)), Subgoal(Verb.TOGGLE_OFF, (appliance.id,))]

    def goal_items(self) -> set[str]:
        return {c.subject for c in self.conditions}

    # one method per goal kind

    def script_clean(self, condition: GoalCondition) -> list[Subgoal]:
        target = self.world.get(condition.subject)
        if target is None or target.id not in self.ctx.memory:
            return []
        items = self.goal_items()
        inside = [c for c in target.children if c in items or category_of(c) in items]
        steps = self.clean(target.id)
        for item in inside:
            steps.append(Subgoal(Verb.PLACE, (item, target.id)))
        return steps

    def script_clean_vessel(self, condition: GoalCondition) -> list[Subgoal]:
        vessel = self.first(sorted(COFFEE_VESSELS, reverse=True))
        return self.clean(vessel.id) if vessel is not None else []

    def script_coffee(self, condition: GoalCondition) -> list[Subgoal]:
        vessel = self.first(sorted(COFFEE_VESSELS, reverse=True), lambda o: o.properties.is_clean)
        vessel = vessel or self.first(sorted(COFFEE_VESSELS, reverse=True))
        machine = self.first(["CoffeeMachine"])
        if vessel is None or machine is None:
            return []
        steps: list[Subgoal] = []
        if vessel.parent != machine.id:
            if vessel.properties.is_filled_with_water:
                sink = self.first(sorted(SINKS, reverse=True))
                if sink is not None:
                    steps += self.pick(vessel.id) + [Subgoal(Verb.POUR, (vessel.id, sink.id))]
            steps += self.place(vessel.id, machine.id)
        if machine.properties.is_toggled:
            steps.append(Subgoal(Verb.TOGGLE_OFF, (machine.id,)))
        steps.append(Subgoal(Verb.TOGGLE_ON, (machine.id,)))
        return steps

    def _bread(self) -> tuple[list[Subgoal], str | None]:
        piece = self.first(["BreadSliced"], lambda o: o.properties.is_cooked and o.id not in self.claimed)
        piece = piece or self.first(["BreadSliced"], lambda o: o.id not in self.claimed)
        if piece is not None:
            self.claimed.add(piece.id)
            return [], piece.id
        loaf = self.first(["Bread"])
        if loaf is None:
            return [], None
        return [Subgoal(Verb.SLICE, (loaf.id,))], "BreadSliced"

    def script_toasted(self, condition: GoalCondition) -> list[Subgoal]:
        toaster = self.first(["Toaster"])
        prefix, piece = self._bread()
        if toaster is None or piece is None:
            return []
        steps = prefix
        if toaster.properties.is_toggled:
            steps.append(Subgoal(Verb.TOGGLE_OFF, (toaster.id,)))
        steps += self.place(piece, toaster.id)
        steps += [Subgoal(Verb.TOGGLE_ON, (toaster.id,)), Subgoal(Verb.TOGGLE_OFF, (toaster.id,))]
        return steps

    def script_toast_on_clean_plate(self, condition: GoalCondition) -> list[Subgoal]:
        toast = self.first(["BreadSliced"], lambda o: o.properties.is_cooked)
        if toast is None:
            toast = self.first(["BreadSliced"])
        if toast is None:
            return []
        holder = self.world.get(toast.parent) if toast.parent else None
        if holder is not None and holder.category == "Plate" and holder.id in self.ctx.memory:
            if holder.properties.is_clean:
                return []
            return self.clean(holder.id) + [Subgoal(Verb.PLACE, (toast.id, holder.id))]
        plate = self.first(["Plate"], lambda o: o.properties.is_clean) or self.first(["Plate"])
        if plate is None:
            return []
        steps: list[Subgoal] = []
        if not plate.properties.is_clean:
            steps += self.clean(plate.id) + [Subgoal(Verb.PUT_AWAY, (plate.id,))]
            self.hand = None
        return steps + self.place(toast.id, plate.id)

    def _receptacle(self, category: str, piece: str) -> ObjectInstance | None:
        counts = {
            r.id: sum(1 for c in r.children if self.world.objects[c].category == piece) for r in self.known(category)
        }
        if not counts:
            return None
        best = min(counts, key=lambda rid: (-counts[rid], rid))
        return self.world.objects[best]

    def script_slices(self, condition: GoalCondition, cooked: bool) -> list[Subgoal]:
        piece_category = condition.subject
        receptacle = self._receptacle(str(condition.target), piece_category)
        if receptacle is None:
            return []

        def loose(obj: ObjectInstance) -> bool:
            return obj.id not in self.claimed and obj.parent != receptacle.id

        ready = self.first([piece_category], lambda o: loose(o) and (o.properties.is_cooked or not cooked))
        if ready is not None:
            self.claimed.add(ready.id)
            return self.place(ready.id, receptacle.id)
        raw = self.first([piece_category], loose)
        if raw is not None and cooked:
            appliance = self.first(["Toaster"] if piece_category == "BreadSliced" else ["Microwave", "StoveBurner"])
            if appliance is None:
                return []
            self.claimed.add(raw.id)
            return self.place(raw.id, appliance.id) + self.cycle(appliance) + self.place(raw.id, receptacle.id)
        whole = self.first([piece_category.removesuffix("Sliced")])
        if whole is None:
            return []
        return [Subgoal(Verb.SLICE, (whole.id,))] + self.place(piece_category, receptacle.id)

    def script_on_any(self, condition: GoalCondition) -> list[Subgoal]:
        obj = self.world.get(condition.subject)
        surface = self.first([str(condition.target)], lambda o: len(o.children) < o.affordances.capacity)
        if obj is None or obj.id not in self.ctx.memory or surface is None:
            return []
        return self.place(obj.id, surface.id)

    def script_in_one(self, condition: GoalCondition) -> list[Subgoal]:
        obj = self.world.get(condition.subject)
        if obj is None or obj.id not in self.ctx.memory:
            return []
        container = self._receptacle(str(condition.target), obj.category)
        return self.place(obj.id, container.id) if container is not None else []

    def script_watered(self, condition: GoalCondition) -> list[Subgoal]:
        plant = self.world.get(condition.subject)
        if plant is None or plant.id not in self.ctx.memory:
            return []
        vessel = self.first(
            ["WateringCan", *sorted(COFFEE_VESSELS, reverse=True), *sorted(WATER_VESSELS, reverse=True)],
            lambda o: o.affordances.fillable and o.affordances.pickupable,
        )
        if vessel is None:
            return []
        steps: list[Subgoal] = []
        if not vessel.properties.is_filled_with_water:
            steps.append(Subgoal(Verb.FILL_WITH_WATER, (vessel.id,)))
            self.hand = None
        return steps + self.pick(vessel.id) + [Subgoal(Verb.POUR, (vessel.id, plant.id))]

    def script_boiled(self, condition: GoalCondition) -> list[Subgoal]:
        potato = self.first(["Potato"])
        pot = self.first(["Pot", *sorted(WATER_VESSELS - {"Pot"})], lambda o: o.properties.is_filled_with_water)
        if potato is None or pot is None:
            return []
        holder = self.world.get(pot.parent) if pot.parent else None
        burner = holder if holder is not None and holder.category == "StoveBurner" else self.first(["StoveBurner"])
        steps = [] if potato.parent == pot.id else self.place(potato.id, pot.id)
        if burner is not None:
            if burner.properties.is_toggled:
                steps.append(Subgoal(Verb.TOGGLE_OFF, (burner.id,)))
            steps.append(Subgoal(Verb.TOGGLE_ON, (burner.id,)))
        return steps

    def build(self) -> list[Subgoal]:
        scripts: dict[str, Callable[[GoalCondition], list[Subgoal]]] = {
            "clean": self.script_clean,
            "clean_vessel": self.script_clean_vessel,
            "coffee": self.script_coffee,
            "toasted": self.script_toasted,
            "toast_on_clean_plate": self.script_toast_on_clean_plate,
            "slices_in": lambda c: self.script_slices(c, cooked=False),
            "cooked_slices_in": lambda c: self.script_slices(c, cooked=True),
            "on_any": self.script_on_any,
            "in_one": self.script_in_one,
            "watered": self.script_watered,
            "boiled": self.script_boiled,
            "absent": lambda c: [],
        }
        solution: list[Subgoal] = []
        for condition in self.conditions:
            if condition.check(self.world):
                continue
            solution += scripts[condition.kind](condition)
        return solution


def answer_stage4(ctx: OracleContext) -> dict[str, Any]:
    """Compare the goal against what the agent has observed and script the missing parts."""
    if ctx.task is None or ctx.agent_cell is None:
        raise ReasonerUnavailable("stage4 needs the task and the agent pose")
    world = believed_world(ctx.memory, ctx.agent_cell, ctx.held)
    conditions = goal_conditions_for(ctx.task, world)
    return {"solution": [str(s) for s in _ScriptBuilder(ctx, world, conditions).build()]}


# -- planning, search, normalization ----------------------------------------------------


def answer_plan(ctx: OracleContext) -> dict[str, Any]:
    """Reply with the episode's scripted plan, else the closest demonstration's output."""
    if ctx.planner_reply is not None:
        return dict(ctx.planner_reply)
    if ctx.demonstrations:
        return dict(ctx.demonstrations[0].output)
    raise ReasonerUnavailable("No planner reply and no demonstrations to copy from")


def answer_search(ctx: OracleContext) -> dict[str, Any]:
    """Follow the location triples towards the search target."""
    if ctx.search_target is None:
        return {"actions": []}
    return {"actions": [str(s) for s in scripted_chain(ctx.search_target, ctx.locations)]}


def answer_normalize(ctx: OracleContext) -> dict[str, Any]:
    """Map an out-of-vocabulary category onto the vocabulary."""
    raw = (ctx.raw_category or "").strip()
    key = raw.lower().replace(" ", "").replace("_", "")
    for category in CATEGORIES:
        if category.lower() == key:
            return {"category": category}
    if key in SYNONYMS:
        return {"category": SYNONYMS[key]}
    return {"category": closest_category(raw)}


def _failing(ctx: OracleContext) -> Subgoal:
    if ctx.failing_subgoal is None:
        raise ReasonerUnavailable("Recovery request without a failing subgoal")
    return ctx.failing_subgoal


_ANSWERS: Final[dict[TemplateId, Callable[[OracleContext], dict[str, Any]]]] = {
    TemplateId.PLAN: answer_plan,
    TemplateId.STAGE1: answer_stage1,
    TemplateId.STAGE2: answer_stage2,
    TemplateId.STAGE3: answer_stage3,
    TemplateId.STAGE4: answer_stage4,
    TemplateId.SEARCH: answer_search,
    TemplateId.NORMALIZE: answer_normalize,
}


def answer(template_id: TemplateId, ctx: OracleContext) -> dict[str, Any]:
    """Dispatch to the answer function of a template."""
    return _ANSWERS[template_id](ctx)
