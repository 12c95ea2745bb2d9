"""Unit tests for the ground-truth answers behind the scripted backend."""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

import pytest

from recovery_agent.executor import MemoryEntry, ObjectMemory, parse_subgoal
from recovery_agent.planner import Demonstration, Dialogue, LocationTriple
from recovery_agent.reasoner import OracleContext, ReasonerUnavailable
from recovery_agent.reasoner.oracle import (
    answer_normalize,
    answer_plan,
    answer_search,
    answer_stage1,
    answer_stage2,
    answer_stage3,
    answer_stage4,
)
from recovery_agent.tasks import TaskSpec
from recovery_agent.world import FailureReason, WorldState

MakeWorld = Callable[..., WorldState]


def full_memory(world: WorldState) -> dict[str, MemoryEntry]:
    """Memory as if every object had been seen in its current state."""
    return {
        obj.id: MemoryEntry(
            object_id=obj.id,
            category=obj.category,
            cell=obj.cell,
            height=obj.height,
            properties=obj.properties,
            affordances=obj.affordances,
            parent=obj.parent,
            children=tuple(obj.children),
            last_seen_step=0,
        )
        for obj in world.objects.values()
    }


def context(world: WorldState, failing: str | None = None, **kwargs: Any) -> OracleContext:
    return OracleContext(
        failing_subgoal=parse_subgoal(failing) if failing else None,
        memory=full_memory(world),
        held=world.agent.held_object,
        agent_cell=world.agent.cell,
        **kwargs,
    )


class TestStage1:
    """Test importance judgements."""

    def test_effect_already_holds(self, make_world: MakeWorld) -> None:
        """Test that a pickup of the held object is unimportant."""
        world = make_world({"id": "Mug_1"}, held="Mug_1")
        assert answer_stage1(context(world, "Pick_up(Mug)"))["important"] == "no"

    def test_effect_missing(self, make_world: MakeWorld) -> None:
        """Test that an unmet effect is important."""
        world = make_world({"id": "Mug_1", "parent": "CounterTop_2"})
        reply = answer_stage1(context(world, "Pick_up(Mug)"))
        assert reply["important"] == "yes"
        assert "Pick_up(Mug)" in reply["justification"]

    def test_open_container(self, make_world: MakeWorld) -> None:
        """Test an Open whose container is already open."""
        world = make_world({"id": "Cabinet_2", "cell": [7, 5], "properties": {"is_open": True}})
        assert answer_stage1(context(world, "Open(Cabinet_2)"))["important"] == "no"

    def test_requires_failing_subgoal(self, make_world: MakeWorld) -> None:
        """Test the missing-context error."""
        with pytest.raises(ReasonerUnavailable):
            answer_stage1(context(make_world()))


class TestStage2:
    """Test missing-precondition detection."""

    def test_hand_occupied(self, make_world: MakeWorld) -> None:
        """Test that a full hand is put away before picking up."""
        world = make_world({"id": "Mug_1", "parent": "CounterTop_2"}, {"id": "Apple_1"}, held="Apple_1")
        reply = answer_stage2(context(world, "Pick_up(Mug)"))
        assert reply == {"prior required actions": "yes", "actions": ["Put_away(Apple_1)"]}

    def test_knife_for_slicing(self, make_world: MakeWorld) -> None:
        """Test that a known knife is fetched before slicing."""
        world = make_world({"id": "Lettuce_1", "parent": "CounterTop_1"}, {"id": "Knife_1", "parent": "CounterTop_2"})
        assert answer_stage2(context(world, "Slice(Lettuce)"))["actions"] == ["Go_to(Knife_1)", "Pick_up(Knife_1)"]

    def test_unknown_knife(self, make_world: MakeWorld) -> None:
        """Test that an unknown knife is searched for by category."""
        world = make_world({"id": "Lettuce_1", "parent": "CounterTop_1"})
        assert answer_stage2(context(world, "Slice(Lettuce)"))["actions"] == ["Find(Knife)", "Pick_up(Knife)"]

    def test_occupied_appliance(self, make_world: MakeWorld) -> None:
        """Test clearing a full receptacle before placing."""
        world = make_world({"id": "Cup_1", "parent": "CoffeeMachine_1"}, {"id": "Mug_1"}, held="Mug_1")
        assert answer_stage2(context(world, "Place(Mug,CoffeeMachine)"))["actions"] == [
            "Put_away(Mug)",
            "Empty(CoffeeMachine_1)",
            "Pick_up(Mug)",
        ]

    def test_closed_receptacle(self, make_world: MakeWorld) -> None:
        """Test opening a closed receptacle before placing."""
        world = make_world({"id": "Egg_1"}, held="Egg_1")
        assert answer_stage2(context(world, "Place(Egg,Fridge)"))["actions"] == ["Open(Fridge_1)"]

    def test_toggled_appliance(self, make_world: MakeWorld) -> None:
        """Test switching an appliance off before opening it."""
        world = make_world({"id": "Microwave_1", "cell": [7, 5], "properties": {"is_toggled": True}})
        assert answer_stage2(context(world, "Open(Microwave)"))["actions"] == ["Toggle_off(Microwave_1)"]

    def test_nothing_missing(self, make_world: MakeWorld) -> None:
        """Test a subgoal whose preconditions hold."""
        world = make_world({"id": "Mug_1", "parent": "CounterTop_2"})
        assert answer_stage2(context(world, "Pick_up(Mug)")) == {"prior required actions": "no", "actions": []}


class TestStage3:
    """Test object substitution."""

    def test_substitute_category(self, make_world: MakeWorld) -> None:
        """Test swapping an unknown mug for a known cup."""
        world = make_world({"id": "Cup_1", "parent": "CounterTop_2"})
        ctx = context(world, "Pick_up(Mug)", failure_reason=FailureReason.OBJECT_NOT_FOUND)
        assert answer_stage3(ctx) == {"solution": ["Pick_up(Cup_1)"]}

    def test_substitute_receptacle(self, make_world: MakeWorld) -> None:
        """Test swapping the target surface."""
        world = make_world({"id": "Lettuce_1"}, held="Lettuce_1")
        ctx = context(world, "Place(Lettuce,CounterTop)", failure_reason=FailureReason.RECEPTACLE_FULL)
        assert answer_stage3(ctx) == {"solution": ["Place(Lettuce,DiningTable_1)"]}

    def test_other_instance_when_unreachable(self, make_world: MakeWorld) -> None:
        """Test relocating to another instance of the same category."""
        world = make_world({"id": "Knife_1", "parent": "CounterTop_1"}, {"id": "Knife_2", "parent": "DiningTable_1"})
        ctx = context(world, "Pick_up(Knife_1)", failure_reason=FailureReason.NOT_IN_RANGE)
        assert answer_stage3(ctx) == {"solution": ["Pick_up(Knife_2)"]}

    def test_no_substitute(self, make_world: MakeWorld) -> None:
        """Test an empty solution when nothing equivalent is known."""
        world = make_world()
        ctx = context(world, "Pick_up(Watch)", failure_reason=FailureReason.OBJECT_NOT_FOUND)
        assert answer_stage3(ctx) == {"solution": []}


class TestStage4:
    """Test post-execution goal scripts."""

    def test_coffee_not_brewed(self, make_world: MakeWorld) -> None:
        """Test the script for an unmet coffee goal."""
        world = make_world({"id": "Mug_1", "parent": "CounterTop_2"})
        ctx = context(world, task=TaskSpec("Make coffee"))
        assert answer_stage4(ctx) == {
            "solution": ["Pick_up(Mug_1)", "Place(Mug_1,CoffeeMachine_1)", "Toggle_on(CoffeeMachine_1)"]
        }

    def test_toast_on_dirty_plate(self, make_world: MakeWorld) -> None:
        """Test cleaning the plate under the toast."""
        world = make_world(
            {"id": "Plate_1", "parent": "DiningTable_1", "properties": {"is_clean": False}},
            {"id": "BreadSliced_1", "parent": "Plate_1", "properties": {"is_cooked": True}},
        )
        ctx = context(world, task=TaskSpec("Make plate of toast"))
        assert answer_stage4(ctx) == {"solution": ["Clean(Plate_1)", "Place(BreadSliced_1,Plate_1)"]}

    def test_goal_met(self, make_world: MakeWorld) -> None:
        """Test an empty script once every condition holds."""
        world = make_world({"id": "Mug_1", "parent": "CoffeeMachine_1", "properties": {"filled_with_coffee": True}})
        assert answer_stage4(context(world, task=TaskSpec("Make coffee"))) == {"solution": []}

    def test_only_observed_state(self, make_world: MakeWorld) -> None:
        """Test that unseen and changed-since-seen objects do not shape the script."""
        world = make_world(
            {"id": "Plate_1", "parent": "CounterTop_2"},
            {"id": "Plate_2", "parent": "DiningTable_1", "properties": {"is_clean": False}},
        )
        memory = ObjectMemory()
        memory.observe(world, 0)
        assert "Plate_2" not in memory
        world.objects["Plate_1"].properties.is_clean = False
        task = TaskSpec.from_dict({"task": "Clean N Object", "params": {"object": "Plate"}})
        seen = OracleContext(task=task, memory=memory.snapshot(), agent_cell=world.agent.cell)
        assert answer_stage4(seen) == {"solution": []}
        assert answer_stage4(context(world, task=task)) == {"solution": ["Clean(Plate_1)", "Clean(Plate_2)"]}

    def test_requires_task_and_pose(self) -> None:
        """Test the missing-context error."""
        with pytest.raises(ReasonerUnavailable):
            answer_stage4(OracleContext(task=TaskSpec("Make coffee")))


class TestPlanSearchNormalize:
    """Test the remaining templates."""

    def test_plan_prefers_scripted_reply(self) -> None:
        """Test the episode reply over demonstrations."""
        demo = Demonstration(Dialogue.from_list(["<Commander> coffee"]), {"task": "Make coffee", "subgoals": []})
        scripted = {"task": "Water plant", "subgoals": ["Find(HousePlant)"]}
        assert answer_plan(OracleContext(planner_reply=scripted, demonstrations=(demo,))) == scripted
        assert answer_plan(OracleContext(demonstrations=(demo,))) == {"task": "Make coffee", "subgoals": []}
        with pytest.raises(ReasonerUnavailable):
            answer_plan(OracleContext())

    def test_search(self) -> None:
        """Test the search chain from location triples."""
        ctx = OracleContext(search_target="Potato", locations=(LocationTriple.parse("(Potato_1,in,Fridge_1)"),))
        assert answer_search(ctx) == {"actions": ["Go_to(Fridge_1)", "Open(Fridge_1)"]}
        assert answer_search(OracleContext()) == {"actions": []}

    @pytest.mark.parametrize(  # type: ignore[misc]
        ("raw", "expected"),
        [("coffee machine", "CoffeeMachine"), ("refrigerator", "Fridge"), ("Mugg", "Mug"), ("counter", "CounterTop")],
    )
    def test_normalize(self, raw: str, expected: str) -> None:
        """Test exact, synonym and edit-distance mappings."""
        assert answer_normalize(OracleContext(raw_category=raw)) == {"category": expected}
