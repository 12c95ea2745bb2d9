"""Unit tests for world loading and the simulator step function."""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

import pytest

from recovery_agent.world import (
    ActionKind,
    FailureReason,
    LowLevelAction,
    WorldSpecError,
    WorldState,
    check_invariants,
    is_reachable,
    is_visible,
    load_world,
    step,
    visible_objects,
)
from recovery_agent.world.catalog import category_of, is_instance_id, sliced_category, traits_for
from recovery_agent.world.state import HeightBand

MakeWorld = Callable[..., WorldState]


def act(world: WorldState, kind: ActionKind, target: str | None = None) -> Any:
    return step(world, LowLevelAction(kind, target))


class TestCatalog:
    """Test category defaults."""

    def test_capacities(self) -> None:
        """Test single-slot appliances and the default capacity."""
        assert traits_for("CoffeeMachine").capacity == 1
        assert traits_for("StoveBurner").capacity == 1
        assert traits_for("Toaster").capacity == 2
        assert traits_for("Mug").capacity == 1
        assert traits_for("CounterTop").capacity == 3

    def test_height_bands(self) -> None:
        """Test floor, counter and upper defaults."""
        assert traits_for("HousePlant").height == "floor"
        assert traits_for("Painting").height == "upper"
        assert traits_for("Mug").height == "counter"

    def test_instance_ids(self) -> None:
        """Test id parsing."""
        assert is_instance_id("Mug_1")
        assert not is_instance_id("Mug")
        assert category_of("BreadSliced_2") == "BreadSliced"
        assert category_of("Knife") == "Knife"
        assert sliced_category("Tomato") == "TomatoSliced"
        assert sliced_category("Mug") is None


class TestLoadWorld:
    """Test world-spec validation."""

    def test_load_kitchen(self, make_world: MakeWorld) -> None:
        """Test that a valid spec loads with consistent containment."""
        world = make_world({"id": "Mug_1", "parent": "CounterTop_2"})
        mug = world.objects["Mug_1"]
        assert mug.cell == (4, 0)
        assert mug.height == HeightBand.COUNTER
        assert world.objects["CounterTop_2"].children == ["Mug_1"]
        assert check_invariants(world) == []

    def test_nested_children_take_root_cell(self, make_world: MakeWorld) -> None:
        """Test placement propagation through two levels."""
        world = make_world({"id": "Pan_1", "parent": "StoveBurner_1"}, {"id": "Potato_1", "parent": "Pan_1"})
        assert world.objects["Potato_1"].cell == (3, 0)
        assert world.root_of("Potato_1").id == "StoveBurner_1"

    def test_held_object(self, make_world: MakeWorld) -> None:
        """Test that the held object moves with the agent."""
        world = make_world({"id": "Apple_1"}, held="Apple_1")
        assert world.agent.held_object == "Apple_1"
        assert world.objects["Apple_1"].cell == (4, 4)

    def test_property_overrides(self, make_world: MakeWorld) -> None:
        """Test properties, height and capacity overrides."""
        world = make_world(
            {"id": "Plate_1", "parent": "DiningTable_1", "properties": {"is_clean": False}},
            {"id": "Shelf_1", "cell": [7, 5], "height": "upper", "capacity": 5},
        )
        assert world.objects["Plate_1"].properties.is_clean is False
        assert world.objects["Shelf_1"].height == HeightBand.UPPER
        assert world.objects["Shelf_1"].affordances.capacity == 5

    def test_pieces_load_sliced(self, make_world: MakeWorld) -> None:
        """Test that sliced pieces are sliced whatever the spec says."""
        world = make_world({"id": "BreadSliced_1", "parent": "CounterTop_1"}, {"id": "Bread_1", "parent": "CounterTop_2"})
        assert world.objects["BreadSliced_1"].properties.is_sliced
        assert not world.objects["Bread_1"].properties.is_sliced

    @pytest.mark.parametrize(  # type: ignore[misc]
        ("extra", "agent", "match"),
        [
            ({"id": "mug"}, {}, "expected '<Category>_<k>'"),
            ({"id": "Spaceship_1", "cell": [7, 5]}, {}, "unknown category"),
            ({"id": "Fridge_1", "cell": [7, 5]}, {}, "duplicate id"),
            ({"id": "Mug_1", "parent": "Table_9"}, {}, "unknown object"),
            ({"id": "Mug_1", "parent": "Apple_1"}, {}, "unknown object"),
            ({"id": "Apple_2", "cell": [9, 9]}, {}, "outside the grid"),
            ({"id": "Apple_2"}, {}, "required for top-level"),
            ({"id": "Mug_1", "cell": [4, 4]}, {}, "not walkable"),
            ({"id": "Mug_1", "parent": "CounterTop_1", "properties": {"is_open": True}}, {}, "not openable"),
            ({"id": "Mug_1", "parent": "CounterTop_1", "properties": {"is_dirty": True}}, {}, "unknown properties"),
            ({"id": "Mug_1", "parent": "CounterTop_1", "properties": {"is_sliced": True}}, {}, "not sliceable"),
            ({"id": "Potato_1", "parent": "CounterTop_1", "properties": {"cooked_in_water": True}}, {}, "requires is_cooked"),
            ({"id": "Mug_1", "parent": "CounterTop_1"}, {"held": "Mug_1"}, "pickupable top-level"),
            ({"id": "Mug_1", "parent": "CounterTop_1"}, {"yaw": 45}, "agent.yaw"),
            ({"id": "Mug_1", "parent": "CounterTop_1"}, {"pitch": 15}, "agent.pitch"),
        ],
    )
    def test_invalid_specs(self, make_world: MakeWorld, extra: dict[str, Any], agent: dict[str, Any], match: str) -> None:
        """Test that each invalid field is rejected with a message naming it."""
        with pytest.raises(WorldSpecError, match=match):
            make_world(extra, **agent)

    def test_non_receptacle_parent(self, make_world: MakeWorld) -> None:
        """Test that objects can only sit in receptacles."""
        with pytest.raises(WorldSpecError, match="is not a receptacle"):
            make_world({"id": "Apple_1", "parent": "CounterTop_1"}, {"id": "Egg_1", "parent": "Apple_1"})

    def test_capacity_exceeded(self, make_world: MakeWorld) -> None:
        """Test that a full appliance cannot hold a second vessel."""
        with pytest.raises(WorldSpecError, match="exceed capacity"):
            make_world({"id": "Mug_1", "parent": "CoffeeMachine_1"}, {"id": "Cup_1", "parent": "CoffeeMachine_1"})

    def test_containment_cycle(self, make_world: MakeWorld) -> None:
        """Test that containment must be acyclic."""
        with pytest.raises(WorldSpecError, match="cycle"):
            make_world({"id": "Bowl_1", "parent": "Pot_1"}, {"id": "Pot_1", "parent": "Bowl_1"})

    def test_schema_version(self, kitchen_spec: dict[str, Any]) -> None:
        """Test unsupported schema versions."""
        kitchen_spec["schema_version"] = 2
        with pytest.raises(WorldSpecError, match="schema_version"):
            load_world(kitchen_spec)


class TestPerception:
    """Test visibility and reach."""

    def test_view_cone(self, make_world: MakeWorld) -> None:
        """Test the 90-degree cone from the room's south side."""
        world = make_world()
        visible = visible_objects(world)
        assert "CounterTop_2" in visible
        assert "Fridge_1" in visible
        assert "DiningTable_1" not in visible

    def test_hidden_in_closed_container(self, make_world: MakeWorld) -> None:
        """Test that closed containers occlude their contents."""
        world = make_world({"id": "Potato_1", "parent": "Fridge_1"}, cell=[0, 1])
        assert is_visible(world, "Fridge_1")
        assert not is_visible(world, "Potato_1")

    def test_reach_needs_matching_pitch(self, make_world: MakeWorld) -> None:
        """Test that reach requires the band's pitch and Manhattan range."""
        world = make_world({"id": "Mug_1", "parent": "CounterTop_2"}, cell=[4, 1])
        assert is_reachable(world, "Mug_1")
        looked_up = act(world, ActionKind.LOOK_UP).world
        assert is_visible(looked_up, "Mug_1")
        assert not is_reachable(looked_up, "Mug_1")
        far = make_world({"id": "Mug_1", "parent": "CounterTop_2"}, cell=[4, 3])
        assert not is_reachable(far, "Mug_1")


class TestStep:
    """Test the effects and failure reasons of each action."""

    def test_failed_step_returns_same_world(self, make_world: MakeWorld) -> None:
        """Test that a failed action hands back the identical state."""
        world = make_world()
        outcome = act(world, ActionKind.PICKUP, "Mug_9")
        assert not outcome.success
        assert outcome.reason == FailureReason.OBJECT_NOT_FOUND
        assert outcome.world is world

    def test_step_does_not_mutate_input(self, make_world: MakeWorld) -> None:
        """Test that a successful step copies the state."""
        world = make_world({"id": "Mug_1", "parent": "CounterTop_2"}, cell=[4, 1])
        outcome = act(world, ActionKind.PICKUP, "Mug_1")
        assert outcome.success
        assert world.agent.held_object is None
        assert world.objects["CounterTop_2"].children == ["Mug_1"]

    def test_pickup(self, make_world: MakeWorld) -> None:
        """Test that pickup detaches the object and moves it to the agent."""
        world = make_world({"id": "Mug_1", "parent": "CounterTop_2"}, cell=[4, 1])
        new = act(world, ActionKind.PICKUP, "Mug_1").world
        assert new.agent.held_object == "Mug_1"
        assert new.objects["Mug_1"].parent is None
        assert new.objects["Mug_1"].cell == (4, 1)
        assert new.objects["CounterTop_2"].children == []
        assert check_invariants(new) == []

    @pytest.mark.parametrize(  # type: ignore[misc]
        ("agent", "target", "reason"),
        [
            ({"cell": [4, 1], "held": "Apple_1"}, "Mug_1", FailureReason.HOLDING_OTHER_OBJECT),
            ({"cell": [4, 3]}, "Mug_1", FailureReason.NOT_IN_RANGE),
            ({"cell": [4, 1]}, "CounterTop_2", FailureReason.NOT_APPLICABLE),
        ],
    )
    def test_pickup_failures(
        self, make_world: MakeWorld, agent: dict[str, Any], target: str, reason: FailureReason
    ) -> None:
        """Test pickup failure reasons."""
        world = make_world({"id": "Mug_1", "parent": "CounterTop_2"}, {"id": "Apple_1", "cell": [7, 5]}, **agent)
        assert act(world, ActionKind.PICKUP, target).reason == reason

    def test_pickup_from_closed_fridge(self, make_world: MakeWorld) -> None:
        """Test that hidden objects cannot be picked up."""
        world = make_world({"id": "Potato_1", "parent": "Fridge_1"}, cell=[0, 1])
        assert act(world, ActionKind.PICKUP, "Potato_1").reason == FailureReason.RECEPTACLE_CLOSED

    def test_place(self, make_world: MakeWorld) -> None:
        """Test placing the held object into a receptacle."""
        world = make_world({"id": "Mug_1"}, cell=[5, 1], held="Mug_1")
        new = act(world, ActionKind.PLACE, "CoffeeMachine_1").world
        assert new.agent.held_object is None
        assert new.objects["Mug_1"].parent == "CoffeeMachine_1"
        assert new.objects["Mug_1"].cell == (5, 0)
        assert check_invariants(new) == []

    def test_place_failures(self, make_world: MakeWorld) -> None:
        """Test full, closed and empty-hand placement failures."""
        world = make_world({"id": "Mug_1"}, {"id": "Cup_1", "parent": "CoffeeMachine_1"}, cell=[5, 1], held="Mug_1")
        assert act(world, ActionKind.PLACE, "CoffeeMachine_1").reason == FailureReason.RECEPTACLE_FULL
        empty = make_world(cell=[5, 1])
        assert act(empty, ActionKind.PLACE, "CoffeeMachine_1").reason == FailureReason.HAND_EMPTY
        fridge = make_world({"id": "Egg_1"}, cell=[0, 1], held="Egg_1")
        assert act(fridge, ActionKind.PLACE, "Fridge_1").reason == FailureReason.RECEPTACLE_CLOSED

    def test_open_close(self, make_world: MakeWorld) -> None:
        """Test opening reveals contents and repeated opens fail."""
        world = make_world({"id": "Potato_1", "parent": "Fridge_1"}, cell=[0, 1])
        opened = act(world, ActionKind.OPEN, "Fridge_1").world
        assert opened.objects["Fridge_1"].properties.is_open
        assert is_visible(opened, "Potato_1")
        assert act(opened, ActionKind.OPEN, "Fridge_1").reason == FailureReason.ALREADY_OPEN
        closed = act(opened, ActionKind.CLOSE, "Fridge_1").world
        assert act(closed, ActionKind.CLOSE, "Fridge_1").reason == FailureReason.ALREADY_CLOSED

    def test_sink_washes_and_fills(self, make_world: MakeWorld) -> None:
        """Test that running the sink cleans and fills what is in it."""
        world = make_world(
            {"id": "Plate_1", "parent": "Sink_1", "properties": {"is_clean": False}},
            {"id": "Pot_1", "parent": "Sink_1"},
            cell=[2, 1],
        )
        new = act(world, ActionKind.TOGGLE_ON, "Sink_1").world
        assert new.objects["Plate_1"].properties.is_clean
        assert new.objects["Pot_1"].properties.is_filled_with_water
        assert act(new, ActionKind.TOGGLE_ON, "Sink_1").reason == FailureReason.ALREADY_ON

    def test_coffee_needs_clean_vessel(self, make_world: MakeWorld) -> None:
        """Test that the coffee machine only fills a clean mug or cup."""
        clean = make_world({"id": "Mug_1", "parent": "CoffeeMachine_1"}, cell=[5, 1])
        brewed = act(clean, ActionKind.TOGGLE_ON, "CoffeeMachine_1").world
        assert brewed.objects["Mug_1"].properties.filled_with_coffee
        dirty = make_world(
            {"id": "Cup_1", "parent": "CoffeeMachine_1", "properties": {"is_clean": False}}, cell=[5, 1]
        )
        brewed = act(dirty, ActionKind.TOGGLE_ON, "CoffeeMachine_1").world
        assert not brewed.objects["Cup_1"].properties.filled_with_coffee

    def test_stove_cooks_two_levels_down(self, make_world: MakeWorld) -> None:
        """Test that a burner cooks food inside a pan on it."""
        world = make_world({"id": "Pan_1", "parent": "StoveBurner_1"}, {"id": "Potato_1", "parent": "Pan_1"}, cell=[3, 1])
        new = act(world, ActionKind.TOGGLE_ON, "StoveBurner_1").world
        assert new.objects["Potato_1"].properties.is_cooked
        assert not new.objects["Potato_1"].properties.cooked_in_water

    def test_stove_boils_in_filled_pot(self, make_world: MakeWorld) -> None:
        """Test that a burner boils food sitting in a pot of water."""
        world = make_world(
            {"id": "Pot_1", "parent": "StoveBurner_1", "properties": {"is_filled_with_water": True}},
            {"id": "Potato_1", "parent": "Pot_1"},
            cell=[3, 1],
        )
        new = act(world, ActionKind.TOGGLE_ON, "StoveBurner_1").world
        assert new.objects["Potato_1"].properties.cooked_in_water
        assert not world.objects["Potato_1"].properties.is_cooked
        assert check_invariants(new) == []

    def test_slice(self, make_world: MakeWorld) -> None:
        """Test that slicing replaces the object by three pieces in place."""
        world = make_world(
            {"id": "Apple_1", "parent": "CounterTop_1"},
            {"id": "Lettuce_1", "parent": "CounterTop_1"},
            {"id": "Knife_1"},
            cell=[1, 1],
            held="Knife_1",
        )
        new = act(world, ActionKind.SLICE, "Lettuce_1").world
        assert "Lettuce_1" not in new.objects
        assert new.objects["CounterTop_1"].children == ["Apple_1", "LettuceSliced_1", "LettuceSliced_2", "LettuceSliced_3"]
        assert new.objects["LettuceSliced_2"].parent == "CounterTop_1"
        assert all(new.objects[f"LettuceSliced_{i}"].properties.is_sliced for i in (1, 2, 3))
        assert not new.objects["Apple_1"].properties.is_sliced
        assert check_invariants(new) == []

    def test_slice_uses_lowest_free_ids(self, make_world: MakeWorld) -> None:
        """Test piece numbering around existing pieces."""
        world = make_world(
            {"id": "Lettuce_1", "parent": "CounterTop_1"},
            {"id": "LettuceSliced_1", "parent": "DiningTable_1"},
            {"id": "ButterKnife_1"},
            cell=[1, 1],
            held="ButterKnife_1",
        )
        new = act(world, ActionKind.SLICE, "Lettuce_1").world
        assert new.objects["CounterTop_1"].children == ["LettuceSliced_2", "LettuceSliced_3", "LettuceSliced_4"]

    def test_slice_without_knife(self, make_world: MakeWorld) -> None:
        """Test that slicing needs a knife in hand."""
        world = make_world({"id": "Lettuce_1", "parent": "CounterTop_1"}, cell=[1, 1])
        assert act(world, ActionKind.SLICE, "Lettuce_1").reason == FailureReason.NO_KNIFE

    def test_pour_waters_plant(self, make_world: MakeWorld) -> None:
        """Test pouring water onto a floor-level plant."""
        world = make_world(
            {"id": "HousePlant_1", "cell": [7, 3]},
            {"id": "WateringCan_1", "properties": {"is_filled_with_water": True}},
            cell=[6, 3],
            yaw=90,
            pitch=-30,
            held="WateringCan_1",
        )
        new = act(world, ActionKind.POUR, "HousePlant_1").world
        assert new.objects["HousePlant_1"].properties.is_filled_with_water
        assert not new.objects["WateringCan_1"].properties.is_filled_with_water
        assert act(new, ActionKind.POUR, "HousePlant_1").reason == FailureReason.NOT_APPLICABLE

    def test_look_limits(self, make_world: MakeWorld) -> None:
        """Test that the camera pitch is bounded."""
        world = make_world()
        for _ in range(2):
            world = act(world, ActionKind.LOOK_UP).world
        assert world.agent.pitch == 60
        assert act(world, ActionKind.LOOK_UP).reason == FailureReason.NOT_APPLICABLE

    def test_movement(self, make_world: MakeWorld, kitchen_spec: dict[str, Any]) -> None:
        """Test blocked moves and carry-blocked cells."""
        world = make_world(cell=[4, 1])
        assert act(world, ActionKind.FORWARD).reason == FailureReason.BLOCKED
        moved = act(world, ActionKind.BACKWARD).world
        assert moved.agent.cell == (4, 2)
        turned = act(world, ActionKind.ROTATE_RIGHT).world
        assert turned.agent.yaw == 90

        kitchen_spec["grid"]["carry_blocked"] = [[4, 3]]
        free = load_world(kitchen_spec)
        assert act(free, ActionKind.FORWARD).world.agent.cell == (4, 3)
        kitchen_spec["objects"].append({"id": "Apple_1"})
        kitchen_spec["agent"]["held"] = "Apple_1"
        carrying = load_world(kitchen_spec)
        assert act(carrying, ActionKind.FORWARD).reason == FailureReason.BLOCKED

    def test_action_targets_validated(self) -> None:
        """Test that interactive actions need exactly one target."""
        with pytest.raises(ValueError, match="requires a target"):
            LowLevelAction(ActionKind.PICKUP)
        with pytest.raises(ValueError, match="does not take a target"):
            LowLevelAction(ActionKind.FORWARD, "Mug_1")
        assert str(LowLevelAction(ActionKind.OPEN, "Fridge_1")) == "Open(Fridge_1)"
