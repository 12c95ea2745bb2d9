"""Object category vocabulary and per-category defaults."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Final

__all__ = [
    "CATEGORIES",
    "CategoryTraits",
    "COFFEE_VESSELS",
    "KNIVES",
    "SINKS",
    "SLICED_CATEGORIES",
    "SURFACES",
    "WATER_VESSELS",
    "category_of",
    "is_instance_id",
    "sliced_category",
    "traits_for",
]

# Vocabulary order matters: normalization ties are broken by position in this tuple.
CATEGORIES: Final[tuple[str, ...]] = (
    "Cabinet", "CounterTop", "Sink", "Towel", "HandTowel", "TowelHolder", "SoapBar", "ToiletPaper",
    "ToiletPaperHanger", "HandTowelHolder", "SoapBottle", "GarbageCan", "Candle", "ScrubBrush", "Plunger",
    "SinkBasin", "Cloth", "SprayBottle", "Toilet", "Faucet", "ShowerHead", "Box", "Bed", "Book", "DeskLamp",
    "BasketBall", "Pen", "Pillow", "Pencil", "CellPhone", "KeyChain", "Painting", "CreditCard", "AlarmClock", "CD",
    "Laptop", "Drawer", "SideTable", "Chair", "Blinds", "Desk", "Curtains", "Dresser", "Watch", "Television",
    "WateringCan", "Newspaper", "FloorLamp", "RemoteControl", "HousePlant", "Statue", "Ottoman", "ArmChair", "Sofa",
    "DogBed", "BaseballBat", "TennisRacket", "VacuumCleaner", "Mug", "ShelvingUnit", "Shelf", "StoveBurner", "Apple",
    "Lettuce", "Bottle", "Egg", "Microwave", "CoffeeMachine", "Fork", "Fridge", "WineBottle", "Spatula", "Bread",
    "Tomato", "Pan", "Cup", "Pot", "SaltShaker", "Potato", "PepperShaker", "ButterKnife", "StoveKnob", "Toaster",
    "DishSponge", "Spoon", "Plate", "Knife", "DiningTable", "Bowl", "LaundryHamper", "Vase", "Stool", "CoffeeTable",
    "Poster", "Bathtub", "TissueBox", "Footstool", "BathtubBasin", "ShowerCurtain", "TVStand", "Boots", "RoomDecor",
    "PaperTowelRoll", "Ladle", "Kettle", "Safe", "GarbageBag", "TeddyBear", "TableTopDecor", "Dumbbell", "Desktop",
    "AluminumFoil", "Window", "LightSwitch", "AppleSliced", "BreadSliced", "LettuceSliced", "PotatoSliced",
    "TomatoSliced", "Mirror", "ShowerDoor", "ShowerGlass", "Floor",
)  # fmt: skip

KNIVES: Final[frozenset[str]] = frozenset({"Knife", "ButterKnife"})
SINKS: Final[frozenset[str]] = frozenset({"Sink", "SinkBasin"})
COFFEE_VESSELS: Final[frozenset[str]] = frozenset({"Mug", "Cup"})
WATER_VESSELS: Final[frozenset[str]] = frozenset({"Pot", "Bowl", "Kettle"})
SURFACES: Final[tuple[str, ...]] = (
    "CounterTop",
    "DiningTable",
    "SideTable",
    "CoffeeTable",
    "Desk",
    "Dresser",
    "Shelf",
    "ShelvingUnit",
    "Chair",
    "Sofa",
    "ArmChair",
    "Bed",
    "Stool",
    "TVStand",
)

_SLICEABLE: Final[dict[str, str]] = {
    "Apple": "AppleSliced",
    "Bread": "BreadSliced",
    "Lettuce": "LettuceSliced",
    "Potato": "PotatoSliced",
    "Tomato": "TomatoSliced",
}
SLICED_CATEGORIES: Final[frozenset[str]] = frozenset(_SLICEABLE.values())

_PICKUPABLE: Final[frozenset[str]] = frozenset({
    "Towel", "HandTowel", "SoapBar", "ToiletPaper", "SoapBottle", "Candle", "ScrubBrush", "Plunger", "Cloth",
    "SprayBottle", "Box", "Book", "BasketBall", "Pen", "Pillow", "Pencil", "CellPhone", "KeyChain", "CreditCard",
    "AlarmClock", "CD", "Laptop", "Watch", "WateringCan", "Newspaper", "RemoteControl", "Statue", "BaseballBat",
    "TennisRacket", "Mug", "Apple", "Lettuce", "Bottle", "Egg", "Fork", "WineBottle", "Spatula", "Bread", "Tomato",
    "Pan", "Cup", "Pot", "SaltShaker", "Potato", "PepperShaker", "ButterKnife", "DishSponge", "Spoon", "Plate",
    "Knife", "Bowl", "Vase", "TissueBox", "Boots", "PaperTowelRoll", "Ladle", "Kettle", "TeddyBear",
    "TableTopDecor", "Dumbbell", "AluminumFoil", "AppleSliced", "BreadSliced", "LettuceSliced", "PotatoSliced",
    "TomatoSliced",
})  # fmt: skip

_RECEPTACLES: Final[frozenset[str]] = frozenset({
    "Cabinet", "CounterTop", "Sink", "SinkBasin", "TowelHolder", "HandTowelHolder", "GarbageCan", "Toilet", "Box",
    "Bed", "Drawer", "SideTable", "Chair", "Desk", "Dresser", "Ottoman", "ArmChair", "Sofa", "DogBed", "Mug",
    "ShelvingUnit", "Shelf", "StoveBurner", "Microwave", "CoffeeMachine", "Fridge", "Pan", "Cup", "Pot", "Toaster",
    "Plate", "DiningTable", "Bowl", "LaundryHamper", "Stool", "CoffeeTable", "Bathtub", "BathtubBasin", "TVStand",
    "Safe", "Kettle", "Floor",
})  # fmt: skip

_OPENABLE: Final[frozenset[str]] = frozenset(
    {"Cabinet", "Box", "Book", "Laptop", "Drawer", "Microwave", "Fridge", "Safe", "Kettle", "ShowerDoor"}
)
_TOGGLEABLE: Final[frozenset[str]] = frozenset({
    "Sink", "SinkBasin", "Faucet", "ShowerHead", "DeskLamp", "Laptop", "Television", "FloorLamp", "StoveBurner",
    "Microwave", "CoffeeMachine", "StoveKnob", "Toaster", "LightSwitch", "Desktop",
})  # fmt: skip
_FILLABLE: Final[frozenset[str]] = frozenset(
    {"Mug", "Cup", "Pot", "Bowl", "Kettle", "Bottle", "WineBottle", "WateringCan", "Vase", "HousePlant"}
)
_COOKABLE: Final[frozenset[str]] = frozenset({"Potato", "Egg", "BreadSliced", "PotatoSliced"})
_DIRTYABLE: Final[frozenset[str]] = frozenset({"Mug", "Cup", "Pot", "Pan", "Bowl", "Plate", "Cloth"})

_CAPACITY: Final[dict[str, int]] = {
    "CoffeeMachine": 1,
    "StoveBurner": 1,
    "Toaster": 2,
    "Mug": 1,
    "Cup": 1,
}
DEFAULT_CAPACITY: Final[int] = 3

_UPPER: Final[frozenset[str]] = frozenset({"Painting", "Poster", "Window", "Mirror", "ShowerHead", "Blinds", "Curtains"})
_FLOOR: Final[frozenset[str]] = frozenset({
    "GarbageCan", "Bed", "Chair", "Sofa", "ArmChair", "Ottoman", "DogBed", "HousePlant", "LaundryHamper", "Stool",
    "Footstool", "Bathtub", "Toilet", "Floor", "VacuumCleaner", "Boots", "Dumbbell", "GarbageBag", "BasketBall",
})  # fmt: skip

_ID_PATTERN = re.compile(r"^([A-Za-z]+)_(\d+)$")


@dataclass(frozen=True)
class CategoryTraits:
    """Default affordances, capacity and height band for a category."""

    pickupable: bool
    receptacle: bool
    openable: bool
    toggleable: bool
    sliceable: bool
    fillable: bool
    cookable: bool
    dirtyable: bool
    capacity: int
    height: str


def traits_for(category: str) -> CategoryTraits:
    """Return the default traits of a category.

    Unknown categories get no affordances and the counter band.

    Args:
        category: Category name from the vocabulary.

    Returns:
        CategoryTraits instance.
    """
    if category in _UPPER:
        height = "upper"
    elif category in _FLOOR:
        height = "floor"
    else:
        height = "counter"
    return CategoryTraits(
        pickupable=category in _PICKUPABLE,
        receptacle=category in _RECEPTACLES,
        openable=category in _OPENABLE,
        toggleable=category in _TOGGLEABLE,
        sliceable=category in _SLICEABLE,
        fillable=category in _FILLABLE,
        cookable=category in _COOKABLE,
        dirtyable=category in _DIRTYABLE,
        capacity=_CAPACITY.get(category, DEFAULT_CAPACITY),
        height=height,
    )


def sliced_category(category: str) -> str | None:
    """Return the category produced by slicing, if any."""
    return _SLICEABLE.get(category)


def is_instance_id(reference: str) -> bool:
    """Return True if reference looks like an instance id (``Mug_1``) rather than a bare category."""
    return _ID_PATTERN.match(reference) is not None


def category_of(reference: str) -> str:
    """Return the category part of an instance id, or the reference itself for bare categories.

    Args:
        reference: Instance id such as ``Mug_1`` or a bare category such as ``Mug``.

    Returns:
        Category name.
    """
    match = _ID_PATTERN.match(reference)
    if match:
        return match.group(1)
    return reference
