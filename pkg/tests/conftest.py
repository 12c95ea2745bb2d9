"""Shared fixtures for the recovery-agent test suite."""

from __future__ import annotations

import copy
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from recovery_agent.world.loader import load_world
from recovery_agent.world.state import WorldState

KITCHEN_OBJECTS: list[dict[str, Any]] = [
    {"id": "Fridge_1", "cell": [0, 0]},
    {"id": "CounterTop_1", "cell": [1, 0]},
    {"id": "Sink_1", "cell": [2, 0]},
    {"id": "StoveBurner_1", "cell": [3, 0]},
    {"id": "CounterTop_2", "cell": [4, 0]},
    {"id": "CoffeeMachine_1", "cell": [5, 0]},
    {"id": "Toaster_1", "cell": [6, 0]},
    {"id": "Cabinet_1", "cell": [7, 0]},
    {"id": "DiningTable_1", "cell": [0, 4]},
]


@pytest.fixture(autouse=True)  # type: ignore[misc]
def isolated_dirs(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point the platform config and data directories into the test's tmp dir."""
    home = tmp_path / "home"
    monkeypatch.setenv("XDG_CONFIG_HOME", str(home / "config"))
    monkeypatch.setenv("XDG_DATA_HOME", str(home / "data"))
    monkeypatch.delenv("RECOVERY_AGENT_API_KEY", raising=False)
    return home


@pytest.fixture  # type: ignore[misc]
def kitchen_spec() -> dict[str, Any]:
    """An 8x6 kitchen with the appliances along the north wall and a dining table."""
    return {
        "grid": {"width": 8, "height": 6},
        "agent": {"cell": [4, 4], "yaw": 0},
        "objects": copy.deepcopy(KITCHEN_OBJECTS),
    }


@pytest.fixture  # type: ignore[misc]
def make_world(kitchen_spec: dict[str, Any]) -> Callable[..., WorldState]:
    """Build a kitchen world with extra objects and an adjusted agent."""

    def build(*extra: dict[str, Any], **agent: Any) -> WorldState:
        spec = copy.deepcopy(kitchen_spec)
        spec["objects"].extend(copy.deepcopy(list(extra)))
        spec["agent"].update(agent)
        return load_world(spec)

    return build
