"""Command implementations for recovery-agent."""

from __future__ import annotations

__all__ = [
    "ablate_command",
    "build_episode_config",
    "list_scenarios",
    "run_doctor",
    "run_episode_command",
    "suite_command",
]

from recovery_agent.commands.doctor import run_doctor
from recovery_agent.commands.list_scenarios import list_scenarios
from recovery_agent.commands.run import build_episode_config, run_episode_command
from recovery_agent.commands.suite import ablate_command, suite_command
