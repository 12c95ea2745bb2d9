"""Implementation of the list command."""

from __future__ import annotations

import json
from typing import Any

import yaml

from recovery_agent.corpus import ScenarioCorpus
from recovery_agent.utils.logger import get_logger

__all__ = ["list_scenarios"]

logger = get_logger(__name__)


def list_scenarios(
    corpus: ScenarioCorpus,
    verbose: bool = False,
    output_format: str = "table",
) -> list[dict[str, Any]]:
    """List the scenarios of a corpus.

    Args:
        corpus: Corpus to list.
        verbose: Show detailed information.
        output_format: Output format (table, json, yaml).

    Returns:
        List of scenario summaries.
    """
    scenarios = corpus.list_scenarios()

    if not scenarios:
        logger.info("No scenarios found")
        return []

    if output_format == "json":
        print(json.dumps(scenarios, indent=2))
    elif output_format == "yaml":
        print(yaml.safe_dump(scenarios, default_flow_style=False, sort_keys=False))
    else:
        _print_table(scenarios, verbose)

    return scenarios


def _print_table(scenarios: list[dict[str, Any]], verbose: bool) -> None:
    if verbose:
        for entry in scenarios:
            print(f"\nID: {entry['id']}")
            if entry["status"] != "ok":
                print(f"  Error: {entry.get('error', 'N/A')}")
                print(f"  Path: {entry['path']}")
                continue
            print(f"  Title: {entry['title'] or 'N/A'}")
            print(f"  Task: {entry['task']}")
            print(f"  Split: {entry['split']}")
            print(f"  Reference length: {entry['reference_length']}")
            print(f"  Requires: {', '.join(entry['requires']) or '-'}")
            print(f"  Needs recovery: {'yes' if entry['needs_recovery'] else 'no'}")
            print(f"  Path: {entry['path']}")
        return

    header = f"{'ID':<32} {'Task':<38} {'Requires':<18} {'Status':<8}"
    print(header)
    print("-" * len(header))
    for entry in scenarios:
        requires = ",".join(entry.get("requires", [])) or "-"
        task = entry.get("task", "N/A")
        print(f"{entry['id'][:31]:<32} {task[:37]:<38} {requires[:17]:<18} {entry['status']:<8}")
