"""Suite reports and their serialization."""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import TYPE_CHECKING, Any, Final

import yaml

from recovery_agent.harness.metrics import aggregate, per_split, per_task, stage_flow
from recovery_agent.utils.paths import ensure_dir

if TYPE_CHECKING:
    from recovery_agent.harness.episode import EpisodeResult

__all__ = ["REPORT_FORMATS", "REPORT_SCHEMA_VERSION", "build_report", "dump_report", "write_report"]

REPORT_SCHEMA_VERSION: Final[int] = 1
REPORT_FORMATS: Final[tuple[str, ...]] = ("json", "yaml")


def build_report(results: Sequence[EpisodeResult], configuration: Mapping[str, Any]) -> dict[str, Any]:
    """Assemble the report of one suite run.

    Args:
        results: Episode results in input order.
        configuration: Settings the results depend on.

    Returns:
        Mapping with ``schema_version``, ``configuration``, ``episodes``, ``aggregate``,
        ``per_task``, ``per_split`` and ``stage_flow``.
    """
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "configuration": dict(configuration),
        "episodes": [r.to_dict() for r in results],
        "aggregate": aggregate(results).to_dict(),
        "per_task": {task: report.to_dict() for task, report in per_task(results).items()},
        "per_split": {split: report.to_dict() for split, report in per_split(results).items()},
        "stage_flow": stage_flow(results),
    }


def dump_report(report: Mapping[str, Any], output_format: str = "json") -> str:
    """Serialize a report as JSON or YAML.

    Raises:
        ValueError: On an unknown format.
    """
    if output_format == "json":
        return json.dumps(report, indent=2) + "\n"
    if output_format == "yaml":
        return yaml.safe_dump(dict(report), default_flow_style=False, sort_keys=False)
    raise ValueError(f"Unknown report format: {output_format!r}")


def write_report(report: Mapping[str, Any], path: Path, output_format: str | None = None) -> Path:
    """Write a report, inferring the format from the suffix when not given."""
    if output_format is None:
        output_format = "yaml" if path.suffix in (".yaml", ".yml") else "json"
    ensure_dir(path.parent)
    path.write_text(dump_report(report, output_format), encoding="utf-8")
    return path
