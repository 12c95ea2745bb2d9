"""Reasoner contract: requests, replies, reply extraction and schema validation."""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any, Protocol

from recovery_agent.executor.subgoal import Subgoal, SubgoalParseError, parse_subgoal
from recovery_agent.templates import get_template_engine

if TYPE_CHECKING:
    from recovery_agent.executor.memory import MemoryEntry
    from recovery_agent.planner import Demonstration, Dialogue, LocationTriple
    from recovery_agent.tasks import TaskSpec
    from recovery_agent.world.state import Cell, FailureReason

__all__ = [
    "OracleContext",
    "Reasoner",
    "ReasonerError",
    "ReasonerReply",
    "ReasonerRequest",
    "ReasonerUnavailable",
    "ReplySchemaError",
    "TemplateId",
    "extract_structured_block",
    "validate_reply",
]


class ReasonerError(Exception):
    """Base class for reasoner failures."""

    def __init__(self, message: str, raw: str | None = None) -> None:
        """Initialize with a message and the offending raw reply, if any."""
        super().__init__(message)
        self.raw = raw


class ReasonerUnavailable(ReasonerError):
    """Raised when no schema-valid reply could be obtained."""


class ReplySchemaError(ReasonerError):
    """Raised when a reply does not match the template's reply schema."""


class TemplateId(str, Enum):
    """Prompt templates understood by every backend."""

    PLAN = "plan"
    STAGE1 = "stage1"
    STAGE2 = "stage2"
    STAGE3 = "stage3"
    STAGE4 = "stage4"
    SEARCH = "search"
    NORMALIZE = "normalize"


@dataclass(frozen=True)
class OracleContext:
    """Structured facts behind a request.

    Remote models only ever see the rendered prompt; the scripted backend answers from
    these fields instead of parsing text.
    """

    task: TaskSpec | None = None
    plan: tuple[tuple[Subgoal, str], ...] = ()
    failing_subgoal: Subgoal | None = None
    failure_reason: FailureReason | None = None
    memory: Mapping[str, MemoryEntry] = field(default_factory=dict)
    held: str | None = None
    agent_cell: Cell | None = None
    aliases: Mapping[str, str] = field(default_factory=dict)
    dialogue: Dialogue | None = None
    demonstrations: tuple[Demonstration, ...] = ()
    planner_reply: Mapping[str, Any] | None = None
    locations: tuple[LocationTriple, ...] = ()
    search_target: str | None = None
    raw_category: str | None = None


@dataclass(frozen=True)
class ReasonerRequest:
    """A template id, its slot values and the optional oracle context."""

    template_id: TemplateId
    slots: Mapping[str, str]
    context: OracleContext = field(default_factory=OracleContext)

    def render(self) -> str:
        """Render the prompt text; raises TemplateSlotError on slot mismatch."""
        return get_template_engine().render(self.template_id.value, dict(self.slots))


@dataclass(frozen=True)
class ReasonerReply:
    """Raw reply text plus its validated, normalized form."""

    raw: str
    parsed: dict[str, Any]


class Reasoner(Protocol):
    """Anything that turns a request into a schema-valid reply."""

    def complete(self, request: ReasonerRequest) -> ReasonerReply:
        """Answer one request.

        Raises:
            ReasonerUnavailable: If no valid reply can be produced.
        """
        ...


def extract_structured_block(text: str) -> Any:
    """Return the first JSON object or array embedded in a reply.

    Code fences and surrounding prose are tolerated.

    Raises:
        ReplySchemaError: If no JSON value can be decoded.
    """
    decoder = json.JSONDecoder()
    for index, char in enumerate(text):
        if char not in "{[":
            continue
        try:
            value, _ = decoder.raw_decode(text, index)
        except json.JSONDecodeError:
            continue
        return value
    raise ReplySchemaError("No JSON block found in reply")


def _as_bool(value: Any, key: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in ("yes", "true", "no", "false"):
        return value.strip().lower() in ("yes", "true")
    raise ReplySchemaError(f"{key}: expected a boolean, got {value!r}")


def _subgoals(value: Any, key: str) -> list[Subgoal]:
    if not isinstance(value, Sequence) or isinstance(value, str):
        raise ReplySchemaError(f"{key}: expected a list of subgoals")
    try:
        return [parse_subgoal(item) for item in value]
    except SubgoalParseError as e:
        raise ReplySchemaError(f"{key}: {e}") from e


def _pick(data: Mapping[str, Any], *keys: str) -> Any:
    for key in keys:
        if key in data:
            return data[key]
    raise ReplySchemaError(f"Missing key {keys[0]!r}")


def validate_reply(template_id: TemplateId, data: Any) -> dict[str, Any]:
    """Validate a decoded reply and normalize it.

    Args:
        template_id: Template the reply answers.
        data: Decoded JSON value.

    Returns:
        Normalized mapping: ``important``/``justification`` for stage1,
        ``missing``/``actions`` for stage2, ``solution`` for stage3, stage4 and search,
        ``category`` for normalize, and the plan mapping for plan.

    Raises:
        ReplySchemaError: If the reply does not fit the schema.
    """
    if template_id == TemplateId.SEARCH:
        if isinstance(data, Mapping):
            data = _pick(data, "actions", "solution")
        return {"solution": _subgoals(data, "search")}
    if not isinstance(data, Mapping):
        raise ReplySchemaError(f"{template_id.value}: expected a JSON object")

    if template_id == TemplateId.STAGE1:
        return {
            "important": _as_bool(_pick(data, "important", "is_important"), "important"),
            "justification": str(data.get("justification", "")),
        }
    if template_id == TemplateId.STAGE2:
        missing = _as_bool(_pick(data, "prior required actions", "prior_required_actions"), "prior required actions")
        actions = _subgoals(data.get("actions", []) or [], "actions")
        return {"missing": missing and bool(actions), "actions": actions if missing else []}
    if template_id in (TemplateId.STAGE3, TemplateId.STAGE4):
        return {"solution": _subgoals(_pick(data, "solution", "actions"), "solution")}
    if template_id == TemplateId.NORMALIZE:
        category = _pick(data, "category")
        if not isinstance(category, str) or not category.strip():
            raise ReplySchemaError("category: expected a non-empty string")
        return {"category": category.strip()}

    task = _pick(data, "task")
    if not isinstance(task, str) or not task.strip():
        raise ReplySchemaError("task: expected a non-empty string")
    subgoals = _subgoals(_pick(data, "subgoals"), "subgoals")
    locations = data.get("object locations", data.get("object_locations", [])) or []
    interest = data.get("objects of interest", data.get("objects_of_interest", [])) or []
    if not isinstance(locations, list) or not isinstance(interest, list):
        raise ReplySchemaError("plan: object locations and objects of interest must be lists")
    params = data.get("task_params") or {}
    if not isinstance(params, Mapping):
        raise ReplySchemaError("task_params: expected an object")
    return {
        "task": task.strip(),
        "task_params": dict(params),
        "objects of interest": [str(x) for x in interest],
        "object locations": [str(x) for x in locations],
        "subgoals": subgoals,
    }
