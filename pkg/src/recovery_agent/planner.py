"""Initial plan generation from a task dialogue.

The planner retrieves the three most similar demonstrations, asks the reasoner for a
plan in the dialogue-to-JSON format and normalizes every category it mentions.
"""

from __future__ import annotations

import json
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Final, NamedTuple

import yaml

from recovery_agent.executor.subgoal import Subgoal
from recovery_agent.reasoner.base import OracleContext, Reasoner, ReasonerError, ReasonerRequest, TemplateId
from recovery_agent.tasks import TaskParams, TaskSpec, TaskSpecError, canonical_task_name
from recovery_agent.utils.logger import get_logger
from recovery_agent.utils.paths import get_package_data_path
from recovery_agent.world.catalog import CATEGORIES

__all__ = [
    "SPEAKERS",
    "Demonstration",
    "Dialogue",
    "LocationTriple",
    "PlanError",
    "PlanOutput",
    "Turn",
    "edit_distance",
    "generate_plan",
    "load_demonstrations",
    "normalize_category",
    "render_examples",
    "retrieve_examples",
    "similarity",
]

logger = get_logger(__name__)

SPEAKERS: Final[tuple[str, ...]] = ("Commander", "Driver")
_SPEAKER_ALIASES: Final[dict[str, str]] = {"commander": "Commander", "driver": "Driver", "follower": "Driver"}
_TOKEN = re.compile(r"[a-z0-9]+")
_TRIPLE = re.compile(r"^\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)$")
_INSTANCE = re.compile(r"^([A-Za-z]+)_(\d+)$")
_VOCABULARY: Final[dict[str, str]] = {c.lower(): c for c in CATEGORIES}


class PlanError(Exception):
    """Raised when no usable plan can be obtained."""

    def __init__(self, message: str, raw: str | None = None) -> None:
        """Initialize with a message and the raw reply, if any."""
        super().__init__(message)
        self.raw = raw


@dataclass(frozen=True)
class Turn:
    """One dialogue utterance."""

    speaker: str
    text: str


@dataclass(frozen=True)
class Dialogue:
    """An ordered, non-empty list of Commander/Driver turns."""

    turns: tuple[Turn, ...]

    def __post_init__(self) -> None:
        """Validate turns and speakers."""
        if not self.turns:
            raise ValueError("Dialogue must contain at least one turn")
        for turn in self.turns:
            if turn.speaker not in SPEAKERS:
                raise ValueError(f"Unknown speaker {turn.speaker!r}")

    @classmethod
    def from_list(cls, items: Sequence[Mapping[str, Any] | str]) -> Dialogue:
        """Build from ``[{speaker, text}]`` mappings or ``"<Speaker> text"`` lines."""
        turns: list[Turn] = []
        for item in items:
            if isinstance(item, str):
                match = re.match(r"^\s*<([^>]+)>\s?(.*)$", item)
                if not match:
                    raise ValueError(f"Malformed dialogue line: {item!r}")
                speaker, text = match.group(1), match.group(2)
            else:
                speaker, text = str(item.get("speaker", "")), str(item.get("text", "") or "")
            turns.append(Turn(_SPEAKER_ALIASES.get(speaker.strip().lower(), speaker), text.rstrip()))
        return cls(tuple(turns))

    def render(self) -> str:
        """Render one ``<Speaker> text`` line per turn."""
        return "\n".join(f"<{t.speaker}> {t.text}".rstrip() for t in self.turns)

    def tokens(self) -> frozenset[str]:
        """Lowercase alphanumeric tokens of all utterances, speaker tags excluded."""
        return frozenset(token for turn in self.turns for token in _TOKEN.findall(turn.text.lower()))

    def to_list(self) -> list[dict[str, str]]:
        """Serialize as ``[{speaker, text}]``."""
        return [{"speaker": t.speaker, "text": t.text} for t in self.turns]


class LocationTriple(NamedTuple):
    """``(subject, relation, object)`` as mentioned in the dialogue."""

    subject: str
    relation: str
    object: str

    @classmethod
    def parse(cls, text: str) -> LocationTriple:
        """Parse ``(Bread_1,in,Cabinet_1)``.

        Raises:
            ValueError: If the text is not a triple.
        """
        match = _TRIPLE.match(text.strip())
        if not match:
            raise ValueError(f"Malformed location triple: {text!r}")
        return cls(match.group(1), match.group(2).lower(), match.group(3))

    def __str__(self) -> str:
        return f"({self.subject},{self.relation},{self.object})"


@dataclass(frozen=True)
class Demonstration:
    """One pool entry: a dialogue and the plan output it should produce."""

    dialogue: Dialogue
    output: Mapping[str, Any]
    name: str = ""


@dataclass(frozen=True)
class PlanOutput:
    """Parsed, normalized plan."""

    task: TaskSpec
    objects_of_interest: tuple[str, ...]
    object_locations: tuple[LocationTriple, ...]
    subgoals: tuple[Subgoal, ...]
    extras: Mapping[str, Any] = field(default_factory=dict)
    raw: str = ""

    def to_dict(self) -> dict[str, Any]:
        """Serialize in the plan-output JSON shape."""
        return {
            "task": self.task.task,
            "task_params": self.task.params.to_dict(),
            "objects of interest": list(self.objects_of_interest),
            "object locations": [str(t) for t in self.object_locations],
            "subgoals": [str(s) for s in self.subgoals],
        }


def load_demonstrations(path: Path | None = None) -> list[Demonstration]:
    """Load a demonstration pool.

    Args:
        path: YAML file with a ``demonstrations`` list; defaults to the shipped pool.

    Returns:
        Demonstrations in file order.
    """
    path = path or get_package_data_path("data", "demonstrations.yaml")
    with path.open("r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    pool = [
        Demonstration(
            dialogue=Dialogue.from_list(item["dialogue"]),
            output=item["output"],
            name=str(item.get("name", "")),
        )
        for item in data.get("demonstrations", [])
    ]
    logger.debug(f"Loaded {len(pool)} demonstrations from {path}")
    return pool


def similarity(a: Dialogue, b: Dialogue) -> float:
    """Jaccard overlap of the two dialogues' token sets."""
    ta, tb = a.tokens(), b.tokens()
    if not ta and not tb:
        return 1.0
    return len(ta & tb) / len(ta | tb)


def retrieve_examples(dialogue: Dialogue, pool: Sequence[Demonstration], k: int = 3) -> list[Demonstration]:
    """Return the ``k`` most similar demonstrations, best first, ties by pool order."""
    ranked = sorted(range(len(pool)), key=lambda i: (-similarity(dialogue, pool[i].dialogue), i))
    return [pool[i] for i in ranked[:k]]


def render_examples(examples: Sequence[Demonstration]) -> str:
    """Render demonstrations for the ``RETRIEVED_EXAMPLES`` slot."""
    blocks = []
    for index, demo in enumerate(examples, start=1):
        output = json.dumps(dict(demo.output), indent=2)
        blocks.append(f"Example {index}\nDialogue:\n{demo.dialogue.render()}\n\nOutput:\n{output}")
    return "\n\n".join(blocks)


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance between two strings."""
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def closest_category(raw: str) -> str:
    """Vocabulary entry with minimum case-insensitive edit distance, ties by vocabulary order."""
    lowered = raw.lower()
    return min(CATEGORIES, key=lambda c: edit_distance(lowered, c.lower()))


def normalize_category(raw: str, reasoner: Reasoner | None = None, memo: dict[str, str] | None = None) -> str:
    """Map a generated category onto the vocabulary.

    Args:
        raw: Category as generated.
        reasoner: Asked to pick the closest category when raw is out of vocabulary.
        memo: Per-plan cache of earlier answers.

    Returns:
        A vocabulary category.
    """
    if not raw.strip():
        raise ValueError("Category must be non-empty")
    key = raw.strip()
    exact = _VOCABULARY.get(key.lower())
    if exact is not None:
        return exact
    if memo is not None and key in memo:
        return memo[key]

    result: str | None = None
    if reasoner is not None:
        request = ReasonerRequest(
            TemplateId.NORMALIZE,
            {"RAW_CATEGORY": key, "CATEGORY_LIST": ", ".join(CATEGORIES)},
            OracleContext(raw_category=key),
        )
        try:
            answer = reasoner.complete(request).parsed["category"]
            result = _VOCABULARY.get(str(answer).lower())
        except ReasonerError as e:
            logger.warning(f"Category normalization for {key!r} failed: {e}")
    if result is None:
        result = closest_category(key)
    logger.debug(f"Normalized category {key!r} -> {result}")
    if memo is not None:
        memo[key] = result
    return result


def _normalize_reference(reference: str, reasoner: Reasoner | None, memo: dict[str, str]) -> str:
    match = _INSTANCE.match(reference.strip())
    if match:
        return f"{normalize_category(match.group(1), reasoner, memo)}_{match.group(2)}"
    return normalize_category(reference, reasoner, memo)


def _plan_from_reply(parsed: Mapping[str, Any], reasoner: Reasoner | None, raw: str) -> PlanOutput:
    memo: dict[str, str] = {}
    try:
        task_name = canonical_task_name(parsed["task"])
        params = TaskParams.from_dict(parsed.get("task_params"))
    except TaskSpecError as e:
        raise PlanError(str(e), raw=raw) from e
    params = TaskParams(
        n=params.n,
        object=_normalize_reference(params.object, reasoner, memo) if params.object else None,
        receptacle=_normalize_reference(params.receptacle, reasoner, memo) if params.receptacle else None,
    )
    task = TaskSpec(task_name, params if TaskSpec(task_name).is_parameterized else TaskParams(n=params.n))

    locations: list[LocationTriple] = []
    for text in parsed.get("object locations", []):
        try:
            triple = LocationTriple.parse(text)
        except ValueError:
            logger.warning(f"Ignoring malformed location {text!r}")
            continue
        locations.append(
            LocationTriple(
                _normalize_reference(triple.subject, reasoner, memo),
                triple.relation,
                _normalize_reference(triple.object, reasoner, memo),
            )
        )
    interest = tuple(_normalize_reference(c, reasoner, memo) for c in parsed.get("objects of interest", []))
    subgoals = tuple(
        Subgoal(s.verb, tuple(_normalize_reference(a, reasoner, memo) for a in s.args)) for s in parsed["subgoals"]
    )
    return PlanOutput(
        task=task,
        objects_of_interest=interest,
        object_locations=tuple(locations),
        subgoals=subgoals,
        extras=dict(parsed.get("task_params", {})),
        raw=raw,
    )


def generate_plan(
    dialogue: Dialogue,
    reasoner: Reasoner,
    pool: Sequence[Demonstration],
    planner_reply: Mapping[str, Any] | None = None,
) -> PlanOutput:
    """Generate the initial plan for a dialogue.

    Args:
        dialogue: Task dialogue.
        reasoner: Backend that answers the plan prompt.
        pool: Demonstration pool for example retrieval.
        planner_reply: Scripted answer the oracle should give for this episode.

    Returns:
        Normalized PlanOutput.

    Raises:
        PlanError: If no valid reply can be obtained or the task is unknown.
    """
    examples = retrieve_examples(dialogue, pool)
    request = ReasonerRequest(
        TemplateId.PLAN,
        {"RETRIEVED_EXAMPLES": render_examples(examples), "INPUT_DIALOGUE": dialogue.render()},
        OracleContext(dialogue=dialogue, demonstrations=tuple(examples), planner_reply=planner_reply),
    )
    try:
        reply = reasoner.complete(request)
    except ReasonerError as e:
        raise PlanError(f"Planning failed: {e}", raw=e.raw) from e
    plan = _plan_from_reply(reply.parsed, reasoner, reply.raw)
    logger.info(f"Plan for {plan.task.describe()}: {len(plan.subgoals)} subgoals")
    return plan
