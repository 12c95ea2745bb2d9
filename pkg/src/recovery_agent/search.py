"""Object search over the location triples mentioned in the dialogue."""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, Final

import yaml

from recovery_agent.executor.subgoal import Subgoal, Verb
from recovery_agent.reasoner.base import OracleContext, Reasoner, ReasonerError, ReasonerRequest, TemplateId
from recovery_agent.utils.logger import get_logger
from recovery_agent.utils.paths import get_package_data_path
from recovery_agent.world.catalog import category_of, is_instance_id, traits_for

if TYPE_CHECKING:
    from recovery_agent.planner import LocationTriple

__all__ = [
    "CONTAINMENT_RELATIONS",
    "SPATIAL_RELATIONS",
    "SearchExample",
    "load_search_examples",
    "render_search_examples",
    "scripted_chain",
    "search_for",
]

logger = get_logger(__name__)

CONTAINMENT_RELATIONS: Final[frozenset[str]] = frozenset({"in", "inside", "on", "within", "into"})
SPATIAL_RELATIONS: Final[frozenset[str]] = frozenset(
    {"above", "below", "behind", "next to", "near", "under", "beside", "left of", "right of"}
)


@dataclass(frozen=True)
class SearchExample:
    """A fixed search demonstration."""

    goal: str
    locations: tuple[str, ...]
    actions: tuple[str, ...]


def load_search_examples(path: Path | None = None) -> list[SearchExample]:
    """Load the fixed search demonstrations shipped with the package."""
    path = path or get_package_data_path("data", "search_examples.yaml")
    with path.open("r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    return [
        SearchExample(str(item["goal"]), tuple(item.get("locations", [])), tuple(item["actions"]))
        for item in data.get("examples", [])
    ]


def render_search_examples(examples: Sequence[SearchExample]) -> str:
    """Render demonstrations in the prompt's own ``Goal``/``object locations``/``Output`` layout."""
    return "\n\n".join(
        f"Goal: {ex.goal}\n\nobject locations: {', '.join(ex.locations)}\n\nOutput:\n{json.dumps(list(ex.actions))}"
        for ex in examples
    )


def _matches(reference: str, target: str) -> bool:
    if reference == target:
        return True
    if is_instance_id(reference) and is_instance_id(target):
        return False
    return category_of(reference) == category_of(target)


def _first_triple(target: str, locations: Sequence[LocationTriple], containment_only: bool) -> LocationTriple | None:
    for triple in locations:
        if containment_only and triple.relation not in CONTAINMENT_RELATIONS:
            continue
        if triple.relation not in CONTAINMENT_RELATIONS and triple.relation not in SPATIAL_RELATIONS:
            continue
        if _matches(triple.subject, target):
            return triple
    return None


def _container_hops(container: str, locations: Sequence[LocationTriple], seen: set[str]) -> list[Subgoal]:
    if container in seen:
        return []
    seen.add(container)
    outer = _first_triple(container, locations, containment_only=True)
    hops = _container_hops(outer.object, locations, seen) if outer is not None else []
    hops.append(Subgoal(Verb.GO_TO, (container,)))
    if traits_for(category_of(container)).openable:
        hops.append(Subgoal(Verb.OPEN, (container,)))
    return hops


def scripted_chain(target: str, locations: Sequence[LocationTriple]) -> list[Subgoal]:
    """Steps that reveal ``target`` according to the location triples.

    A containment hop opens every openable container on the way, outermost first; a
    spatial hop only walks to the reference object.

    Args:
        target: Instance id or bare category to find.
        locations: Triples mentioned in the dialogue.

    Returns:
        Subgoals to run, empty when no triple mentions the target.
    """
    triple = _first_triple(target, locations, containment_only=False)
    if triple is None:
        return []
    if triple.relation in SPATIAL_RELATIONS:
        return [Subgoal(Verb.GO_TO, (triple.object,))]
    return _container_hops(triple.object, locations, {triple.subject})


def _filter_steps(steps: Sequence[Subgoal], target: str, locations: Sequence[LocationTriple]) -> list[Subgoal]:
    named = {target} | {t.subject for t in locations} | {t.object for t in locations}
    categories = {category_of(n) for n in named}
    kept = [s for s in steps if all(a in named or (not is_instance_id(a) and a in categories) for a in s.args)]
    if len(kept) != len(steps):
        logger.debug(f"Dropped {len(steps) - len(kept)} search steps naming unknown objects")
    return kept


def search_for(
    target: str,
    locations: Sequence[LocationTriple],
    reasoner: Reasoner,
    examples: Sequence[SearchExample] | None = None,
    context: Mapping[str, Any] | None = None,
) -> list[Subgoal]:
    """Ask the reasoner how to reveal an object that is not in memory.

    Args:
        target: Instance id or bare category being searched for.
        locations: Location triples from the plan.
        reasoner: Backend answering the search prompt.
        examples: Fixed demonstrations; the shipped four when omitted.
        context: Extra ``OracleContext`` fields.

    Returns:
        Search steps; empty when the reasoner cannot help.
    """
    examples = load_search_examples() if examples is None else examples
    request = ReasonerRequest(
        TemplateId.SEARCH,
        {
            "RETRIEVED_EXAMPLES": render_search_examples(examples),
            "GOAL": f"find {target}",
            "OBJECT_LOCATIONS": ", ".join(str(t) for t in locations),
        },
        OracleContext(search_target=target, locations=tuple(locations), **dict(context or {})),
    )
    try:
        reply = reasoner.complete(request)
    except ReasonerError as e:
        logger.warning(f"Search for {target} failed: {e}")
        return []
    return _filter_steps(reply.parsed["solution"], target, locations)
