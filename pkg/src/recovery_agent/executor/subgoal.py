"""High-level subgoals and their textual form ``Verb(Arg[,Arg])``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Final

__all__ = ["Subgoal", "SubgoalParseError", "Verb", "parse_subgoal", "parse_subgoals"]


class SubgoalParseError(Exception):
    """Raised when a subgoal string is malformed or uses an unknown verb."""


class Verb(str, Enum):
    """The fourteen subgoal verbs."""

    FIND = "Find"
    GO_TO = "Go_to"
    PICK_UP = "Pick_up"
    PLACE = "Place"
    OPEN = "Open"
    CLOSE = "Close"
    TOGGLE_ON = "Toggle_on"
    TOGGLE_OFF = "Toggle_off"
    SLICE = "Slice"
    POUR = "Pour"
    FILL_WITH_WATER = "Fill_with_water"
    CLEAN = "Clean"
    EMPTY = "Empty"
    PUT_AWAY = "Put_away"

    @property
    def arity(self) -> int:
        """Number of object arguments the verb takes."""
        return 2 if self in (Verb.PLACE, Verb.POUR) else 1


_VERBS_BY_KEY: Final[dict[str, Verb]] = {v.value.lower().replace("_", ""): v for v in Verb}
_SUBGOAL_PATTERN = re.compile(r"^\s*([A-Za-z_ ]+?)\s*\((.*)\)\s*$")
_ARG_PATTERN = re.compile(r"^[A-Za-z]+(_\d+)?$")


@dataclass(frozen=True)
class Subgoal:
    """One verb applied to one or two object references (ids or bare categories)."""

    verb: Verb
    args: tuple[str, ...]

    def __post_init__(self) -> None:
        """Validate the arity."""
        if len(self.args) != self.verb.arity:
            raise SubgoalParseError(f"{self.verb.value} takes {self.verb.arity} argument(s), got {len(self.args)}")

    @property
    def target(self) -> str:
        """The object acted upon: the receptacle for Place/Pour, else the only argument."""
        return self.args[-1]

    @property
    def subject(self) -> str:
        """The first argument."""
        return self.args[0]

    def replace_arg(self, old: str, new: str) -> Subgoal:
        """Return a copy with every occurrence of ``old`` replaced by ``new``."""
        return Subgoal(self.verb, tuple(new if a == old else a for a in self.args))

    def __str__(self) -> str:
        """Render as ``Verb(A)`` or ``Verb(A,B)``."""
        return f"{self.verb.value}({','.join(self.args)})"


def parse_subgoal(text: str) -> Subgoal:
    """Parse ``Verb(Arg)`` or ``Verb(Arg1,Arg2)``.

    Verb matching ignores case and underscores, so ``pick_up`` and ``PickUp`` both work.

    Args:
        text: Subgoal string.

    Returns:
        Parsed Subgoal.

    Raises:
        SubgoalParseError: If the string is malformed.
    """
    if not isinstance(text, str):
        raise SubgoalParseError(f"Expected a subgoal string, got {type(text).__name__}")
    match = _SUBGOAL_PATTERN.match(text)
    if not match:
        raise SubgoalParseError(f"Malformed subgoal: {text!r}")
    key = match.group(1).lower().replace("_", "").replace(" ", "")
    verb = _VERBS_BY_KEY.get(key)
    if verb is None:
        raise SubgoalParseError(f"Unknown verb in subgoal: {text!r}")
    args = tuple(a.strip() for a in match.group(2).split(",")) if match.group(2).strip() else ()
    for arg in args:
        if not _ARG_PATTERN.match(arg):
            raise SubgoalParseError(f"Malformed argument {arg!r} in subgoal {text!r}")
    return Subgoal(verb, args)


def parse_subgoals(items: list[str] | tuple[str, ...]) -> list[Subgoal]:
    """Parse a list of subgoal strings, failing on the first malformed entry."""
    return [parse_subgoal(item) for item in items]
