"""Prompt template rendering."""

from __future__ import annotations

from typing import Any, Final

from jinja2 import Environment, PackageLoader, StrictUndefined, meta

from recovery_agent.utils.logger import get_logger

__all__ = ["TEMPLATE_FILES", "TemplateEngine", "TemplateSlotError", "get_template_engine", "render_prompt"]

logger = get_logger(__name__)

TEMPLATE_FILES: Final[dict[str, str]] = {
    "plan": "plan.j2",
    "stage1": "stage1.j2",
    "stage2": "stage2.j2",
    "stage3": "stage3.j2",
    "stage4": "stage4.j2",
    "search": "search.j2",
    "normalize": "normalize.j2",
}


class TemplateSlotError(Exception):
    """Raised when prompt slots do not match the template's placeholders."""


class TemplateEngine:
    """Jinja2-based prompt rendering engine.

    Prompts are plain text: no autoescaping, and whitespace is kept byte for byte.
    """

    def __init__(self) -> None:
        """Initialize the template engine."""
        self.env = Environment(
            loader=PackageLoader("recovery_agent", "templates"),
            autoescape=False,
            keep_trailing_newline=True,
            undefined=StrictUndefined,
        )
        self._slots: dict[str, frozenset[str]] = {}

    def slots(self, template_id: str) -> frozenset[str]:
        """Return the placeholder names used by a template.

        Args:
            template_id: Template identifier such as ``stage2``.

        Returns:
            Set of slot names.

        Raises:
            TemplateSlotError: If the template id is unknown.
        """
        if template_id not in TEMPLATE_FILES:
            raise TemplateSlotError(f"Unknown template: {template_id}")
        if template_id not in self._slots:
            loader = self.env.loader
            assert loader is not None
            source, _, _ = loader.get_source(self.env, TEMPLATE_FILES[template_id])
            self._slots[template_id] = frozenset(meta.find_undeclared_variables(self.env.parse(source)))
        return self._slots[template_id]

    def render(self, template_id: str, slots: dict[str, Any]) -> str:
        """Render a prompt, requiring every placeholder and no extra slots.

        Args:
            template_id: Template identifier.
            slots: Slot values.

        Returns:
            Rendered prompt text.

        Raises:
            TemplateSlotError: If slots are missing or unused.
        """
        expected = self.slots(template_id)
        missing = expected - set(slots)
        unused = set(slots) - expected
        if missing:
            raise TemplateSlotError(f"{template_id}: missing slots {sorted(missing)}")
        if unused:
            raise TemplateSlotError(f"{template_id}: unused slots {sorted(unused)}")
        template = self.env.get_template(TEMPLATE_FILES[template_id])
        return template.render(**slots)


# Singleton instance
_template_engine: TemplateEngine | None = None


def get_template_engine() -> TemplateEngine:
    """Get the singleton template engine instance.

    Returns:
        TemplateEngine instance.
    """
    global _template_engine
    if _template_engine is None:
        _template_engine = TemplateEngine()
    return _template_engine


def render_prompt(template_id: str, slots: dict[str, Any]) -> str:
    """Render a prompt template with the given slots.

    Args:
        template_id: Template identifier.
        slots: Slot values.

    Returns:
        Rendered prompt.
    """
    return get_template_engine().render(template_id, slots)
