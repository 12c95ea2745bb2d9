"""Deterministic offline backend answering from ground truth."""

from __future__ import annotations

import json
import threading
from collections import deque
from typing import Final

from recovery_agent.reasoner.base import (
    ReasonerReply,
    ReasonerRequest,
    ReasonerUnavailable,
    ReplySchemaError,
    TemplateId,
    extract_structured_block,
    validate_reply,
)
from recovery_agent.reasoner.oracle import answer
from recovery_agent.utils.logger import get_logger

__all__ = ["MAX_LOGGED_CALLS", "ScriptedReasoner"]

MAX_LOGGED_CALLS: Final[int] = 512

logger = get_logger(__name__)


class ScriptedReasoner:
    """Answers every template from the request's ``OracleContext``.

    Prompts are still rendered so that slot mismatches surface exactly as they would
    against a remote model. Replies go through the same extraction and validation.
    """

    def __init__(self, max_logged_calls: int = MAX_LOGGED_CALLS) -> None:
        """Initialize the backend with an empty request log.

        Args:
            max_logged_calls: Most recent requests kept in ``calls``; older ones are dropped.
        """
        self.calls: deque[tuple[TemplateId, str]] = deque(maxlen=max_logged_calls)
        self._lock = threading.Lock()

    def complete(self, request: ReasonerRequest) -> ReasonerReply:
        """Answer one request.

        Args:
            request: Request with template id, slots and oracle context.

        Returns:
            Validated reply.

        Raises:
            ReasonerUnavailable: If the context lacks what the template needs.
            TemplateSlotError: If the slots do not match the template.
        """
        prompt = request.render()
        document = answer(request.template_id, request.context)
        raw = json.dumps(document)
        try:
            parsed = validate_reply(request.template_id, extract_structured_block(raw))
        except ReplySchemaError as e:
            raise ReasonerUnavailable(f"{request.template_id.value}: invalid scripted reply: {e}", raw=raw) from e
        with self._lock:
            self.calls.append((request.template_id, prompt))
        logger.debug(f"{request.template_id.value} -> {raw}")
        return ReasonerReply(raw=raw, parsed=parsed)
