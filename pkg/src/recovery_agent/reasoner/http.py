"""Chat-completion HTTP backend."""

from __future__ import annotations

import os
import threading
import time
from typing import Any, Final

import requests

from recovery_agent.config import ReasonerConfig
from recovery_agent.reasoner.base import (
    ReasonerReply,
    ReasonerRequest,
    ReasonerUnavailable,
    ReplySchemaError,
    extract_structured_block,
    validate_reply,
)
from recovery_agent.utils.logger import get_logger

__all__ = ["SYSTEM_PROMPT", "WIRE_FORMATS", "HttpReasoner"]

logger = get_logger(__name__)

SYSTEM_PROMPT: Final[str] = "You are a helpful household robot assistant. Answer with JSON only."
WIRE_FORMATS: Final[tuple[str, ...]] = ("openai", "ollama")

_SEMAPHORES: dict[int, threading.BoundedSemaphore] = {}
_SEMAPHORES_LOCK = threading.Lock()


def _shared_semaphore(limit: int) -> threading.BoundedSemaphore:
    """Process-wide semaphore bounding in-flight requests for a given limit."""
    with _SEMAPHORES_LOCK:
        if limit not in _SEMAPHORES:
            _SEMAPHORES[limit] = threading.BoundedSemaphore(limit)
        return _SEMAPHORES[limit]


class HttpReasoner:
    """Renders prompts and posts them to a chat-completion endpoint.

    Every attempt is a fresh POST; transport errors and schema errors both consume an
    attempt. After the first attempt and ``max_retries`` retries the call raises
    ``ReasonerUnavailable``.
    """

    def __init__(self, config: ReasonerConfig, session: requests.Session | None = None) -> None:
        """Initialize the backend.

        Args:
            config: Endpoint, model and retry settings.
            session: HTTP session to reuse; a new one is created if omitted.
        """
        if config.wire_format not in WIRE_FORMATS:
            raise ValueError(f"wire_format must be one of {', '.join(WIRE_FORMATS)}")
        self.config = config
        self.session = session or requests.Session()
        self._semaphore = _shared_semaphore(max(1, config.max_in_flight))

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.config.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        return headers

    def _payload(self, prompt: str) -> dict[str, Any]:
        messages = [{"role": "system", "content": SYSTEM_PROMPT}, {"role": "user", "content": prompt}]
        if self.config.wire_format == "ollama":
            return {
                "model": self.config.model,
                "messages": messages,
                "stream": False,
                "options": {"temperature": self.config.temperature},
            }
        return {
            "model": self.config.model,
            "messages": messages,
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        }

    def _content(self, data: Any) -> str:
        try:
            if self.config.wire_format == "ollama":
                content = data["message"]["content"]
            else:
                content = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as e:
            raise ReplySchemaError(f"Unexpected response shape: {e}") from e
        if not isinstance(content, str):
            raise ReplySchemaError("Response content is not text")
        return content

    def post(self, prompt: str) -> str:
        """Send one prompt and return the assistant text.

        Raises:
            requests.RequestException: On transport or HTTP errors.
            ReplySchemaError: If the response body has an unexpected shape.
        """
        with self._semaphore:
            response = self.session.post(
                self.config.endpoint,
                json=self._payload(prompt),
                headers=self._headers(),
                timeout=self.config.timeout,
            )
        response.raise_for_status()
        return self._content(response.json())

    def complete(self, request: ReasonerRequest) -> ReasonerReply:
        """Answer a request via the remote model.

        Args:
            request: Request to render and send.

        Returns:
            Validated reply.

        Raises:
            ReasonerUnavailable: If every attempt failed.
        """
        prompt = request.render()
        attempts = 1 + max(0, self.config.max_retries)
        last_error: Exception | None = None
        last_raw: str | None = None
        for attempt in range(1, attempts + 1):
            try:
                raw = self.post(prompt)
                last_raw = raw
                parsed = validate_reply(request.template_id, extract_structured_block(raw))
                logger.debug(f"{request.template_id.value} reply accepted on attempt {attempt}")
                return ReasonerReply(raw=raw, parsed=parsed)
            except (requests.RequestException, ValueError, ReplySchemaError) as e:
                last_error = e
                logger.warning(f"{request.template_id.value} attempt {attempt}/{attempts} failed: {e}")
                if attempt < attempts:
                    time.sleep(self.config.retry_backoff * attempt)
        raise ReasonerUnavailable(
            f"{request.template_id.value}: no valid reply after {attempts} attempts: {last_error}",
            raw=last_raw,
        ) from last_error
