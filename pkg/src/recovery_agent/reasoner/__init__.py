"""Reasoner backends behind a single request/reply contract."""

from __future__ import annotations

from recovery_agent.reasoner.base import (
    OracleContext,
    Reasoner,
    ReasonerError,
    ReasonerReply,
    ReasonerRequest,
    ReasonerUnavailable,
    ReplySchemaError,
    TemplateId,
)

__all__ = [
    "OracleContext",
    "Reasoner",
    "ReasonerError",
    "ReasonerReply",
    "ReasonerRequest",
    "ReasonerUnavailable",
    "ReplySchemaError",
    "TemplateId",
]
