"""Shared utilities for recovery-agent."""

from __future__ import annotations
