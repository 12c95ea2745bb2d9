"""Integration tests for recovery-agent."""
