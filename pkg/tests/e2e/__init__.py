"""End-to-end system tests for recovery-agent."""
