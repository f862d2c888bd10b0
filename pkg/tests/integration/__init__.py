"""Integration tests for cross-module flows."""
