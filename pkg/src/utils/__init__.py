"""Mesh operations, primitives and logging helpers."""
