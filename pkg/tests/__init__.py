"""Test suite for MeshForge."""
