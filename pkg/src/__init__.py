"""MeshForge: headless solid modeling, shape matching and printable-mesh export."""

__version__ = "0.1.0"
