"""Template deformation with constant connectivity."""

from .template import (
    apply_displacement,
    load_displacement,
    make_template,
    parse_displacement,
    random_displacement,
    write_displacement,
)

__all__ = [
    "apply_displacement",
    "load_displacement",
    "make_template",
    "parse_displacement",
    "random_displacement",
    "write_displacement",
]
