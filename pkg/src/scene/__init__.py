"""Scene script parsing and execution."""

from .parser import INTERACTIVE_VERBS, parse_script
from .executor import execute

__all__ = ["INTERACTIVE_VERBS", "execute", "parse_script"]
