"""Logging setup for command-line entry points."""

import logging
import sys

from src.config import settings


LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class _StderrHandler(logging.StreamHandler):
    """Stream handler that follows ``sys.stderr`` when it is swapped."""

    def emit(self, record: logging.LogRecord) -> None:
        self.stream = sys.stderr
        super().emit(record)


def configure_logging(level: str | None = None) -> None:
    """Route ``src.*`` loggers to stderr at the given or configured level.

    Stdout is reserved for reports, so handlers never write there.
    """
    root = logging.getLogger("src")
    root.setLevel((level or settings.LOG_LEVEL).upper())
    if not any(isinstance(handler, _StderrHandler) for handler in root.handlers):
        handler = _StderrHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
