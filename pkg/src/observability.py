"""
Structured logging setup.

Logs go to stderr so that CSV/JSON written to stdout stays machine-readable.
LOG_LEVEL and LOG_FORMAT may be supplied through the environment or a .env file.
"""

from __future__ import annotations

import logging
import os
import sys

import structlog
from dotenv import load_dotenv

_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}


def configure_logging(level: str | None = None, json_output: bool | None = None) -> None:
    """Configure structlog processors for the process."""
    load_dotenv(override=False)
    level_name = (level or os.getenv("LOG_LEVEL", "warning")).lower()
    if level_name not in _LEVELS:
        level_name = "warning"
    if json_output is None:
        json_output = os.getenv("LOG_FORMAT", "console").lower() == "json"

    renderer: structlog.types.Processor
    if json_output:
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(_LEVELS[level_name]),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
