"""
Utility functions shared by the prover modules.
Contains logging setup and small formatting helpers.
"""

import logging
import re
import sys
from typing import List, Optional, Tuple, Union

from .models import LoggingConfig

logger = logging.getLogger(__name__)

_DIGITS = re.compile(r'(\d+)')

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(config: Optional[LoggingConfig] = None) -> logging.Logger:
    """
    Install a single stream handler on the package logger.

    Args:
        config: Logging configuration; defaults to WARNING on stderr

    Returns:
        The configured package logger
    """
    if config is None:
        config = LoggingConfig()

    package_logger = logging.getLogger(config.logger_name)
    for handler in list(package_logger.handlers):
        if getattr(handler, "_ik_prover_handler", False):
            package_logger.removeHandler(handler)

    if not config.enable_logging:
        package_logger.setLevel(logging.CRITICAL + 1)
        return package_logger

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._ik_prover_handler = True  # type: ignore[attr-defined]
    package_logger.addHandler(handler)
    package_logger.setLevel(parse_log_level(config.log_level))
    package_logger.propagate = False
    return package_logger


def parse_log_level(level: Union[str, int]) -> int:
    """Translate a level name such as 'debug' into its numeric value."""
    if isinstance(level, int):
        return level
    value = logging.getLevelName(level.strip().upper())
    if isinstance(value, int):
        return value
    logger.warning(f"Unknown log level {level!r}, using WARNING")
    return logging.WARNING


def natural_sort_key(text: str) -> Tuple[Tuple[int, Union[int, str]], ...]:
    """Sort key ordering 'x2' before 'x10'."""
    parts: List[Tuple[int, Union[int, str]]] = []
    for chunk in _DIGITS.split(text):
        if not chunk:
            continue
        # tagged so ints and strs never meet at the same index
        parts.append((0, int(chunk)) if chunk.isdigit() else (1, chunk))
    return tuple(parts)


def shorten(text: str, limit: int = 120) -> str:
    """Cut long strings for log messages."""
    if len(text) <= limit:
        return text
    return text[: limit - 3] + "..."
