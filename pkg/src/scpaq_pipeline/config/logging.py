"""
Logging configuration for the SC-PAQ pipeline.
"""

import sys
from typing import Optional

from loguru import logger

from .settings import settings

_CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - "
    "<level>{message}</level>"
)
_FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} - {message}"


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None):
    """Configure logging with loguru.

    Everything goes to stderr so that command output on stdout stays
    reproducible. File sinks are only added when a log file is configured.
    """
    level = (level or settings.log_level).upper()
    log_file = log_file if log_file is not None else settings.log_file

    logger.remove()

    logger.add(
        sys.stderr,
        format=_CONSOLE_FORMAT,
        level=level,
        colorize=True,
        backtrace=True,
        diagnose=False,
    )

    if log_file:
        logger.add(
            log_file,
            rotation="10 MB",
            retention="10 days",
            compression="zip",
            level=level,
            format=_FILE_FORMAT,
            backtrace=True,
            diagnose=False,
        )
        logger.add(
            f"{log_file}.json",
            rotation="10 MB",
            retention="10 days",
            compression="zip",
            level=level,
            serialize=True,
        )

    logger.debug(f"Logging configured at level {level}")


def get_logger(name: str = None):
    """Get a logger instance with optional name."""
    if name:
        return logger.bind(name=name)
    return logger


# Initialize logging when module is imported
setup_logging()
