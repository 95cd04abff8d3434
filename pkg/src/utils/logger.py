"""
Logging configuration
"""

import logging
import sys
from typing import Optional

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
WORKER_FORMAT = '%(asctime)s - %(processName)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(
    name: str = 'cojump',
    level: str = 'INFO',
    format_string: Optional[str] = None,
    workers: int = 1
) -> logging.Logger:
    """
    Configure a stdout logger for simulation runs.

    Components log under their class or module names, so the CLI passes
    ``name=''`` to put the handler on the root logger. Warnings raised by
    numpy and scipy (quadrature, overflow) are routed through logging.

    Args:
        name: Logger name ('' for the root logger)
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        format_string: Custom format string
        workers: Replicate workers; above 1 the process name is logged

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    log_level = getattr(logging, level.upper(), logging.INFO)
    logger.setLevel(log_level)

    # One handler per logger; a second call only changes the level
    if logger.handlers:
        for handler in logger.handlers:
            handler.setLevel(log_level)
        return logger

    if format_string is None:
        format_string = WORKER_FORMAT if workers > 1 else DEFAULT_FORMAT

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(logging.Formatter(format_string))
    logger.addHandler(console_handler)

    logging.captureWarnings(True)
    return logger
