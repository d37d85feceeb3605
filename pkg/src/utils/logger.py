"""Logging configuration"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional

from src.config.settings import settings

CONSOLE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None, quiet: bool = False):
    """
    Setup engine logging.

    Reports are printed on stdout by the CLI, so the console handler writes to
    stderr and JSON output stays parseable.

    Args:
        level: Root level name, defaults to settings.LOG_LEVEL
        log_file: Rotating log file path, defaults to settings.LOG_FILE ("" disables it)
        quiet: Raise the console threshold to WARNING

    Returns:
        The configured root logger
    """
    log_file = settings.LOG_FILE if log_file is None else log_file
    level_name = (level or settings.LOG_LEVEL).upper()

    log_dir = os.path.dirname(log_file) if log_file else ""
    if log_dir and not os.path.exists(log_dir):
        os.makedirs(log_dir, exist_ok=True)

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level_name, logging.INFO))

    # Remove existing handlers
    root_logger.handlers = []

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.WARNING if quiet else logging.INFO)
    console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt=DATE_FORMAT))
    root_logger.addHandler(console_handler)

    if log_file:
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt=DATE_FORMAT))
        root_logger.addHandler(file_handler)

    return root_logger
