"""Stderr logging for the CLI; stdout stays reserved for command output."""

from __future__ import annotations

import logging
import sys

from qaoactl.core.config import get_settings

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logging(level: str | None = None) -> logging.Logger:
    """
    Configure the root logger once per process.

    ``level`` (the ``--log-level`` flag) wins over ``Settings.log_level``, which reads
    QAOACTL_LOG_LEVEL. Unknown names fall back to INFO.
    """
    name = (level or get_settings().log_level).upper()
    # getLevelNamesMapping() is 3.11+; on older Pythons it is exactly a copy of _nameToLevel.
    mapping = logging.getLevelNamesMapping() if hasattr(logging, "getLevelNamesMapping") else dict(logging._nameToLevel)
    log_level = mapping.get(name, logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
    root_logger.addHandler(handler)
    return root_logger


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
