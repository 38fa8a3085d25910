"""Package logger.

Set FISHER_RAO_LOG=debug (or info/warning/error) to see solver activity:
shooting residuals and integrator rejections at DEBUG, fallbacks at INFO,
failed pairs and k-means reseeds at WARNING.
"""

from __future__ import annotations

import logging
import os

__all__ = ["LOG_FORMAT", "logger"]

LOG_FORMAT = "%(asctime)s [fisher_rao] %(levelname)s %(message)s"

logger = logging.getLogger("fisher_rao")


def _configure(level_name: str) -> None:
    level = logging.getLevelName(level_name.strip().upper())
    if not isinstance(level, int):
        return
    logger.setLevel(level)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False


_configure(os.environ.get("FISHER_RAO_LOG", ""))
