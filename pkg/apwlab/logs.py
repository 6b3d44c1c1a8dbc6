import logging
import os
from pathlib import Path

from . import settings

_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def get_logger(name: str) -> logging.Logger:
    """Named logger with a console handler (and a file handler if APW_LOG_FILE is set)."""
    logger = logging.getLogger(name)
    level = getattr(logging, settings.log_level(), logging.INFO)
    if not logger.handlers:
        fmt = logging.Formatter(_FORMAT)
        stream = logging.StreamHandler()
        stream.setLevel(level)
        stream.setFormatter(fmt)
        logger.addHandler(stream)
        path = settings.log_file()
        if path:
            try:
                Path(path).parent.mkdir(parents=True, exist_ok=True)
                file_handler = logging.FileHandler(path)
                file_handler.setLevel(level)
                file_handler.setFormatter(fmt)
                logger.addHandler(file_handler)
            except OSError:
                pass
        logger.propagate = False
    logger.setLevel(level)
    return logger


def attach_file(path: str) -> None:
    """Add a file handler to every apwlab logger created so far (the CLI --log-file flag)."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fmt = logging.Formatter(_FORMAT)
    for name, logger in list(logging.root.manager.loggerDict.items()):
        if not name.startswith("apwlab") or not isinstance(logger, logging.Logger):
            continue
        if any(isinstance(h, logging.FileHandler) and h.baseFilename == os.path.abspath(path) for h in logger.handlers):
            continue
        handler = logging.FileHandler(path)
        handler.setLevel(logger.level)
        handler.setFormatter(fmt)
        logger.addHandler(handler)
