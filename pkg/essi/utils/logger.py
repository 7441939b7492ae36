"""
Logging utility for ESSI
"""

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _log_file_path(log_dir: Optional[str]) -> Optional[Path]:
    if not log_dir:
        return None
    directory = Path(log_dir)
    directory.mkdir(parents=True, exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    return directory / f"essi_{timestamp}.log"


def get_logger(name: str, level: int = logging.INFO,
               log_file: Optional[str] = None) -> logging.Logger:
    """
    Get a configured logger instance

    Console output goes to stderr; stdout carries report data only.

    Args:
        name: Logger name (usually __name__)
        level: Logging level
        log_file: Optional log file path

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    # Avoid adding handlers multiple times
    if logger.handlers:
        return logger

    logger.setLevel(level)
    logger.propagate = False

    formatter = logging.Formatter(LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file is not None:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def setup_logging(verbose: bool = False, level: str = "INFO",
                  log_dir: Optional[str] = None) -> None:
    """Setup global logging configuration"""
    resolved = logging.DEBUG if verbose else getattr(logging, str(level).upper(), logging.INFO)

    handlers = [logging.StreamHandler(sys.stderr)]
    log_path = _log_file_path(log_dir)
    if log_path is not None:
        handlers.append(logging.FileHandler(log_path))

    logging.basicConfig(level=resolved, format=LOG_FORMAT, handlers=handlers, force=True)

    # Loggers handed out by get_logger carry their own handlers
    for name, existing in logging.root.manager.loggerDict.items():
        if name.startswith("essi") and isinstance(existing, logging.Logger):
            existing.setLevel(resolved)
            for handler in existing.handlers:
                if not isinstance(handler, logging.FileHandler):
                    handler.setLevel(resolved)
            if log_path is not None and not any(isinstance(h, logging.FileHandler)
                                                for h in existing.handlers):
                file_handler = logging.FileHandler(log_path)
                file_handler.setLevel(logging.DEBUG)
                file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
                existing.addHandler(file_handler)
