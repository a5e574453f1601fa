"""
Logging configuration for robustht
"""

import logging
from pathlib import Path
from typing import Optional

from robustht.config import LOG_LEVEL, LOG_FORMAT, LOG_FILE

def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Setup logging configuration

    Library modules only create loggers; this is called once by the command line
    front end.
    """
    level_name = (level or LOG_LEVEL).upper()
    numeric = getattr(logging, level_name, None)
    if not isinstance(numeric, int):
        raise ValueError(f"unknown log level: {level}")

    handlers = [logging.StreamHandler()]
    target = log_file or LOG_FILE
    if target:
        # Create logs directory
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(target))

    # Configure logging
    logging.basicConfig(
        level=numeric,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True
    )

    logging.getLogger('robustht').setLevel(numeric)

    # Reduce third-party logging
    for logger_name in ('numpy', 'scipy', 'asyncio'):
        logging.getLogger(logger_name).setLevel(logging.WARNING)
