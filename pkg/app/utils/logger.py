# app/utils/logger.py
import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Optional

from app.config.settings import settings


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Setup application logging configuration."""

    level_name = (level or settings.log_level).upper()
    log_file_path = Path(log_file or settings.log_file)

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level_name))

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(formatter)
    console_handler.setLevel(getattr(logging, level_name))
    root_logger.addHandler(console_handler)

    # File handler with rotation
    try:
        log_file_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_file_path,
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5
        )
        file_handler.setFormatter(formatter)
        file_handler.setLevel(getattr(logging, level_name))
        root_logger.addHandler(file_handler)
    except OSError as e:
        root_logger.warning(f"Could not setup file logging: {e}")

    # joblib workers are chatty at DEBUG
    logging.getLogger('joblib').setLevel(logging.WARNING)

    logging.debug("Logging configuration setup completed")
