import logging
import os
import sys
from datetime import datetime


def setup_logging(log_level=logging.INFO, log_to_file=False):
    """
    Configure logging for the form analyzer.

    Log records go to stderr so that report JSON on stdout stays clean.

    Args:
        log_level (int): The logging level to use (default: logging.INFO).
        log_to_file (bool): Whether to also log to a timestamped file under ``logs/``.
    """
    if log_to_file:
        os.makedirs("logs", exist_ok=True)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    logger = logging.getLogger()
    logger.setLevel(log_level)

    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_to_file:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        file_handler = logging.FileHandler(f"logs/form_analyzer_{timestamp}.log")
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.debug("Logging configured for form analyzer")
