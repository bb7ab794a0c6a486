import logging
from functools import wraps
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from decohints import decohints

LOG_FORMAT = "%(asctime)s - [%(levelname)s] - %(name)s - (%(filename)s).%(funcName)s(%(lineno)d): %(message)s"

_root_logger: logging.Logger = logging.getLogger()
_checks_logger = logging.getLogger("bipolar_blowup.checks")
logger = logging.getLogger("bipolar_blowup")


def init_root_logger(
        log_file: Path,
        log_level: int = logging.DEBUG,
        log_max_bytes: int = 3 * 1024 * 1024,
        log_backup_count: int = 2,
) -> RotatingFileHandler:
    """
    Attaches a rotating UTF-8 file handler to the root logger and returns it,
    so a caller running several tasks in one process can detach it again.
    """
    _root_logger.setLevel(log_level)
    log_file.parent.mkdir(parents=True, exist_ok=True)
    rfh = RotatingFileHandler(
        log_file,
        mode='a',
        maxBytes=log_max_bytes,
        backupCount=log_backup_count,
        encoding="utf-8",
        delay=False,
    )
    rfh.setLevel(log_level)
    rfh.setFormatter(logging.Formatter(LOG_FORMAT))
    _root_logger.addHandler(rfh)
    logger.debug(f"{log_file=} {log_level=}")
    return rfh


def close_handler(handler: Optional[logging.Handler]) -> None:
    if handler is None:
        return
    _root_logger.removeHandler(handler)
    handler.close()


@decohints
def log_errors(func):
    """
    Runs a numerical check and turns any exception into a logged error.
    The wrapped call returns None when the check raised.
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            result = func(*args, **kwargs)
        except Exception as err:
            _checks_logger.error(f"{func.__name__}: {err}", exc_info=True)
            return None
        return result

    return wrapper
