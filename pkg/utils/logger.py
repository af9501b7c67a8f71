# utils/logger.py
import logging
import os
import sys
from typing import Dict
import threading

# Thread-local storage for context variables
_local_context = threading.local()

LOG_FORMAT = '%(asctime)s - [RUN:%(run_id)s] [CELL:%(cell_id)s] - %(name)s - %(levelname)s - %(message)s'
LOG_FILE_NAME = "nu_engine.log"
CONTEXT_KEYS = ("run_id", "cell_id")


def set_context(run_id: str = None, cell_id: str = None):
    """
    Set context variables for logging. Empty values leave the current ones.

    Args:
        run_id: Engine run ID
        cell_id: Table cell or oracle case being processed
    """
    for key, value in zip(CONTEXT_KEYS, (run_id, cell_id)):
        if value:
            setattr(_local_context, key, value)


def get_context() -> Dict[str, str]:
    """Context variables set on the current thread."""
    return {key: getattr(_local_context, key) for key in CONTEXT_KEYS if hasattr(_local_context, key)}


def clear_context():
    for key in CONTEXT_KEYS:
        if hasattr(_local_context, key):
            delattr(_local_context, key)


class ContextFilter(logging.Filter):
    """Filter that adds context variables to log records."""

    def filter(self, record):
        context = get_context()
        for key in CONTEXT_KEYS:
            setattr(record, key, context.get(key, "global"))
        return True


class ContextAwareRotatingFileHandler(logging.FileHandler):
    """
    A logging handler that writes to different files based on context.
    """

    def __init__(self, base_dir: str, level=logging.NOTSET):
        """
        Initialize with base directory instead of a specific filename.

        Args:
            base_dir: Base directory for log files
            level: Logging level
        """
        # Actual files are chosen in emit()
        super().__init__(os.path.join(base_dir, LOG_FILE_NAME), delay=True)
        self.base_dir = base_dir
        self.level = level
        self._open_handlers = {}

    def emit(self, record):
        """
        Emit a record, determining the appropriate file based on context.

        Args:
            record: LogRecord object
        """
        if record.levelno < self.level:
            return

        run_id = getattr(record, 'run_id', 'global')
        cell_id = getattr(record, 'cell_id', 'global')

        # Records outside any run go to the global file only
        if run_id == 'global':
            return

        log_dir = os.path.join(self.base_dir, run_id, cell_id)
        log_file = os.path.join(log_dir, LOG_FILE_NAME)

        if log_file not in self._open_handlers:
            try:
                os.makedirs(log_dir, exist_ok=True)
                handler = logging.FileHandler(log_file)
                handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
                self._open_handlers[log_file] = handler
            except Exception as e:
                sys.stderr.write(f"Error creating log handler: {str(e)}\n")
                return

        try:
            self._open_handlers[log_file].emit(record)
        except Exception as e:
            sys.stderr.write(f"Error writing to log: {str(e)}\n")

    def close(self):
        """Close all open handlers."""
        for handler in self._open_handlers.values():
            handler.close()
        self._open_handlers.clear()
        super().close()


def setup_logging(base_dir: str = None, level: int = logging.INFO) -> None:
    """
    Set up global logging configuration.

    Args:
        base_dir: Base directory for logs (LOG_DIR or 'logs' when omitted)
        level: Logging level
    """
    base_dir = base_dir or os.environ.get("LOG_DIR", "logs")
    os.makedirs(base_dir, exist_ok=True)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
        handler.close()

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(level)

    file_handler = logging.FileHandler(os.path.join(base_dir, LOG_FILE_NAME))
    file_handler.setLevel(level)

    context_handler = ContextAwareRotatingFileHandler(base_dir, level)

    formatter = logging.Formatter(LOG_FORMAT, datefmt='%Y-%m-%d %H:%M:%S')

    context_filter = ContextFilter()
    for handler in (console_handler, file_handler, context_handler):
        handler.addFilter(context_filter)
    console_handler.setFormatter(formatter)
    file_handler.setFormatter(formatter)

    root_logger.addHandler(console_handler)
    root_logger.addHandler(file_handler)
    root_logger.addHandler(context_handler)

    logging.debug("Logging system initialized")


# Initialize logging at import time
setup_logging()


def get_logger(name: str, level: int = logging.INFO) -> logging.Logger:
    """
    Get a logger with the specified name and level.

    Args:
        name: Logger name
        level: Logging level

    Returns:
        Configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    return logger


def get_cell_logger(name: str, run_id: str, cell_id: str,
                    level: int = logging.INFO) -> logging.Logger:
    """
    Get a logger pre-configured for a specific table cell.

    Args:
        name: Logger name
        run_id: Engine run ID
        cell_id: Cell ID
        level: Logging level

    Returns:
        Configured logger with cell context
    """
    set_context(run_id, cell_id)
    return get_logger(name, level)


def log_exception(e: Exception, logger_name: str = None) -> None:
    """
    Log an exception with the current context.

    Args:
        e: Exception to log
        logger_name: Optional logger name (uses root logger if None)
    """
    logger = get_logger(logger_name) if logger_name else logging.getLogger()
    context_str = " ".join(f"{k}={v}" for k, v in get_context().items()) or "no context"
    logger.exception(f"Exception occurred [{context_str}]: {str(e)}")

