"""Logging setup shared by the command-line tools.

Library modules only call get_logger(). The CLI resolves a LogSettings from
its flags and the TRIQ_LOG_* variables and passes it to setup_logging() once.
Console output goes to stderr; stdout is left for reports.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from utils.env_utils import get_env_var

module_logger = logging.getLogger(__name__)

DEFAULT_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_LOG_DIR = "logs"


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the specified name.

    Args:
        name: The name for the logger, typically __name__ of the calling module.

    Returns:
        A logger instance.

    """
    return logging.getLogger(name)


def parse_log_level(level: str | int) -> int:
    """Translate a level name such as "debug" or "INFO" into a logging level.

    Raises:
        ValueError: If the name is not a known logging level.

    """
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(level.strip().upper())
    if not isinstance(resolved, int):
        msg = f"Unknown log level: '{level}'"
        raise ValueError(msg)
    return resolved


@dataclass(frozen=True)
class LogSettings:
    """Verbosity and log file location for one tool."""

    tool: str = "triq"
    level: int = logging.INFO
    directory: Path | None = Path(DEFAULT_LOG_DIR)
    log_format: str = DEFAULT_LOG_FORMAT

    @property
    def log_file(self) -> Path:
        """`<tool stem>.log` inside the directory (or the working directory)."""
        name = f"{Path(self.tool).stem}.log"
        return self.directory / name if self.directory else Path(name)

    @classmethod
    def resolve(
        cls,
        tool: str,
        level: str | None = None,
        directory: str | None = None,
    ) -> LogSettings:
        """Build settings where flag values win over TRIQ_LOG_LEVEL / TRIQ_LOG_DIR.

        Raises:
            ValueError: If the level name is unknown.

        """
        return cls(
            tool=tool,
            level=parse_log_level(level or get_env_var("TRIQ_LOG_LEVEL", "INFO")),
            directory=Path(
                directory or get_env_var("TRIQ_LOG_DIR", DEFAULT_LOG_DIR),
            ),
        )


def _open_log_file(path: Path) -> logging.Handler | None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return logging.FileHandler(path)
    except OSError as e:
        # No handlers are installed yet.
        sys.stderr.write(
            f"Could not create log file '{path}': {e}. Logging to console only.\n",
        )
        return None


def setup_logging(settings: LogSettings | None = None) -> None:
    """Install a stderr handler and, when possible, a file handler on the root.

    Replaces any handlers configured earlier, so calling it again (as the tests
    do) switches the log file.
    """
    settings = settings or LogSettings()
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    file_handler = _open_log_file(settings.log_file)
    if file_handler is not None:
        handlers.append(file_handler)

    logging.basicConfig(
        level=settings.level,
        format=settings.log_format,
        handlers=handlers,
        force=True,
    )
    module_logger.debug(
        "Logging configured. Level: %s, file: %s",
        logging.getLevelName(settings.level),
        settings.log_file if file_handler is not None else "none",
    )
