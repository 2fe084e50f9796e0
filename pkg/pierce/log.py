# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import logging
import os
import sys

logger: logging.Logger = None

# --- Logging configuration ---

class ColorFormatter(logging.Formatter):
    COLORS = {
        "DEBUG": "\033[36m",    # CYAN
        "INFO": "\033[34m",     # Blue
        "WARNING": "\033[33m",  # Yellow
        "ERROR": "\033[31m",    # Red
        "CRITICAL": "\033[41m", # Red background
    }
    BOLD = "\033[1m"
    PURPLE = "\033[35m"
    GRAY = "\033[90m"
    RESET = "\033[0m"

    def format(self, record):
        # Work on a copy, the file handler formats the same record
        record = logging.makeLogRecord(record.__dict__)
        padded_levelname = f"{record.levelname:<8}"
        color = self.COLORS.get(record.levelname, "")
        record.levelname = f"{self.BOLD}{color}{padded_levelname}{self.RESET}"
        record.name = f"{self.PURPLE}{record.name}{self.RESET}"
        return super().format(record)

    def formatTime(self, record, datefmt=None):
        asctime = super().formatTime(record, datefmt)
        return f"{self.BOLD}{self.GRAY}{asctime}{self.RESET}"

def setup_logger(
    logger_name: str = "pierce",
    file_level: str = "INFO",
    console_level: str = "WARNING",
    log_file: str | None = "pierce.log"
) -> None:
    """
    Set up the package logger with the given name and logging levels.
    Levels should be strings like 'INFO', 'DEBUG', etc.
    An empty or None `log_file` disables the file handler.
    """
    # getLevelNamesMapping is 3.11+; same mapping as _nameToLevel on older versions
    logLevels = logging.getLevelNamesMapping() if hasattr(logging, "getLevelNamesMapping") else dict(logging._nameToLevel)
    file_logLevel = logLevels.get(file_level.upper(), logging.INFO)
    console_logLevel = logLevels.get(console_level.upper(), logging.WARNING)

    global logger
    logger = logging.getLogger(logger_name)
    logger.propagate = False

    handlers: list[logging.Handler] = []

    # File handler
    if log_file:
        path = os.path.abspath(log_file)
        file_handler = logging.FileHandler(path, encoding="utf-8")
        file_handler.setLevel(file_logLevel)
        file_handler.setFormatter(logging.Formatter(
            "%(asctime)s [%(levelname)-8s] %(name)s: %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        ))
        handlers.append(file_handler)
        logger.setLevel(min(file_logLevel, console_logLevel))
    else:
        logger.setLevel(console_logLevel)

    # Console handler, on stderr so stdout stays machine readable
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_logLevel)
    console_handler.setFormatter(ColorFormatter(
        "%(asctime)s %(levelname)-8s %(name)s %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S"
    ))
    handlers.append(console_handler)

    # Add handlers if not already present
    if not logger.handlers:
        for handler in handlers:
            logger.addHandler(handler)

def setup_from_env() -> None:
    setup_logger(
        logger_name=os.getenv("LOG_NAME", "pierce"),
        file_level=os.getenv("LOG_FILE_LEVEL", "INFO"),
        console_level=os.getenv("LOG_CONSOLE_LEVEL", "WARNING"),
        log_file=os.getenv("LOG_FILE", "pierce.log")
    )

# --- Logging functions ---
def require_logger(func):
    def wrapper(msg: str, *args, **kwargs):
        if logger is None:
            # Library use without the CLI: quiet console logger only.
            setup_logger(log_file=None)
        return func(msg, *args, **kwargs)
    return wrapper

@require_logger
def debug(msg: str) -> None:
    logger.debug(msg)

@require_logger
def info(msg: str) -> None:
    logger.info(msg)

@require_logger
def warning(msg: str) -> None:
    logger.warning(msg)

@require_logger
def error(msg: str, stacktrace: bool = False) -> None:
    logger.error(msg, stack_info=stacktrace, stacklevel=3)

# --- User facing helpers ---

def client(msg: str) -> None:
    """Writes a user facing message on stdout"""
    print(msg, file=sys.stdout)

def success(msg: str) -> None:
    info(msg)
    client(msg)

def failure(msg: str, stacktrace: bool = False) -> None:
    error(msg, stacktrace)
    print(f"error: {msg}", file=sys.stderr)
