"""Logging setup: stderr console handler and UTF-8 log file."""

import logging
import sys

import pytest

from scatter_lens.utils.logger import get_logger, setup_logging


@pytest.fixture
def restore_root():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers:
        handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def test_console_handler_writes_to_stderr(restore_root):
    setup_logging(level=logging.INFO, use_colors=False)
    (handler,) = logging.getLogger().handlers
    assert handler.stream is sys.stderr


def test_log_file_is_utf8(restore_root, tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    setup_logging(level=logging.DEBUG, log_file=str(log_file), use_colors=False)
    get_logger("scatter_lens.test").info("✓ ‖S†S − I‖ = 3.1e-12")
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert "✓ ‖S†S − I‖ = 3.1e-12" in log_file.read_text(encoding="utf-8")
