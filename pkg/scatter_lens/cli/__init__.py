"""Command-line interface."""

from .app import build_parser, main
from .runconfig import RunConfig

__all__ = ["main", "build_parser", "RunConfig"]
