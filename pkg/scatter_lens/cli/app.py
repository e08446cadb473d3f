"""
Command-line driver.

    scatter-lens direct    --potential Q.txt --boundary U.txt --out run/
    scatter-lens inverse   --data run/scattering.txt --out rec/
    scatter-lens roundtrip --potential Q.txt --boundary U.txt --out run/
    scatter-lens stargraph --data run/scattering.txt --out star/
    scatter-lens selftest

Every command prints a summary on stdout (JSON with --json-summary) and exits
with the code of the error that stopped it; see scatter_lens.exceptions.
"""

import argparse
import json
import logging
import sys
from typing import Any, Optional, Sequence

from pydantic import ValidationError as ConfigError

from scatter_lens.config import settings
from scatter_lens.utils.logger import get_logger, setup_logging

from .commands import (
    register_direct_command,
    register_inverse_command,
    register_roundtrip_command,
    register_selftest_command,
    register_stargraph_command,
)
from .runconfig import RunConfig

logger = get_logger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-summary", action="store_true", help="print the result as JSON")
    common.add_argument("--log-level", choices=LOG_LEVELS, help="console and file log level")
    common.add_argument("--log-file", type=str, help="also write the log to this file")

    parser = argparse.ArgumentParser(
        prog="scatter-lens",
        description="Direct and inverse scattering for the matrix Schrödinger operator on the half-line.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="mode", required=True)
    register_direct_command(subparsers, common)
    register_inverse_command(subparsers, common)
    register_roundtrip_command(subparsers, common)
    register_stargraph_command(subparsers, common)
    register_selftest_command(subparsers, common)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """RunConfig from parsed arguments; options left unset keep their defaults."""
    values = {
        name: value
        for name, value in vars(args).items()
        if name in RunConfig.model_fields and value is not None
    }
    return RunConfig(**values)


def print_summary(result: dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(result, indent=2, default=str))
        return
    status = "OK" if result["success"] else f"FAILED ({result.get('error_type')})"
    print(f"status: {status}")
    for key, value in result.items():
        if key in ("success", "cases"):
            continue
        print(f"{key}: {value}")
    for case in result.get("cases", []):
        print(f"{'PASS' if case['passed'] else 'FAIL'} {case['name']}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse ``argv``, run the chosen subcommand and return its exit code.

    Usage errors exit with code 2 through argparse.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    level = getattr(logging, args.log_level) if args.log_level else None
    setup_logging(level=level, log_file=args.log_file)

    try:
        cfg = make_config(args)
    except ConfigError as exc:
        parser.error("; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors()))

    logger.debug(f"running {cfg.mode} with {cfg.model_dump(exclude_none=True)}")
    try:
        result = args.handler(cfg)
    except Exception as exc:
        logger.error(f"Unexpected error in {cfg.mode}: {exc}", exc_info=True)
        result = {"success": False, "error": str(exc), "error_type": type(exc).__name__, "exit_code": 1}

    print_summary(result, cfg.json_summary)
    return int(result["exit_code"])


if __name__ == "__main__":
    sys.exit(main())
