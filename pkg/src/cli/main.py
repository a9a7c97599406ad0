"""Entry point of the `bridgewalk` command."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import NoReturn, Sequence

from cli.commands import COMMAND_REGISTRY
from config import get_settings
from config.logging import setup_logging
from utils.errors import BridgewalkError, UsageError

logger = logging.getLogger("bridgewalk.cli")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bridgewalk", description=__doc__)
    parser.add_argument("--log-level", dest="log_level", help="override BRIDGEWALK_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, command in COMMAND_REGISTRY.items():
        sub = subparsers.add_parser(name, help=command.help, description=command.__doc__)
        command.add_arguments(sub)
    return parser


def run_command(argv: Sequence[str] | None = None) -> int:
    """Parse argv, run one command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        settings = get_settings()
        setup_logging(args.log_level or settings.log_level)
        logger.debug("Settings: %s", settings.as_log_context())
        return COMMAND_REGISTRY[args.command](args, settings)
    except BridgewalkError as exc:
        message = " ".join(str(exc).split("\n"))
        print(f"ERROR {exc.code}: {message}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        message = " ".join(str(exc).split("\n"))
        print(f"ERROR {UsageError.code}: {message}", file=sys.stderr)
        return UsageError.exit_code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
