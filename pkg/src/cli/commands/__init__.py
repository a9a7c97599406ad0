from cli.commands.base import BaseCommand
from cli.commands.registry import COMMAND_REGISTRY

__all__ = ["BaseCommand", "COMMAND_REGISTRY"]
