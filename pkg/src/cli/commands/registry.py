"""
Command registry.

One command per artifact:
- kernels: return / first-return sequences
- bridge: one range summary
- experiment: range summaries over an n grid from a config file
- lamplighter: projected-range tables
- volume: ball sizes
"""

from __future__ import annotations

from typing import Dict

from .base import BaseCommand
from .bridge import BridgeCommand
from .experiment import ExperimentCommand
from .kernels import KernelsCommand
from .lamplighter import LamplighterCommand
from .volume import VolumeCommand

COMMAND_REGISTRY: Dict[str, BaseCommand] = {
    KernelsCommand.name: KernelsCommand(),
    BridgeCommand.name: BridgeCommand(),
    ExperimentCommand.name: ExperimentCommand(),
    LamplighterCommand.name: LamplighterCommand(),
    VolumeCommand.name: VolumeCommand(),
}
